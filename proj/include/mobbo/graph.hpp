#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mobbo/error.hpp"

namespace mobbo {

using NodeId = std::uint32_t;
using AttributeValue = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Undirected, unweighted graph with categorical node attributes.
//
// Internal ids are dense and 0-based; the external string id of each node is
// kept for output. Adjacency rows are sorted and duplicate-free. Attribute
// values are interned per column, so value ids of attribute h are in
// [0, domain_size(h)). Immutable after construction.
class AttributedNetwork {
 public:
  AttributedNetwork() = default;

  // Builds a network over nodes 0..node_count-1 with external ids "0", "1",
  // ... . `attributes[v]` holds one value per attribute column; when empty,
  // every node gets a single attribute with value 0. Duplicate edges are
  // collapsed; self-loops and isolated nodes are rejected.
  static AttributedNetwork from_edges(
      std::size_t node_count, std::span<const Edge> edges,
      const std::vector<std::vector<AttributeValue>>& attributes = {}) {
    std::vector<std::string> ids(node_count);
    for (std::size_t v = 0; v < node_count; ++v) ids[v] = std::to_string(v);

    std::size_t attribute_count = attributes.empty() ? 1 : attributes.front().size();
    if (!attributes.empty() && attributes.size() != node_count) {
      throw Error(ErrorCode::kMissingAttributeRow,
                  "expected " + std::to_string(node_count) + " attribute rows");
    }
    std::vector<std::vector<std::string>> values(node_count);
    for (std::size_t v = 0; v < node_count; ++v) {
      if (attributes.empty()) {
        values[v] = {"0"};
        continue;
      }
      if (attributes[v].size() != attribute_count) {
        throw Error(ErrorCode::kMalformedLine,
                    "node " + std::to_string(v) + " has the wrong number of attributes");
      }
      for (AttributeValue a : attributes[v]) values[v].push_back(std::to_string(a));
    }
    std::vector<std::string> names;
    for (std::size_t h = 0; h < attribute_count; ++h) names.push_back("attr" + std::to_string(h + 1));

    return AttributedNetwork("node", std::move(ids), edges, std::move(names), values,
                             /*drop_isolated=*/false);
  }

  std::size_t node_count() const noexcept { return node_ids_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t attribute_count() const noexcept { return attribute_names_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    check_node(v);
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeId v) const {
    check_node(v);
    return offsets_[v + 1] - offsets_[v];
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  AttributeValue attribute(NodeId v, std::size_t h) const {
    check_node(v);
    return attributes_[static_cast<std::size_t>(v) * attribute_count() + h];
  }

  std::size_t domain_size(std::size_t h) const { return domains_[h].size(); }
  const std::string& attribute_name(std::size_t h) const { return attribute_names_[h]; }
  const std::string& attribute_label(std::size_t h, AttributeValue value) const {
    return domains_[h][value];
  }

  const std::string& external_id(NodeId v) const {
    check_node(v);
    return node_ids_[v];
  }

  // Returns node_count() when `id` is unknown.
  NodeId find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? static_cast<NodeId>(node_count()) : it->second;
  }

  const std::string& node_column_name() const noexcept { return node_column_; }

 private:
  friend AttributedNetwork load_network(std::istream&, std::istream&, bool);

  // `ids` fixes the internal order; `edges` index into `ids`.
  AttributedNetwork(std::string node_column, std::vector<std::string> ids,
                    std::span<const Edge> edges, std::vector<std::string> attribute_names,
                    const std::vector<std::vector<std::string>>& values, bool drop_isolated) {
    const std::size_t n = ids.size();
    std::vector<std::vector<NodeId>> rows(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw Error(ErrorCode::kOutOfRangeNode, "edge endpoint out of range");
      if (u == v) throw Error(ErrorCode::kSelfLoop, "self-loop on node '" + ids[u] + "'");
      rows[u].push_back(v);
      rows[v].push_back(u);
    }
    for (auto& row : rows) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    std::vector<NodeId> remap(n);
    std::vector<NodeId> kept;
    for (NodeId v = 0; v < n; ++v) {
      if (rows[v].empty()) {
        if (!drop_isolated) {
          throw Error(ErrorCode::kIsolatedNode, "node '" + ids[v] + "' has no edges");
        }
        continue;
      }
      remap[v] = static_cast<NodeId>(kept.size());
      kept.push_back(v);
    }
    if (kept.size() < 2) {
      throw Error(ErrorCode::kEmptyNetwork, "network needs at least two connected nodes");
    }

    node_column_ = std::move(node_column);
    attribute_names_ = std::move(attribute_names);
    domains_.resize(attribute_names_.size());
    std::vector<std::unordered_map<std::string, AttributeValue>> interned(attribute_names_.size());

    offsets_.push_back(0);
    for (NodeId old : kept) {
      const NodeId v = static_cast<NodeId>(node_ids_.size());
      node_ids_.push_back(ids[old]);
      index_.emplace(ids[old], v);
      for (NodeId w : rows[old]) targets_.push_back(remap[w]);
      offsets_.push_back(targets_.size());

      for (std::size_t h = 0; h < attribute_names_.size(); ++h) {
        const std::string& label = values[old][h];
        auto [it, inserted] =
            interned[h].emplace(label, static_cast<AttributeValue>(domains_[h].size()));
        if (inserted) domains_[h].push_back(label);
        attributes_.push_back(it->second);
      }
    }
    edge_count_ = targets_.size() / 2;
  }

  void check_node(NodeId v) const {
    if (v >= node_count()) {
      throw Error(ErrorCode::kOutOfRangeNode, "node " + std::to_string(v) + " out of range");
    }
  }

  std::string node_column_;
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> attribute_names_;
  std::vector<AttributeValue> attributes_;
  std::vector<std::vector<std::string>> domains_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

inline std::vector<std::string> split_csv(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Skips blank and '#' lines. Returns false at end of stream.
inline bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    line = std::string(t);
    return true;
  }
  return false;
}

}  // namespace detail

// Edge text: one "u v" pair per line; a line holding a single id declares a
// node without adding an edge. Attribute text: CSV with a header row
// "node,attr1,...,attrK"; row order fixes the internal node ids. '#' lines and
// blank lines are ignored in both.
inline AttributedNetwork load_network(std::istream& edge_text, std::istream& attribute_text,
                                      bool drop_isolated) {
  std::unordered_map<std::string, NodeId> seen;
  std::vector<std::string> seen_ids;
  std::vector<Edge> raw_edges;
  auto intern = [&](const std::string& id) {
    auto [it, inserted] = seen.emplace(id, static_cast<NodeId>(seen_ids.size()));
    if (inserted) seen_ids.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (detail::next_content_line(edge_text, line, line_no)) {
    auto tokens = detail::split_whitespace(line);
    if (tokens.size() == 1) {
      intern(tokens[0]);
    } else if (tokens.size() == 2) {
      if (tokens[0] == tokens[1]) {
        throw Error(ErrorCode::kSelfLoop,
                    "edge line " + std::to_string(line_no) + ": '" + tokens[0] + "'");
      }
      NodeId u = intern(tokens[0]);
      NodeId v = intern(tokens[1]);
      raw_edges.emplace_back(u, v);
    } else {
      throw Error(ErrorCode::kMalformedLine,
                  "edge line " + std::to_string(line_no) + ": expected 'u v'");
    }
  }
  if (raw_edges.empty()) throw Error(ErrorCode::kEmptyNetwork, "edge list has no edges");

  line_no = 0;
  if (!detail::next_content_line(attribute_text, line, line_no)) {
    throw Error(ErrorCode::kMalformedLine, "attribute file has no header row");
  }
  auto header = detail::split_csv(line);
  if (header.size() < 2) {
    throw Error(ErrorCode::kMalformedLine, "attribute header needs a node column and at least one attribute");
  }
  const std::size_t columns = header.size();

  // Row order defines the internal ids.
  std::vector<NodeId> order;
  std::vector<std::vector<std::string>> row_values(seen_ids.size());
  std::vector<bool> has_row(seen_ids.size(), false);
  while (detail::next_content_line(attribute_text, line, line_no)) {
    auto cells = detail::split_csv(line);
    if (cells.size() != columns) {
      throw Error(ErrorCode::kMalformedLine,
                  "attribute line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " columns");
    }
    auto it = seen.find(cells[0]);
    if (it == seen.end()) {
      throw Error(ErrorCode::kUnknownNodeInAttributes,
                  "attribute line " + std::to_string(line_no) + ": node '" + cells[0] +
                      "' is not in the edge list");
    }
    if (has_row[it->second]) {
      throw Error(ErrorCode::kMalformedLine, "attribute line " + std::to_string(line_no) +
                                                 ": duplicate row for '" + cells[0] + "'");
    }
    for (std::size_t c = 1; c < columns; ++c) {
      if (cells[c].empty()) {
        throw Error(ErrorCode::kMalformedLine,
                    "attribute line " + std::to_string(line_no) + ": empty value");
      }
    }
    has_row[it->second] = true;
    row_values[it->second].assign(cells.begin() + 1, cells.end());
    order.push_back(it->second);
  }
  for (NodeId v = 0; v < seen_ids.size(); ++v) {
    if (!has_row[v]) {
      throw Error(ErrorCode::kMissingAttributeRow, "no attribute row for node '" + seen_ids[v] + "'");
    }
  }

  std::vector<NodeId> position(seen_ids.size());
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> values;
  for (NodeId v : order) {
    position[v] = static_cast<NodeId>(ids.size());
    ids.push_back(seen_ids[v]);
    values.push_back(std::move(row_values[v]));
  }
  for (auto& [u, v] : raw_edges) {
    u = position[u];
    v = position[v];
  }
  return AttributedNetwork(header[0], std::move(ids), raw_edges,
                           std::vector<std::string>(header.begin() + 1, header.end()), values,
                           drop_isolated);
}

inline AttributedNetwork load_network_files(const std::string& edge_path,
                                            const std::string& attribute_path,
                                            bool drop_isolated) {
  std::ifstream edges(edge_path);
  if (!edges) throw Error(ErrorCode::kIo, "cannot open '" + edge_path + "'");
  std::ifstream attributes(attribute_path);
  if (!attributes) throw Error(ErrorCode::kIo, "cannot open '" + attribute_path + "'");
  return load_network(edges, attributes, drop_isolated);
}

// Emits the network in the format load_network reads. Reloading the output
// reproduces ids, adjacency, and attributes exactly.
inline void write_network(const AttributedNetwork& net, std::ostream& edge_text,
                          std::ostream& attribute_text) {
  for (NodeId u = 0; u < net.node_count(); ++u) {
    for (NodeId v : net.neighbors(u)) {
      if (u < v) edge_text << net.external_id(u) << ' ' << net.external_id(v) << '\n';
    }
  }
  attribute_text << net.node_column_name();
  for (std::size_t h = 0; h < net.attribute_count(); ++h) attribute_text << ',' << net.attribute_name(h);
  attribute_text << '\n';
  for (NodeId v = 0; v < net.node_count(); ++v) {
    attribute_text << net.external_id(v);
    for (std::size_t h = 0; h < net.attribute_count(); ++h) {
      attribute_text << ',' << net.attribute_label(h, net.attribute(v, h));
    }
    attribute_text << '\n';
  }
}

}  // namespace mobbo
