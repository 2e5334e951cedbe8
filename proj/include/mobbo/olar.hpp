#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mobbo/graph.hpp"
#include "mobbo/overlap.hpp"
#include "mobbo/random.hpp"
#include "mobbo/union_find.hpp"

namespace mobbo {

using CommunityId = std::uint32_t;

// Habitat suitability: the two objectives, both maximized.
struct ObjectiveVector {
  double eq = 0.0;
  double simatt = 0.0;

  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

// Overlapping locus-based adjacency representation of one partition.
//
// siv[i] is a neighbor of node i; the components of the graph with edges
// (i, siv[i]) are the disjoint communities. status[i] == 1 marks node i as
// overlapping, in which case it joins every community its neighbors are in.
// community and final_community are derived by decode().
struct Habitat {
  std::vector<NodeId> siv;
  std::vector<std::uint8_t> status;
  std::vector<CommunityId> community;
  std::vector<std::vector<CommunityId>> final_community;

  std::optional<ObjectiveVector> hsi;
  int rank = 0;
  double crowding = 0.0;

  std::size_t size() const noexcept { return siv.size(); }
};

// Communities as node sets plus each node's memberships.
struct OverlappingPartition {
  std::vector<std::vector<NodeId>> communities;      // each sorted, non-empty
  std::vector<std::vector<CommunityId>> memberships;  // per node, sorted

  std::size_t overlap_count(NodeId v) const { return memberships[v].size(); }
  std::size_t community_count() const noexcept { return communities.size(); }

  // Members are sorted and de-duplicated; empty communities are dropped.
  // Nodes that appear in no community get an empty membership list.
  static OverlappingPartition from_communities(std::size_t node_count,
                                               std::vector<std::vector<NodeId>> communities) {
    OverlappingPartition p;
    p.memberships.resize(node_count);
    for (auto& c : communities) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (c.empty()) continue;
      const auto id = static_cast<CommunityId>(p.communities.size());
      for (NodeId v : c) {
        if (v >= node_count) throw Error(ErrorCode::kOutOfRangeNode, "community member out of range");
        p.memberships[v].push_back(id);
      }
      p.communities.push_back(std::move(c));
    }
    return p;
  }

  // Disjoint partition from per-node labels.
  static OverlappingPartition from_labels(std::span<const CommunityId> labels) {
    CommunityId count = 0;
    for (CommunityId c : labels) count = std::max(count, c + 1);
    std::vector<std::vector<NodeId>> communities(count);
    for (NodeId v = 0; v < labels.size(); ++v) communities[labels[v]].push_back(v);
    return from_communities(labels.size(), std::move(communities));
  }

  bool is_disjoint() const {
    return std::all_of(memberships.begin(), memberships.end(),
                       [](const auto& m) { return m.size() <= 1; });
  }
};

// Components of the graph on edges (i, siv[i]). Labels are 0-based and
// numbered in order of each component's smallest node id.
inline std::vector<CommunityId> first_decode(std::span<const NodeId> siv) {
  const std::size_t n = siv.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) uf.unite(i, siv[i]);

  constexpr CommunityId kUnset = ~CommunityId{0};
  std::vector<CommunityId> root_label(n, kUnset);
  std::vector<CommunityId> labels(n);
  CommunityId next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& label = root_label[uf.find(i)];
    if (label == kUnset) label = next++;
    labels[i] = label;
  }
  return labels;
}

// Status-0 nodes keep their own label; status-1 nodes take the labels of all
// their neighbors.
inline std::vector<std::vector<CommunityId>> final_decode(const AttributedNetwork& net,
                                                          std::span<const CommunityId> community,
                                                          std::span<const std::uint8_t> status) {
  std::vector<std::vector<CommunityId>> out(community.size());
  for (NodeId i = 0; i < community.size(); ++i) {
    if (status[i] == 0) {
      out[i] = {community[i]};
      continue;
    }
    for (NodeId j : net.neighbors(i)) out[i].push_back(community[j]);
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

// Recomputes community and final_community from siv and status, and drops the
// cached HSI.
inline void decode(const AttributedNetwork& net, Habitat& h) {
  h.community = first_decode(h.siv);
  h.final_community = final_decode(net, h.community, h.status);
  h.hsi.reset();
}

inline OverlappingPartition partition_of(const Habitat& h) {
  CommunityId count = 0;
  for (CommunityId c : h.community) count = std::max(count, c + 1);
  OverlappingPartition p;
  p.communities.resize(count);
  p.memberships = h.final_community;
  for (NodeId v = 0; v < h.final_community.size(); ++v) {
    for (CommunityId c : h.final_community[v]) p.communities[c].push_back(v);
  }
  return p;
}

// Builds a decoded habitat from an explicit genotype.
inline Habitat make_habitat(const AttributedNetwork& net, std::vector<NodeId> siv,
                            std::vector<std::uint8_t> status) {
  Habitat h;
  h.siv = std::move(siv);
  h.status = std::move(status);
  decode(net, h);
  return h;
}

// Encoding and marking: each SIV takes a uniformly random neighbor; each
// candidate overlapping node gets a random status bit, all others 0. Then both
// decoding stages run.
inline Habitat encode_random(const AttributedNetwork& net, const OVSet& ovset, Rng& rng) {
  const std::size_t n = net.node_count();
  std::vector<NodeId> siv(n);
  std::vector<std::uint8_t> status(n, 0);
  for (NodeId j = 0; j < n; ++j) {
    siv[j] = rng.pick(net.neighbors(j));
    if (ovset.contains(j)) status[j] = rng.coin() ? 1 : 0;
  }
  return make_habitat(net, std::move(siv), std::move(status));
}

}  // namespace mobbo
