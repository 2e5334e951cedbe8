#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mobbo/graph.hpp"
#include "mobbo/random.hpp"

namespace mobbo {

// Candidate overlapping nodes, sorted ascending.
struct OVSet {
  std::vector<NodeId> members;

  bool contains(NodeId v) const {
    return std::binary_search(members.begin(), members.end(), v);
  }
  std::size_t size() const noexcept { return members.size(); }
  bool empty() const noexcept { return members.empty(); }
};

// A key neighboring node of an anchor plus the anchor's common neighbors with
// it, restricted to the pool the key node was drawn from.
struct KeyNeighboringSubgraph {
  NodeId key_node;
  std::vector<NodeId> members;  // sorted, contains key_node
};

namespace detail {

// |sorted_a ∩ sorted_b|
inline std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

inline std::vector<NodeId> intersection(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::vector<NodeId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

// Member of `available` sharing the most neighbors with `anchor`, where
// common neighbors are counted inside `available` (the reduced graph left
// after earlier sub-graphs were removed). Ties are broken uniformly at random.
// `available` must be sorted.
inline std::optional<NodeId> key_neighboring_node(const AttributedNetwork& net,
                                                  [[maybe_unused]] NodeId anchor,
                                                  std::span<const NodeId> available, Rng& rng) {
  if (available.empty()) return std::nullopt;
  std::vector<NodeId> best;
  std::size_t best_count = 0;
  for (NodeId candidate : available) {
    // Every member of `available` is a neighbor of the anchor, so the common
    // neighbors of (anchor, candidate) in the pool are pool ∩ N(candidate).
    std::size_t common = detail::intersection_size(available, net.neighbors(candidate));
    if (best.empty() || common > best_count) {
      best.assign(1, candidate);
      best_count = common;
    } else if (common == best_count) {
      best.push_back(candidate);
    }
  }
  return best.size() == 1 ? best.front() : rng.pick(best);
}

// Number of edges with one endpoint in `a` and the other in `b`. Sets are
// sorted and disjoint.
inline std::size_t links_between(const AttributedNetwork& net, std::span<const NodeId> a,
                                 std::span<const NodeId> b) {
  std::size_t total = 0;
  for (NodeId v : a) total += detail::intersection_size(net.neighbors(v), b);
  return total;
}

// Number of edges inside the sorted set `s`.
inline std::size_t links_within(const AttributedNetwork& net, std::span<const NodeId> s) {
  return links_between(net, s, s) / 2;
}

// max(L(s1,s2)/L(s1,s1), L(s1,s2)/L(s2,s2)). A zero denominator gives 0 when
// there are no cross links and +inf otherwise. Sets must be sorted.
inline double link_closeness(const AttributedNetwork& net, std::span<const NodeId> s1,
                             std::span<const NodeId> s2) {
  if (detail::intersection_size(s1, s2) != 0) {
    throw Error(ErrorCode::kOverlappingSets, "link closeness needs disjoint node sets");
  }
  const double cross = static_cast<double>(links_between(net, s1, s2));
  auto ratio = [cross](std::size_t inner) {
    if (inner == 0) return cross == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return cross / static_cast<double>(inner);
  };
  return std::max(ratio(links_within(net, s1)), ratio(links_within(net, s2)));
}

// Extracts up to two key neighboring sub-graphs of `anchor`, removing the
// first one's members from the pool before extracting the second.
inline std::vector<KeyNeighboringSubgraph> key_neighboring_subgraphs(const AttributedNetwork& net,
                                                                     NodeId anchor, Rng& rng) {
  auto row = net.neighbors(anchor);
  std::vector<NodeId> pool(row.begin(), row.end());
  std::vector<KeyNeighboringSubgraph> found;
  for (int round = 0; round < 2; ++round) {
    auto key = key_neighboring_node(net, anchor, pool, rng);
    if (!key) break;
    KeyNeighboringSubgraph sub{*key, detail::intersection(pool, net.neighbors(*key))};
    sub.members.insert(std::lower_bound(sub.members.begin(), sub.members.end(), *key), *key);

    std::vector<NodeId> rest;
    std::set_difference(pool.begin(), pool.end(), sub.members.begin(), sub.members.end(),
                        std::back_inserter(rest));
    pool = std::move(rest);
    found.push_back(std::move(sub));
  }
  return found;
}

// A node is a candidate overlapping node when it has two key neighboring
// sub-graphs whose link closeness is at most `lc_threshold`. Node i draws its
// tie-breaks from Rng::derive(seed, {i}), so the result is independent of the
// order nodes are visited in.
inline OVSet find_ovset(const AttributedNetwork& net, double lc_threshold, std::uint64_t seed) {
  OVSet out;
  for (NodeId i = 0; i < net.node_count(); ++i) {
    Rng rng = Rng::derive(seed, {i});
    auto subs = key_neighboring_subgraphs(net, i, rng);
    if (subs.size() < 2) continue;
    if (link_closeness(net, subs[0].members, subs[1].members) <= lc_threshold) {
      out.members.push_back(i);
    }
  }
  return out;
}

}  // namespace mobbo
