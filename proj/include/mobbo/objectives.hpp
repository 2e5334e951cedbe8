#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mobbo/error.hpp"
#include "mobbo/graph.hpp"
#include "mobbo/olar.hpp"

namespace mobbo {

// Removes single-node communities and recomputes memberships.
inline OverlappingPartition drop_singletons(const OverlappingPartition& p) {
  std::vector<std::vector<NodeId>> kept;
  for (const auto& c : p.communities) {
    if (c.size() >= 2) kept.push_back(c);
  }
  return OverlappingPartition::from_communities(p.memberships.size(), std::move(kept));
}

// Extended modularity of an overlapping partition:
//
//   EQ = 1/(2m) * sum_c sum_{v,w in c} [A_vw - k_v k_w / 2m] / (O_v O_w)
//
// over ordered pairs including v == w. O_v is the number of communities
// containing v. On a disjoint partition this is Newman-Girvan modularity.
inline double extended_modularity(const AttributedNetwork& net, const OverlappingPartition& p) {
  if (p.communities.empty()) throw Error(ErrorCode::kEmptyPartition, "partition has no communities");
  const double two_m = 2.0 * static_cast<double>(net.edge_count());

  std::vector<char> inside(net.node_count(), 0);
  double total = 0.0;
  for (const auto& c : p.communities) {
    for (NodeId v : c) inside[v] = 1;
    double links = 0.0;
    double weighted_degree = 0.0;
    for (NodeId v : c) {
      const double ov = static_cast<double>(p.overlap_count(v));
      weighted_degree += static_cast<double>(net.degree(v)) / ov;
      for (NodeId w : net.neighbors(v)) {
        if (inside[w]) links += 1.0 / (ov * static_cast<double>(p.overlap_count(w)));
      }
    }
    total += links - weighted_degree * weighted_degree / two_m;
    for (NodeId v : c) inside[v] = 0;
  }
  return total / two_m;
}

// Newman-Girvan modularity, Q = sum_c [ l_c / m - (d_c / 2m)^2 ], where l_c
// counts edges inside c and d_c is its total degree.
inline double modularity(const AttributedNetwork& net, const OverlappingPartition& p) {
  if (!p.is_disjoint()) throw Error(ErrorCode::kOverlapPresent, "modularity needs a disjoint partition");
  const double m = static_cast<double>(net.edge_count());
  std::vector<double> inner(p.community_count(), 0.0);
  std::vector<double> degree(p.community_count(), 0.0);
  for (NodeId u = 0; u < net.node_count(); ++u) {
    if (p.memberships[u].empty()) continue;
    const CommunityId cu = p.memberships[u].front();
    degree[cu] += static_cast<double>(net.degree(u));
    for (NodeId v : net.neighbors(u)) {
      if (u < v && !p.memberships[v].empty() && p.memberships[v].front() == cu) inner[cu] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inner.size(); ++c) {
    const double share = degree[c] / (2.0 * m);
    q += inner[c] / m - share * share;
  }
  return q;
}

// Attribute homogeneity averaged over communities. For each community, the
// best choice of one value per attribute scores
//   (sum_h n_{c, j_h}) / (attribute_count * |c|),
// and since attributes are independent that is the sum of per-attribute
// majority counts. An overlapping node counts fully in every community it is
// in. Single-node communities are not counted.
inline double sim_att(const AttributedNetwork& net, const OverlappingPartition& p) {
  const std::size_t attrs = net.attribute_count();
  if (attrs == 0) throw Error(ErrorCode::kNoAttributes, "network has no attributes");

  std::size_t largest_domain = 0;
  for (std::size_t h = 0; h < attrs; ++h) largest_domain = std::max(largest_domain, net.domain_size(h));
  std::vector<std::size_t> counts(largest_domain, 0);

  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& c : p.communities) {
    if (c.size() < 2) continue;
    std::size_t majority_total = 0;
    for (std::size_t h = 0; h < attrs; ++h) {
      std::size_t best = 0;
      for (NodeId v : c) best = std::max(best, ++counts[net.attribute(v, h)]);
      for (NodeId v : c) counts[net.attribute(v, h)] = 0;
      majority_total += best;
    }
    sum += static_cast<double>(majority_total) / static_cast<double>(attrs * c.size());
    ++counted;
  }
  if (counted == 0) throw Error(ErrorCode::kEmptyPartition, "no community with two or more nodes");
  return sum / static_cast<double>(counted);
}

// F-score style compromise of SimAtt and EQ:
//   (1 + a^2) * simatt * eq / (a^2 * simatt + eq)
// nullopt when the denominator vanishes.
inline std::optional<double> alpha_saem(double simatt, double eq, double alpha) {
  const double a2 = alpha * alpha;
  const double denominator = a2 * simatt + eq;
  if (denominator == 0.0) return std::nullopt;
  return (1.0 + a2) * (simatt * eq) / denominator;
}

inline ObjectiveVector evaluate(const AttributedNetwork& net, const OverlappingPartition& p) {
  OverlappingPartition counted = drop_singletons(p);
  return {extended_modularity(net, counted), sim_att(net, counted)};
}

// Evaluates a decoded habitat and caches the result on it.
inline const ObjectiveVector& evaluate_hsi(const AttributedNetwork& net, Habitat& h) {
  h.hsi = evaluate(net, partition_of(h));
  return *h.hsi;
}

}  // namespace mobbo
