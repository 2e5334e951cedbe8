#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mobbo/error.hpp"
#include "mobbo/graph.hpp"
#include "mobbo/olar.hpp"
#include "mobbo/overlap.hpp"
#include "mobbo/random.hpp"

namespace mobbo {

// Rank-based immigration (lambda) and emigration (mu) rates. Position 0 is
// the best habitat of a sorted population: it never immigrates and
// emigrates most.
struct RateSchedule {
  std::vector<double> immigration;
  std::vector<double> emigration;

  std::size_t size() const noexcept { return immigration.size(); }
};

inline RateSchedule migration_rates(std::size_t habitat_count) {
  if (habitat_count < 2) throw Error(ErrorCode::kPopulationTooSmall, "need at least two habitats");
  RateSchedule r;
  r.immigration.resize(habitat_count);
  r.emigration.resize(habitat_count);
  const double last = static_cast<double>(habitat_count - 1);
  for (std::size_t i = 0; i < habitat_count; ++i) {
    r.immigration[i] = static_cast<double>(i) / last;
    r.emigration[i] = 1.0 - r.immigration[i];
  }
  return r;
}

// Per-SIV mutation probability; the product with the SIV count stays at
// `constant`, clamped to 1 for small graphs.
inline double p_mutation(std::size_t siv_count, double constant = 10.0) {
  return std::min(1.0, constant / static_cast<double>(siv_count));
}

// Index j != exclude drawn with probability weights[j] / sum. nullopt when
// every eligible weight is zero.
inline std::optional<std::size_t> roulette_select(std::span<const double> weights,
                                                  std::optional<std::size_t> exclude, Rng& rng) {
  double total = 0.0;
  std::optional<std::size_t> last_positive;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (j == exclude || weights[j] <= 0.0) continue;
    total += weights[j];
    last_positive = j;
  }
  if (!last_positive) return std::nullopt;

  double target = rng.uniform() * total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (j == exclude || weights[j] <= 0.0) continue;
    if (target < weights[j]) return j;
    target -= weights[j];
  }
  return last_positive;
}

// Read-only view of the sorted parent population that operators draw donors
// from during one generation.
class ParentSnapshot {
 public:
  ParentSnapshot(std::span<const Habitat> parents, const RateSchedule& rates)
      : parents_(parents), rates_(&rates) {
    if (rates.size() != parents.size()) {
      throw Error(ErrorCode::kConfigInvalid, "rate schedule does not match population size");
    }
    if (parents.empty()) throw Error(ErrorCode::kPopulationTooSmall, "empty population");
    const std::size_t n = parents.front().size();
    siv_mode_.resize(n);
    std::vector<NodeId> column(parents.size());
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t h = 0; h < parents.size(); ++h) column[h] = parents[h].siv[k];
      std::sort(column.begin(), column.end());
      // most frequent value; ties go to the smallest node id
      std::size_t best_run = 0;
      for (std::size_t a = 0; a < column.size();) {
        std::size_t b = a;
        while (b < column.size() && column[b] == column[a]) ++b;
        if (b - a > best_run) {
          best_run = b - a;
          siv_mode_[k] = column[a];
        }
        a = b;
      }
    }
  }

  const Habitat& operator[](std::size_t i) const { return parents_[i]; }
  const Habitat& best() const { return parents_.front(); }
  std::size_t size() const noexcept { return parents_.size(); }
  const RateSchedule& rates() const noexcept { return *rates_; }

  // Most frequent value of SIV k across the parents.
  NodeId siv_mode(std::size_t k) const { return siv_mode_[k]; }

 private:
  std::span<const Habitat> parents_;
  const RateSchedule* rates_;
  std::vector<NodeId> siv_mode_;
};

// With probability lambda[position], copies SIV k from a donor chosen by
// roulette over the emigration rates (never the habitat itself).
inline bool migrate(const ParentSnapshot& parents, Habitat& target, std::size_t position,
                    std::size_t k, Rng& rng) {
  if (!(rng.uniform() < parents.rates().immigration[position])) return false;
  auto donor = roulette_select(parents.rates().emigration, position, rng);
  if (!donor) return false;
  target.siv[k] = parents[*donor].siv[k];
  return true;
}

// Points SIV k at a random neighbor inside the community most of k's
// neighbors belong to (per the habitat's last decode). Tied communities are
// chosen between uniformly.
inline void mutate_siv_majority(const AttributedNetwork& net, Habitat& target, NodeId k, Rng& rng) {
  auto row = net.neighbors(k);
  std::vector<CommunityId> labels;
  labels.reserve(row.size());
  for (NodeId w : row) labels.push_back(target.community[w]);
  std::sort(labels.begin(), labels.end());

  std::vector<CommunityId> tied;
  std::size_t best_run = 0;
  for (std::size_t a = 0; a < labels.size();) {
    std::size_t b = a;
    while (b < labels.size() && labels[b] == labels[a]) ++b;
    if (b - a > best_run) {
      best_run = b - a;
      tied.assign(1, labels[a]);
    } else if (b - a == best_run) {
      tied.push_back(labels[a]);
    }
    a = b;
  }
  const CommunityId chosen = rng.pick(tied);

  std::vector<NodeId> members;
  for (NodeId w : row) {
    if (target.community[w] == chosen) members.push_back(w);
  }
  target.siv[k] = rng.pick(members);
}

// Moves SIV k toward the population: to the most frequent parent value, else
// to the best parent's value, else to a random neighbor other than that
// shared value. Left unchanged when k has no other neighbor.
inline void mutate_siv_population(const AttributedNetwork& net, const ParentSnapshot& parents,
                                  Habitat& target, NodeId k, Rng& rng) {
  const NodeId most_frequent = parents.siv_mode(k);
  const NodeId best = parents.best().siv[k];
  NodeId& value = target.siv[k];
  if (value != most_frequent) {
    value = most_frequent;
  } else if (value != best) {
    value = best;
  } else {
    std::vector<NodeId> others;
    for (NodeId w : net.neighbors(k)) {
      if (w != most_frequent) others.push_back(w);
    }
    if (!others.empty()) value = rng.pick(others);
  }
}

// Picks one of the two SIV mutation methods with equal probability.
inline void mutate_siv(const AttributedNetwork& net, const ParentSnapshot& parents,
                       Habitat& target, NodeId k, Rng& rng) {
  if (rng.uniform() < 0.5) {
    mutate_siv_majority(net, target, k, rng);
  } else {
    mutate_siv_population(net, parents, target, k, rng);
  }
}

// Toggles the overlap status of a candidate overlapping node.
inline void mutate_status(Habitat& target, NodeId k, const OVSet& ovset) {
  if (ovset.contains(k)) target.status[k] = target.status[k] ? 0 : 1;
}

// Double-point crossover with 1-based cut points lo < hi: positions 1..lo and
// hi+1..n come from the donor, lo+1..hi are kept.
inline void apply_double_point(std::span<std::uint8_t> status, std::span<const std::uint8_t> donor,
                               std::size_t lo, std::size_t hi) {
  std::copy(donor.begin(), donor.begin() + static_cast<std::ptrdiff_t>(lo), status.begin());
  std::copy(donor.begin() + static_cast<std::ptrdiff_t>(hi), donor.end(),
            status.begin() + static_cast<std::ptrdiff_t>(hi));
}

// With probability lambda[position], mixes the status vector with a donor
// chosen by roulette over the emigration rates, at two distinct random cut
// points in [1, n].
inline bool crossover_status(const ParentSnapshot& parents, Habitat& target, std::size_t position,
                             Rng& rng) {
  if (!(rng.uniform() < parents.rates().immigration[position])) return false;
  auto donor = roulette_select(parents.rates().emigration, position, rng);
  if (!donor) return false;
  const std::size_t n = target.size();
  if (n < 2) return false;
  std::size_t c1 = rng.index(n) + 1;
  std::size_t c2 = rng.index(n - 1) + 1;
  if (c2 >= c1) ++c2;
  apply_double_point(target.status, parents[*donor].status, std::min(c1, c2), std::max(c1, c2));
  return true;
}

}  // namespace mobbo
