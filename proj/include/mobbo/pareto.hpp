#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "mobbo/error.hpp"
#include "mobbo/olar.hpp"

namespace mobbo {

// Maximization: a dominates b when it is no worse in both objectives and
// strictly better in at least one.
constexpr bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.eq >= b.eq && a.simatt >= b.simatt && (a.eq > b.eq || a.simatt > b.simatt);
}

// Non-domination rank of every point, 1 = first front.
inline std::vector<int> non_dominated_sort(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominator_count(n, 0);
  std::vector<int> rank(n, 0);
  std::vector<std::size_t> front;

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(points[p], points[q])) {
        dominated[p].push_back(q);
        ++dominator_count[q];
      } else if (dominates(points[q], points[p])) {
        dominated[q].push_back(p);
        ++dominator_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (dominator_count[p] == 0) {
      rank[p] = 1;
      front.push_back(p);
    }
  }
  for (int r = 1; !front.empty(); ++r) {
    std::vector<std::size_t> next;
    for (std::size_t p : front) {
      for (std::size_t q : dominated[p]) {
        if (--dominator_count[q] == 0) {
          rank[q] = r + 1;
          next.push_back(q);
        }
      }
    }
    std::sort(next.begin(), next.end());
    front = std::move(next);
  }
  return rank;
}

// Crowding distance of each member of `front` (indices into `points`),
// returned aligned with `front`. Per objective, members are ordered by value
// (ties by position in `front`); the two ends get +inf and interior members
// add the normalized gap between their neighbors. A zero range adds nothing.
inline std::vector<double> crowding_distance(std::span<const ObjectiveVector> points,
                                             std::span<const std::size_t> front) {
  const std::size_t n = front.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kInf);
    return distance;
  }

  auto accumulate = [&](auto objective) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return objective(points[front[a]]) < objective(points[front[b]]);
    });
    const double lo = objective(points[front[order.front()]]);
    const double hi = objective(points[front[order.back()]]);
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    if (hi - lo <= 0.0) return;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double gap = objective(points[front[order[k + 1]]]) - objective(points[front[order[k - 1]]]);
      distance[order[k]] += gap / (hi - lo);
    }
  };
  accumulate([](const ObjectiveVector& v) { return v.eq; });
  accumulate([](const ObjectiveVector& v) { return v.simatt; });
  return distance;
}

struct RankedOrder {
  std::vector<std::size_t> order;  // permutation of input positions, best first
  std::vector<int> rank;           // per input position
  std::vector<double> crowding;    // per input position
};

// Ranks, crowding distances, and the stable order by (rank ascending,
// crowding descending).
inline RankedOrder rank_population(std::span<const ObjectiveVector> points) {
  RankedOrder out;
  out.rank = non_dominated_sort(points);
  out.crowding.assign(points.size(), 0.0);

  int max_rank = 0;
  for (int r : out.rank) max_rank = std::max(max_rank, r);
  for (int r = 1; r <= max_rank; ++r) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (out.rank[i] == r) front.push_back(i);
    }
    auto d = crowding_distance(points, front);
    for (std::size_t k = 0; k < front.size(); ++k) out.crowding[front[k]] = d[k];
  }

  out.order.resize(points.size());
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    if (out.rank[a] != out.rank[b]) return out.rank[a] < out.rank[b];
    return out.crowding[a] > out.crowding[b];
  });
  return out;
}

// Positions of the `count` points kept by rank-then-crowding truncation, in
// sorted order.
inline std::vector<std::size_t> select_indices(std::span<const ObjectiveVector> points,
                                               std::size_t count) {
  if (points.size() < count) {
    throw Error(ErrorCode::kInsufficientPopulation, "fewer candidates than survivors requested");
  }
  auto ranked = rank_population(points);
  ranked.order.resize(count);
  return ranked.order;
}

namespace detail {

inline std::vector<ObjectiveVector> objectives_of(std::span<const Habitat> population) {
  std::vector<ObjectiveVector> points;
  points.reserve(population.size());
  for (const auto& h : population) {
    if (!h.hsi) throw Error(ErrorCode::kUnevaluatedHabitat, "habitat has no HSI");
    points.push_back(*h.hsi);
  }
  return points;
}

}  // namespace detail

// Sorts in place by (rank, -crowding) and stores rank and crowding on each
// habitat.
inline void sort_population(std::vector<Habitat>& population) {
  auto points = detail::objectives_of(population);
  auto ranked = rank_population(points);
  std::vector<Habitat> sorted;
  sorted.reserve(population.size());
  for (std::size_t i : ranked.order) {
    Habitat& h = population[i];
    h.rank = ranked.rank[i];
    h.crowding = ranked.crowding[i];
    sorted.push_back(std::move(h));
  }
  population = std::move(sorted);
}

// Keeps the best `count` habitats of `merged` and re-sorts them, so ranks and
// crowding distances describe the survivors alone.
inline std::vector<Habitat> select_survivors(std::vector<Habitat> merged, std::size_t count) {
  if (merged.size() < count) {
    throw Error(ErrorCode::kInsufficientPopulation, "fewer candidates than survivors requested");
  }
  sort_population(merged);
  merged.resize(count);
  sort_population(merged);
  return merged;
}

}  // namespace mobbo
