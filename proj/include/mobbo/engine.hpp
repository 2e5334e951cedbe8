#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mobbo/error.hpp"
#include "mobbo/graph.hpp"
#include "mobbo/objectives.hpp"
#include "mobbo/olar.hpp"
#include "mobbo/operators.hpp"
#include "mobbo/overlap.hpp"
#include "mobbo/pareto.hpp"
#include "mobbo/random.hpp"

namespace mobbo {

enum class Mode {
  kMobboOcd,     // Pareto search over (EQ, SimAtt)
  kEmBbo,        // scalar EQ
  kOvSimAttBbo,  // scalar SimAtt
};

constexpr std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kMobboOcd: return "mobbo-ocd";
    case Mode::kEmBbo: return "em-bbo";
    case Mode::kOvSimAttBbo: return "ov-simatt-bbo";
  }
  return "unknown";
}

inline std::optional<Mode> parse_mode(std::string_view text) {
  for (Mode m : {Mode::kMobboOcd, Mode::kEmBbo, Mode::kOvSimAttBbo}) {
    if (text == to_string(m)) return m;
  }
  return std::nullopt;
}

struct RunConfig {
  std::size_t habitats = 100;
  std::size_t generations = 100;
  std::uint64_t seed = 0;
  double lc_threshold = 0.1;
  double mutation_constant = 10.0;
  std::vector<double> alphas = {0.5, 1.0, 1.5};
  Mode mode = Mode::kMobboOcd;
  // Evolve the habitats of a generation on worker threads. Results are
  // identical to the sequential run.
  bool parallel = false;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (habitats < 2) throw Error(ErrorCode::kConfigInvalid, "habitats must be at least 2");
    if (generations < 1) throw Error(ErrorCode::kConfigInvalid, "generations must be at least 1");
    if (!(lc_threshold >= 0.0)) throw Error(ErrorCode::kConfigInvalid, "threshold must be >= 0");
    if (!(mutation_constant > 0.0)) {
      throw Error(ErrorCode::kConfigInvalid, "mutation constant must be positive");
    }
    for (double a : alphas) {
      if (!(a >= 0.0)) throw Error(ErrorCode::kConfigInvalid, "alphas must be >= 0");
    }
  }
};

struct GenerationStats {
  std::size_t generation = 0;  // 0 = initial population
  double best_eq = 0.0;
  double best_simatt = 0.0;
  std::size_t front_size = 0;
};

struct RunResult {
  RunConfig config;
  OVSet ovset;
  std::vector<Habitat> population;  // sorted, best first; all decoded and evaluated
  std::vector<GenerationStats> trace;
  double wall_seconds = 0.0;

  std::vector<std::size_t> front() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < population.size(); ++i) {
      if (population[i].rank == 1) out.push_back(i);
    }
    return out;
  }
};

namespace detail {

// Stream tags for Rng::derive. The OVSet uses the bare run seed with a
// one-element path per node.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kEvolveStream = 2;

inline double scalar_fitness(Mode mode, const ObjectiveVector& v) {
  return mode == Mode::kEmBbo ? v.eq : v.simatt;
}

// Single-objective ordering: stable, descending fitness; rank is the dense
// rank of the fitness value and crowding is unused.
inline void sort_scalar(std::vector<Habitat>& population, Mode mode) {
  for (const auto& h : population) {
    if (!h.hsi) throw Error(ErrorCode::kUnevaluatedHabitat, "habitat has no HSI");
  }
  std::stable_sort(population.begin(), population.end(), [mode](const Habitat& a, const Habitat& b) {
    return scalar_fitness(mode, *a.hsi) > scalar_fitness(mode, *b.hsi);
  });
  int rank = 0;
  std::optional<double> previous;
  for (auto& h : population) {
    const double f = scalar_fitness(mode, *h.hsi);
    if (!previous || f != *previous) ++rank;
    previous = f;
    h.rank = rank;
    h.crowding = 0.0;
  }
}

inline void sort_for_mode(std::vector<Habitat>& population, Mode mode) {
  if (mode == Mode::kMobboOcd) {
    sort_population(population);
  } else {
    sort_scalar(population, mode);
  }
}

inline std::vector<Habitat> select_for_mode(std::vector<Habitat> merged, std::size_t count,
                                            Mode mode) {
  if (mode == Mode::kMobboOcd) return select_survivors(std::move(merged), count);
  if (merged.size() < count) {
    throw Error(ErrorCode::kInsufficientPopulation, "fewer candidates than survivors requested");
  }
  sort_scalar(merged, mode);
  merged.resize(count);
  return merged;
}

inline GenerationStats summarize(const std::vector<Habitat>& population, std::size_t generation) {
  GenerationStats s;
  s.generation = generation;
  bool first = true;
  for (const auto& h : population) {
    if (h.rank != 1) continue;
    s.best_eq = first ? h.hsi->eq : std::max(s.best_eq, h.hsi->eq);
    s.best_simatt = first ? h.hsi->simatt : std::max(s.best_simatt, h.hsi->simatt);
    first = false;
    ++s.front_size;
  }
  return s;
}

// Runs body(i) for i in [0, count) on `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// One habitat's operator pass for a generation: per SIV, migration and (with
// probability p_mut) both mutation phases; then one status crossover; then
// re-decode. Donors come from the frozen parent snapshot.
inline void evolve_habitat(const AttributedNetwork& net, const OVSet& ovset,
                           const ParentSnapshot& parents, Habitat& target, std::size_t position,
                           double p_mut, Rng& rng) {
  for (NodeId k = 0; k < target.size(); ++k) {
    migrate(parents, target, position, k, rng);
    if (rng.uniform() < p_mut) {
      mutate_siv(net, parents, target, k, rng);
      mutate_status(target, k, ovset);
    }
  }
  crossover_status(parents, target, position, rng);
  decode(net, target);
}

// Biogeography-based search over OLAR habitats. In kMobboOcd mode the
// population is ordered by non-domination rank and crowding distance; the
// two baseline modes order by a single objective and otherwise share every
// step.
inline RunResult run(const AttributedNetwork& net, const RunConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  RunResult result;
  result.config = config;
  const std::size_t n = config.habitats;
  const RateSchedule rates = migration_rates(n);
  const double p_mut = p_mutation(net.node_count(), config.mutation_constant);
  result.ovset = find_ovset(net, config.lc_threshold, config.seed);
  const OVSet& ovset = result.ovset;
  const unsigned threads = config.parallel ? config.threads : 1;

  std::vector<Habitat> population(n);
  detail::parallel_for(n, threads, [&](std::size_t h) {
    Rng rng = Rng::derive(config.seed, {detail::kInitStream, h});
    population[h] = encode_random(net, ovset, rng);
    evaluate_hsi(net, population[h]);
  });
  detail::sort_for_mode(population, config.mode);
  result.trace.push_back(detail::summarize(population, 0));

  for (std::size_t g = 1; g <= config.generations; ++g) {
    const ParentSnapshot parents(population, rates);
    std::vector<Habitat> children = population;
    detail::parallel_for(n, threads, [&](std::size_t i) {
      Rng rng = Rng::derive(config.seed, {detail::kEvolveStream, g, i});
      evolve_habitat(net, ovset, parents, children[i], i, p_mut, rng);
      evaluate_hsi(net, children[i]);
    });

    std::vector<Habitat> merged = std::move(population);
    merged.insert(merged.end(), std::make_move_iterator(children.begin()),
                  std::make_move_iterator(children.end()));
    population = detail::select_for_mode(std::move(merged), n, config.mode);
    result.trace.push_back(detail::summarize(population, g));
  }

  result.population = std::move(population);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

inline RunResult run_mobbo_ocd(const AttributedNetwork& net, RunConfig config) {
  config.mode = Mode::kMobboOcd;
  return run(net, config);
}

inline RunResult run_single_objective(const AttributedNetwork& net, const RunConfig& config) {
  if (config.mode == Mode::kMobboOcd) {
    throw Error(ErrorCode::kConfigInvalid, "single-objective run needs em-bbo or ov-simatt-bbo");
  }
  return run(net, config);
}

// Position of the rank-1 habitat with the largest alpha_SAEM; ties go to the
// earlier position. Unscorable habitats are skipped unless nothing else is
// left.
inline std::size_t best_compromise(const RunResult& result, double alpha) {
  auto front = result.front();
  if (front.empty()) throw Error(ErrorCode::kEmptyFront, "result has no rank-1 habitat");
  std::size_t best = front.front();
  std::optional<double> best_score;
  for (std::size_t i : front) {
    const auto& hsi = *result.population[i].hsi;
    auto score = alpha_saem(hsi.simatt, hsi.eq, alpha);
    if (score && (!best_score || *score > *best_score)) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace mobbo
