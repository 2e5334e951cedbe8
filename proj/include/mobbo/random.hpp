#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mobbo {

// Thin wrapper over mt19937_64. Every consumer of randomness in the library
// takes an Rng&, so a run is fully determined by how streams are seeded.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream keyed by (seed, path...). Two streams with different
  // paths do not share state, so work keyed by the same path yields the same
  // draws regardless of execution order.
  static Rng derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&words](std::uint64_t v) {
      words.push_back(static_cast<std::uint32_t>(v));
      words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (std::uint64_t p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
  }

  // Uniform in [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  // Uniform in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool coin() { return index(2) == 1; }

  template <typename Container>
  const auto& pick(const Container& items) {
    return items[index(items.size())];
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
};

}  // namespace mobbo
