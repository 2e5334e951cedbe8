#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mobbo/pareto.hpp"
#include "oracles.hpp"

namespace mobbo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<ObjectiveVector> random_points(std::size_t n, std::mt19937_64& gen) {
  // coarse grid so that ties and duplicates are common
  std::vector<ObjectiveVector> pts(n);
  for (auto& p : pts) p = {static_cast<double>(gen() % 6) / 5.0, static_cast<double>(gen() % 6) / 5.0};
  return pts;
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<ObjectiveVector>& pts) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace_back(p.eq, p.simatt);
  return out;
}

Habitat evaluated(double eq, double simatt) {
  Habitat h;
  h.hsi = ObjectiveVector{eq, simatt};
  return h;
}

TEST(ParetoTest, Dominance) {
  EXPECT_FALSE(dominates({0.5, 0.5}, {0.5, 0.5}));
  EXPECT_TRUE(dominates({0.6, 0.5}, {0.5, 0.5}));
  EXPECT_FALSE(dominates({0.6, 0.4}, {0.5, 0.5}));
  EXPECT_FALSE(dominates({0.5, 0.5}, {0.6, 0.5}));
}

TEST(ParetoTest, SortExamples) {
  std::vector<ObjectiveVector> pts{{1, 2}, {2, 1}, {0, 0}};
  EXPECT_EQ(non_dominated_sort(pts), (std::vector<int>{1, 1, 2}));
  std::vector<ObjectiveVector> same(4, {0.3, 0.3});
  EXPECT_EQ(non_dominated_sort(same), std::vector<int>(4, 1));
}

TEST(ParetoTest, RanksMatchPeelingOracle) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 1000; ++trial) {
    auto pts = random_points(1 + gen() % 16, gen);
    ASSERT_EQ(non_dominated_sort(pts), oracle::peel_ranks(as_pairs(pts)));
  }
}

TEST(ParetoTest, CrowdingExamples) {
  std::vector<ObjectiveVector> two{{0, 1}, {1, 0}};
  std::vector<std::size_t> both{0, 1};
  EXPECT_EQ(crowding_distance(two, both), (std::vector<double>{kInf, kInf}));

  std::vector<ObjectiveVector> line{{0, 1}, {0.5, 0.5}, {1, 0}};
  std::vector<std::size_t> all{0, 1, 2};
  auto d = crowding_distance(line, all);
  EXPECT_EQ(d[0], kInf);
  EXPECT_DOUBLE_EQ(d[1], 2.0);
  EXPECT_EQ(d[2], kInf);

  std::vector<ObjectiveVector> same(4, {0.2, 0.2});
  std::vector<std::size_t> four{0, 1, 2, 3};
  EXPECT_EQ(crowding_distance(same, four), (std::vector<double>{kInf, 0, 0, kInf}));
}

TEST(ParetoTest, SurvivorsMatchTruncationOracle) {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 1000; ++trial) {
    auto pts = random_points(1 + gen() % 20, gen);
    const std::size_t keep = 1 + gen() % pts.size();
    auto chosen = select_indices(pts, keep);
    ASSERT_EQ(std::set<std::size_t>(chosen.begin(), chosen.end()), oracle::truncate(as_pairs(pts), keep));
  }
}

TEST(ParetoTest, SortPopulationRestoresFronts) {
  std::vector<Habitat> pop{evaluated(0.1, 0.1), evaluated(0.2, 0.2), evaluated(0.5, 0.5)};
  sort_population(pop);
  EXPECT_EQ(pop[0].hsi->eq, 0.5);
  EXPECT_EQ(pop[1].hsi->eq, 0.2);
  EXPECT_EQ(pop[2].hsi->eq, 0.1);
  EXPECT_EQ(pop[2].rank, 3);
}

// Idempotent as long as no two habitats tie in an objective; with ties the
// position tie-break can move a boundary to another of the tied habitats.
TEST(ParetoTest, SortPopulationIsIdempotent) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + gen() % 16;
    std::vector<double> eq(n), simatt(n);
    std::iota(eq.begin(), eq.end(), 0.0);
    std::iota(simatt.begin(), simatt.end(), 0.0);
    std::shuffle(eq.begin(), eq.end(), gen);
    std::shuffle(simatt.begin(), simatt.end(), gen);
    std::vector<Habitat> pop;
    for (std::size_t i = 0; i < n; ++i) pop.push_back(evaluated(eq[i] / 16.0, simatt[i] / 16.0));
    sort_population(pop);
    auto again = pop;
    sort_population(again);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      ASSERT_EQ(*again[i].hsi, *pop[i].hsi);
      ASSERT_EQ(again[i].rank, pop[i].rank);
      if (i > 0) {
        ASSERT_LE(pop[i - 1].rank, pop[i].rank);
      }
    }
  }
}

TEST(ParetoTest, DominatingParentsSurvive) {
  std::vector<Habitat> merged;
  for (int i = 0; i < 4; ++i) merged.push_back(evaluated(0.9 - 0.1 * i, 0.6 + 0.1 * i));
  for (int i = 0; i < 4; ++i) merged.push_back(evaluated(0.1 * i, 0.1));
  auto survivors = select_survivors(merged, 4);
  ASSERT_EQ(survivors.size(), 4u);
  for (const auto& h : survivors) {
    EXPECT_GE(h.hsi->simatt, 0.6);
    EXPECT_EQ(h.rank, 1);
  }
}

TEST(ParetoTest, SelectingEverythingKeepsEveryone) {
  std::vector<Habitat> merged{evaluated(0.1, 0.9), evaluated(0.3, 0.3), evaluated(0.9, 0.1)};
  auto survivors = select_survivors(merged, 3);
  std::multiset<double> eqs;
  for (const auto& h : survivors) eqs.insert(h.hsi->eq);
  EXPECT_EQ(eqs, (std::multiset<double>{0.1, 0.3, 0.9}));
}

TEST(ParetoTest, Errors) {
  std::vector<Habitat> pop(2);
  try {
    sort_population(pop);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnevaluatedHabitat);
  }
  std::vector<ObjectiveVector> pts{{0, 0}};
  try {
    select_indices(pts, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientPopulation);
  }
}

}  // namespace
}  // namespace mobbo
