#include <map>
#include <random>

#include <gtest/gtest.h>

#include "mobbo/olar.hpp"
#include "mobbo/overlap.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace mobbo {
namespace {

using testing::bowtie;
using testing::id;
using testing::ids;

std::set<std::set<NodeId>> as_sets(const OverlappingPartition& p) {
  std::set<std::set<NodeId>> out;
  for (const auto& c : p.communities) out.emplace(c.begin(), c.end());
  return out;
}

// siv 1->2, 2->1, 3->1, 4->5, 5->4 in external ids.
Habitat split_habitat(const AttributedNetwork& net, bool overlapping) {
  std::vector<NodeId> siv(5);
  siv[id(net, "1")] = id(net, "2");
  siv[id(net, "2")] = id(net, "1");
  siv[id(net, "3")] = id(net, "1");
  siv[id(net, "4")] = id(net, "5");
  siv[id(net, "5")] = id(net, "4");
  std::vector<std::uint8_t> status(5, 0);
  status[id(net, "3")] = overlapping ? 1 : 0;
  return make_habitat(net, siv, status);
}

TEST(OlarTest, SplitHabitatFirstDecode) {
  auto net = bowtie();
  auto h = split_habitat(net, true);
  // ids follow file order 1..5, so labels are [0,0,0,1,1]
  EXPECT_EQ(h.community, (std::vector<CommunityId>{0, 0, 0, 1, 1}));
}

TEST(OlarTest, SplitHabitatFinalDecode) {
  auto net = bowtie();
  auto h = split_habitat(net, true);
  EXPECT_EQ(h.final_community[id(net, "3")], (std::vector<CommunityId>{0, 1}));
  for (const char* v : {"1", "2", "4", "5"}) EXPECT_EQ(h.final_community[id(net, v)].size(), 1u);
  auto p = partition_of(h);
  std::set<std::set<NodeId>> expected{{id(net, "1"), id(net, "2"), id(net, "3")},
                                      {id(net, "3"), id(net, "4"), id(net, "5")}};
  EXPECT_EQ(as_sets(p), expected);
  EXPECT_EQ(p.overlap_count(id(net, "3")), 2u);
}

TEST(OlarTest, StatusZeroKeepsFirstDecode) {
  auto net = bowtie();
  auto h = split_habitat(net, false);
  for (NodeId v = 0; v < 5; ++v) EXPECT_EQ(h.final_community[v], std::vector<CommunityId>{h.community[v]});
  EXPECT_TRUE(partition_of(h).is_disjoint());
}

TEST(OlarTest, TwoNodePath) {
  auto net = AttributedNetwork::from_edges(2, std::vector<Edge>{{0, 1}});
  auto h = make_habitat(net, {1, 0}, {0, 0});
  EXPECT_EQ(as_sets(partition_of(h)), (std::set<std::set<NodeId>>{{0, 1}}));
}

TEST(OlarTest, CycleIsOneCommunity) {
  const std::size_t n = 7;
  std::vector<Edge> edges;
  std::vector<NodeId> siv(n);
  for (NodeId v = 0; v < n; ++v) {
    edges.emplace_back(v, (v + 1) % n);
    siv[v] = (v + 1) % n;
  }
  EXPECT_EQ(first_decode(siv), std::vector<CommunityId>(n, 0));
}

TEST(OlarTest, LabelsOrderedBySmallestMember) {
  std::vector<NodeId> siv{3, 2, 1, 0};
  EXPECT_EQ(first_decode(siv), (std::vector<CommunityId>{0, 1, 1, 0}));
}

// Random genotypes on random graphs against the BFS oracle, both stages.
TEST(OlarTest, DecodeMatchesBfsOracle) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 29;
    auto net = AttributedNetwork::from_edges(n, oracle::random_edges(n, 0.2, gen));
    auto adj = oracle::adjacency_matrix(net);
    std::vector<NodeId> siv(n);
    std::vector<std::uint8_t> status(n);
    for (NodeId v = 0; v < n; ++v) {
      auto row = net.neighbors(v);
      siv[v] = row[gen() % row.size()];
      status[v] = gen() % 3 == 0 ? 1 : 0;
    }
    auto h = make_habitat(net, siv, status);

    std::set<std::set<NodeId>> components;
    for (const auto& c : OverlappingPartition::from_labels(h.community).communities) {
      components.emplace(c.begin(), c.end());
    }
    ASSERT_EQ(components, oracle::bfs_components(siv));
    ASSERT_EQ(as_sets(partition_of(h)), oracle::decode_communities(adj, siv, status));
  }
}

TEST(OlarTest, AllStatusZeroIsDisjointCover) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    auto net = AttributedNetwork::from_edges(n, oracle::random_edges(n, 0.2, gen));
    Rng rng(gen());
    auto h = encode_random(net, OVSet{}, rng);
    auto p = partition_of(h);
    EXPECT_TRUE(p.is_disjoint());
    for (NodeId v = 0; v < n; ++v) EXPECT_EQ(p.overlap_count(v), 1u);
  }
}

TEST(OlarTest, EncodeRandomIsValidAndUniform) {
  auto net = bowtie();
  const NodeId three = id(net, "3");
  OVSet ovset{{three}};
  std::map<NodeId, int> picks;
  int overlapping = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    auto h = encode_random(net, ovset, rng);
    for (NodeId v = 0; v < 5; ++v) {
      ASSERT_TRUE(net.has_edge(v, h.siv[v]));
      if (v != three) {
        ASSERT_EQ(h.status[v], 0);
      }
    }
    ++picks[h.siv[three]];
    overlapping += h.status[three];
  }
  // node 3 has four neighbors; chi-square with 3 degrees of freedom, p = 0.001
  double chi2 = 0;
  for (auto [v, count] : picks) chi2 += std::pow(count - draws / 4.0, 2) / (draws / 4.0);
  EXPECT_EQ(picks.size(), 4u);
  EXPECT_LT(chi2, 16.27);
  EXPECT_NEAR(overlapping / double(draws), 0.5, 3 * std::sqrt(0.25 / draws));
}

TEST(OlarTest, PartitionHelpers) {
  auto p = OverlappingPartition::from_communities(4, {{2, 1, 1}, {}, {3, 2}});
  EXPECT_EQ(p.community_count(), 2u);
  EXPECT_EQ(p.communities[0], (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(p.memberships[2], (std::vector<CommunityId>{0, 1}));
  EXPECT_TRUE(p.memberships[0].empty());
  EXPECT_FALSE(p.is_disjoint());
  EXPECT_THROW(OverlappingPartition::from_communities(2, {{0, 2}}), Error);
}

}  // namespace
}  // namespace mobbo
