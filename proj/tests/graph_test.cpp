#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mobbo/graph.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace mobbo {
namespace {

using testing::bowtie;
using testing::id;
using testing::ids;
using testing::parse;

std::vector<NodeId> row(const AttributedNetwork& net, NodeId v) {
  auto r = net.neighbors(v);
  return {r.begin(), r.end()};
}

TEST(GraphTest, LoadsBowtieNetwork) {
  auto net = bowtie();
  EXPECT_EQ(net.node_count(), 5u);
  EXPECT_EQ(net.edge_count(), 6u);
  EXPECT_EQ(net.attribute_count(), 1u);
  EXPECT_EQ(net.domain_size(0), 2u);
  EXPECT_EQ(net.attribute_name(0), "group");
}

TEST(GraphTest, NeighborsMatchBowtie) {
  auto net = bowtie();
  EXPECT_EQ(row(net, id(net, "3")), ids(net, {"1", "2", "4", "5"}));
  EXPECT_EQ(row(net, id(net, "1")), ids(net, {"2", "3"}));
}

TEST(GraphTest, PathGraphNeighbors) {
  auto net = AttributedNetwork::from_edges(2, std::vector<Edge>{{0, 1}});
  EXPECT_EQ(row(net, 0), std::vector<NodeId>{1});
  EXPECT_EQ(row(net, 1), std::vector<NodeId>{0});
}

TEST(GraphTest, NeighborsOutOfRange) {
  auto net = bowtie();
  try {
    net.neighbors(5);
    FAIL() << "expected OutOfRangeNode";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfRangeNode);
  }
}

ErrorCode load_error(const std::string& edges, const std::string& attributes, bool drop = false) {
  try {
    parse(edges, attributes, drop);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return ErrorCode::kIo;
}

TEST(GraphTest, LoaderErrors) {
  EXPECT_EQ(load_error("", "node,x\n"), ErrorCode::kEmptyNetwork);
  EXPECT_EQ(load_error("# only a comment\n\n", "node,x\n"), ErrorCode::kEmptyNetwork);
  EXPECT_EQ(load_error("a a\n", "node,x\na,1\n"), ErrorCode::kSelfLoop);
  EXPECT_EQ(load_error("a b c\n", "node,x\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(load_error("a b\n", "node,x\na,1\nb,1\nc,1\n"), ErrorCode::kUnknownNodeInAttributes);
  EXPECT_EQ(load_error("a b\n", "node,x\na,1\n"), ErrorCode::kMissingAttributeRow);
  EXPECT_EQ(load_error("a b\nc\n", "node,x\na,1\nb,1\nc,2\n"), ErrorCode::kIsolatedNode);
  EXPECT_EQ(load_error("a b\n", "node\na\nb\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(load_error("a b\n", "node,x\na,1\nb\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(load_error("a b\n", "node,x\na,1\na,2\nb,1\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(load_error("a b\n", ""), ErrorCode::kMalformedLine);
}

TEST(GraphTest, DropIsolatedRenumbers) {
  auto net = parse("a b\nz\nb c\n", "node,x\nz,q\na,p\nb,p\nc,r\n", true);
  EXPECT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.external_id(0), "a");
  EXPECT_EQ(net.external_id(2), "c");
  EXPECT_EQ(net.find("z"), net.node_count());
  // "q" only belonged to the dropped node, so it is not interned
  EXPECT_EQ(net.domain_size(0), 2u);
}

TEST(GraphTest, DuplicateEdgesCollapse) {
  auto net = parse("a b\nb a\na b\nb c\n", "node,x\na,1\nb,1\nc,1\n");
  EXPECT_EQ(net.edge_count(), 2u);
  EXPECT_EQ(net.degree(net.find("b")), 2u);
}

TEST(GraphTest, AttributeRowOrderFixesIds) {
  auto net = parse("a b\nb c\n", "node,x,y\nc,1,u\nb,2,u\na,1,v\n");
  EXPECT_EQ(net.external_id(0), "c");
  EXPECT_EQ(net.external_id(1), "b");
  EXPECT_EQ(net.attribute(0, 0), net.attribute(2, 0));
  EXPECT_NE(net.attribute(0, 1), net.attribute(2, 1));
  EXPECT_EQ(net.attribute_label(1, net.attribute(2, 1)), "v");
}

TEST(GraphTest, CommentsAndCrlf) {
  auto net = parse("# header\r\n a  b \r\n\r\n# c d\r\nb c\r\n", "# attrs\nnode, x\na, 1\r\nb,1\nc ,2\n");
  EXPECT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.edge_count(), 2u);
  EXPECT_EQ(net.attribute_name(0), "x");
  EXPECT_EQ(net.external_id(2), "c");
}

// Invariants over random graphs: symmetric, sorted, duplicate-free rows,
// degree sum 2m, and write/reload reproduces everything.
TEST(GraphTest, RandomGraphInvariantsAndRoundTrip) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + gen() % 30;
    auto edges = oracle::random_edges(n, 0.15, gen);
    auto attrs = oracle::random_attributes(n, 1 + gen() % 3, 4, gen);
    auto net = AttributedNetwork::from_edges(n, edges, attrs);

    std::size_t degree_sum = 0;
    for (NodeId v = 0; v < n; ++v) {
      auto r = row(net, v);
      degree_sum += r.size();
      EXPECT_TRUE(std::is_sorted(r.begin(), r.end()));
      EXPECT_EQ(std::adjacent_find(r.begin(), r.end()), r.end());
      for (NodeId w : r) {
        EXPECT_NE(w, v);
        EXPECT_TRUE(net.has_edge(w, v));
      }
    }
    EXPECT_EQ(degree_sum, 2 * net.edge_count());

    std::ostringstream e, a;
    write_network(net, e, a);
    auto again = parse(e.str(), a.str());
    ASSERT_EQ(again.node_count(), net.node_count());
    ASSERT_EQ(again.attribute_count(), net.attribute_count());
    EXPECT_EQ(again.edge_count(), net.edge_count());
    for (NodeId v = 0; v < n; ++v) {
      EXPECT_EQ(again.external_id(v), net.external_id(v));
      EXPECT_EQ(row(again, v), row(net, v));
      for (std::size_t h = 0; h < net.attribute_count(); ++h) {
        EXPECT_EQ(again.attribute(v, h), net.attribute(v, h));
      }
    }
    std::ostringstream e2, a2;
    write_network(again, e2, a2);
    EXPECT_EQ(e2.str(), e.str());
    EXPECT_EQ(a2.str(), a.str());
  }
}

TEST(GraphTest, FootballFixture) {
  auto net = testing::load_fixture("football");
  EXPECT_EQ(net.node_count(), 115u);
  EXPECT_EQ(net.edge_count(), 613u);
  EXPECT_EQ(net.domain_size(0), 12u);
}

}  // namespace
}  // namespace mobbo
