#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "support.hpp"

using namespace shiftcd;
using namespace testing_support;

TEST(BuildGraph, DirectedPairIsAggregated) {
  std::vector<EdgeRecord> r = {{"a", "b", 2.0}, {"b", "a", 3.0}};
  const auto g = build_graph(r, true);
  ASSERT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(0, 1), 5.0);
  EXPECT_EQ(g.weight(1, 0), 5.0);
}

TEST(BuildGraph, SingleRecordTotalWeight) {
  std::vector<EdgeRecord> r = {{"a", "b"}};
  const auto g = build_graph(r, true);
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.total_weight(), 2.0);
}

TEST(BuildGraph, ParallelEdgesSummedSelfLoopDropped) {
  std::vector<EdgeRecord> r = {{"a", "b", 1.0}, {"a", "b", 1.0}, {"a", "a", 7.0}};
  const auto g = build_graph(r, false);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.weight(0, 1), 2.0);
  EXPECT_EQ(g.total_weight(), 4.0);
  EXPECT_EQ(g.weight(0, 0), 0.0);
}

TEST(BuildGraph, IdsFollowFirstAppearance) {
  std::vector<EdgeRecord> r = {{"z", "y"}, {"x", "z"}};
  const auto g = build_graph(r, false);
  EXPECT_EQ(g.name(0), "z");
  EXPECT_EQ(g.name(1), "y");
  EXPECT_EQ(g.name(2), "x");
  EXPECT_EQ(*g.find("x"), 2u);
  EXPECT_FALSE(g.find("w").has_value());
}

TEST(BuildGraph, RejectsEmptyInput) {
  std::vector<EdgeRecord> r;
  EXPECT_THROW(build_graph(r, false), GraphError);
}

TEST(BuildGraph, RejectsBadWeightsNamingTheRecord) {
  for (double w : {0.0, -1.0, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity()}) {
    std::vector<EdgeRecord> r = {{"a", "b", 1.0}, {"c", "d", w}};
    try {
      build_graph(r, false);
      FAIL() << "weight " << w << " accepted";
    } catch (const GraphError& e) {
      EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos) << e.what();
    }
  }
}

TEST(BuildGraph, RejectsMalformedIds) {
  std::vector<EdgeRecord> empty = {{"", "b"}};
  EXPECT_THROW(build_graph(empty, false), GraphError);
  std::vector<EdgeRecord> spaced = {{"a b", "c"}};
  EXPECT_THROW(build_graph(spaced, false), GraphError);
}

TEST(Degree, Examples) {
  const auto t = triangle();
  for (NodeId i = 0; i < 3; ++i) EXPECT_EQ(t.degree(i), 2.0);

  GraphBuilder b;
  b.add_node("lonely");
  b.add_edge({"a", "b", 2.0});
  b.add_edge({"a", "c", 3.0});
  const auto g = b.build();
  EXPECT_EQ(g.degree(*g.find("lonely")), 0.0);
  EXPECT_EQ(g.degree(*g.find("a")), 5.0);
  EXPECT_THROW(g.degree(99), std::out_of_range);
}

TEST(Neighbors, Examples) {
  const auto t = triangle();
  const auto n0 = t.neighbors(0);
  ASSERT_EQ(n0.size(), 2u);
  EXPECT_EQ(n0[0].id, 1u);
  EXPECT_EQ(n0[0].weight, 1.0);
  EXPECT_EQ(n0[1].id, 2u);

  const auto star = unit_graph(4, {{0, 3}, {0, 1}, {0, 2}});
  const auto c = star.neighbors(0);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end(), [](auto a, auto b) { return a.id < b.id; }));

  const auto iso = unit_graph(2, {});
  EXPECT_TRUE(iso.neighbors(0).empty());
  EXPECT_THROW(iso.neighbors(2), std::out_of_range);
}

TEST(GraphProperties, SymmetryAndTotalWeight) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(rng, 2 + trial % 30, 0.3, 9);
    double sum = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      sum += g.degree(i);
      for (const auto& nb : g.neighbors(i)) {
        EXPECT_NE(nb.id, i);
        EXPECT_GT(nb.weight, 0.0);
        EXPECT_EQ(g.weight(nb.id, i), nb.weight);
      }
    }
    EXPECT_NEAR(sum, g.total_weight(), 1e-12 * std::max(1.0, sum));
  }
}

TEST(GraphProperties, RecordOrderDoesNotChangeWeights) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> node(0, 9);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EdgeRecord> r;
    for (int e = 0; e < 40; ++e) r.push_back({"n" + std::to_string(node(rng)), "n" + std::to_string(node(rng)), w(rng)});
    const auto a = build_graph(r, trial % 2 == 0);
    std::shuffle(r.begin(), r.end(), rng);
    const auto b = build_graph(r, trial % 2 == 0);
    ASSERT_EQ(a.node_count(), b.node_count());
    ASSERT_EQ(a.edge_count(), b.edge_count());
    EXPECT_EQ(a.total_weight(), b.total_weight());
    a.for_each_edge([&](NodeId i, NodeId j, double wa) {
      const NodeId bi = *b.find(a.name(i));
      const NodeId bj = *b.find(a.name(j));
      EXPECT_EQ(b.weight(bi, bj), wa);  // bit-identical
    });
    EXPECT_EQ(build_graph(r, trial % 2 == 0), b);
  }
}

TEST(GraphProperties, IsolatedNodesAppended) {
  const auto g = triangle();
  const std::vector<std::string> extra = {"iso"};
  const auto h = with_isolated_nodes(g, extra);
  EXPECT_EQ(h.node_count(), 4u);
  EXPECT_EQ(h.edge_count(), 3u);
  EXPECT_EQ(h.degree(3), 0.0);
  EXPECT_EQ(h.total_weight(), g.total_weight());
}
