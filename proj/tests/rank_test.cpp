#include "probekit/rank.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"

namespace {

using namespace probekit;

double l1_sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(Pagerank, UniformOnSymmetricCycle) {
  Digraph g(4);
  for (VertexId v = 0; v < 4; ++v) g.add_edge(v, (v + 1) % 4);
  const RankVector pr = pagerank(g);
  for (double s : pr.scores) EXPECT_NEAR(s, 0.25, 1e-12);
  EXPECT_TRUE(pr.converged);
  EXPECT_NEAR(l1_sum(pr.scores), 1.0, 1e-12);
}

TEST(Pagerank, AllDanglingIsUniform) {
  const RankVector pr = pagerank(Digraph(7));
  for (double s : pr.scores) EXPECT_NEAR(s, 1.0 / 7.0, 1e-12);
}

TEST(Pagerank, KnownStarValue) {
  // Hub 0 receives from 1..4; none of the spokes receive anything, so each
  // spoke holds exactly the teleport share of a 5-vertex graph with hub 0
  // dangling.
  Digraph g(5);
  for (VertexId v = 1; v < 5; ++v) g.add_edge(v, 0);
  const RankVector pr = pagerank(g);
  const auto x = oracle::pagerank_dense(g, 0.85);
  for (VertexId v = 0; v < 5; ++v) EXPECT_NEAR(pr.scores[v], x[v], 1e-9);
  EXPECT_GT(pr.scores[0], pr.scores[1]);
  EXPECT_NEAR(pr.scores[1], pr.scores[2], 1e-15);
}

TEST(Pagerank, MatchesDenseSolveOnRandomGraphs) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const std::size_t m = std::min<std::size_t>(n * (n - 1), rng() % (4 * n + 1));
    const Digraph g = oracle::random_digraph(n, m, rng);
    const RankVector pr = pagerank(g);
    const std::vector<double> x = oracle::pagerank_dense(g, pr.alpha);
    for (VertexId v = 0; v < n; ++v) {
      ASSERT_NEAR(pr.scores[v], x[v], 1e-8) << "trial " << trial << " vertex " << v;
    }
    EXPECT_NEAR(l1_sum(pr.scores), 1.0, 1e-9);
  }
}

TEST(Pagerank, ScoresRespectTeleportFloor) {
  std::mt19937_64 rng(17);
  const Digraph g = oracle::random_digraph(30, 90, rng);
  const RankVector pr = pagerank(g);
  const double floor = (1.0 - pr.alpha) / 30.0 - 1e-12;
  for (double s : pr.scores) EXPECT_GE(s, floor);
}

TEST(Pagerank, ValidatesOptions) {
  Digraph g(2);
  g.add_edge(0, 1);
  EXPECT_THROW(pagerank(Digraph(0)), std::invalid_argument);
  RankOptions bad;
  bad.alpha = 1.0;
  EXPECT_THROW(pagerank(g, bad), std::invalid_argument);
  bad.alpha = 0.0;
  EXPECT_THROW(pagerank(g, bad), std::invalid_argument);
  bad = {};
  bad.epsilon = 0.0;
  EXPECT_THROW(pagerank(g, bad), std::invalid_argument);
  bad = {};
  bad.max_iter = 0;
  EXPECT_THROW(pagerank(g, bad), std::invalid_argument);
}

TEST(Pagerank, ReportsNonConvergenceHonestly) {
  std::mt19937_64 rng(5);
  const Digraph g = oracle::random_digraph(50, 200, rng);
  RankOptions opt;
  opt.max_iter = 2;
  const RankVector pr = pagerank(g, opt);
  EXPECT_FALSE(pr.converged);
  EXPECT_EQ(pr.iterations_used, 2);
  EXPECT_NEAR(l1_sum(pr.scores), 1.0, 1e-12);  // normalized regardless
}

TEST(WeightedPagerank, UniformWeightsReduceToUnweighted) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Digraph g = oracle::random_digraph(25 + trial, 100, rng);
    const RankVector plain = pagerank(g);
    const RankVector w1 = weighted_pagerank(g, [](VertexId, VertexId) { return 1.0; });
    const RankVector w7 = weighted_pagerank(g, [](VertexId, VertexId) { return 7.25; });
    for (std::size_t v = 0; v < plain.scores.size(); ++v) {
      EXPECT_NEAR(plain.scores[v], w1.scores[v], 1e-10);
      EXPECT_NEAR(plain.scores[v], w7.scores[v], 1e-10);
    }
  }
}

TEST(WeightedPagerank, MassFollowsWeight) {
  // 0 points at 1 (weight 3) and 2 (weight 1): vertex 1 must collect three
  // times vertex 2's share of 0's out-mass.
  Digraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 0);
  g.add_edge(2, 0);
  const RankVector pr = weighted_pagerank(
      g, [](VertexId, VertexId dst) { return dst == 1 ? 3.0 : 1.0; });
  const double base = (1.0 - pr.alpha) / 3.0;
  const double gain1 = pr.scores[1] - base;
  const double gain2 = pr.scores[2] - base;
  EXPECT_NEAR(gain1 / gain2, 3.0, 1e-9);
}

TEST(WeightedPagerank, ZeroOutWeightMeansDangling) {
  Digraph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  // Kill vertex 1's only outgoing weight; it must behave exactly like a
  // dangling vertex of the graph without that edge.
  const RankVector weighted =
      weighted_pagerank(g, [](VertexId src, VertexId) { return src == 1 ? 0.0 : 1.0; });
  Digraph pruned(3);
  pruned.add_edge(0, 1);
  pruned.add_edge(2, 0);
  const RankVector plain = pagerank(pruned);
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(weighted.scores[v], plain.scores[v], 1e-10);
}

TEST(WeightedPagerank, RejectsBadWeights) {
  Digraph g(2);
  g.add_edge(0, 1);
  EXPECT_THROW(weighted_pagerank(g, [](VertexId, VertexId) { return -1.0; }),
               std::invalid_argument);
  EXPECT_THROW(weighted_pagerank(
                   g, [](VertexId, VertexId) { return std::numeric_limits<double>::infinity(); }),
               std::invalid_argument);
  EXPECT_THROW(weighted_pagerank(g, EdgeWeightFn{}), std::invalid_argument);
}

TEST(Differential, MatchesOneStepRecomputationExactly) {
  // The closed form must equal the difference between one synchronous
  // iteration on the modified graph and one on the original, both seeded
  // with the converged scores.  This is an identity, so the tolerance is
  // machine-level.
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 40) {
    const std::size_t n = 3 + rng() % 30;
    const Digraph g = oracle::random_digraph(n, 2 * n, rng);
    const auto u = static_cast<VertexId>(rng() % n);
    const auto v = static_cast<VertexId>(rng() % n);
    if (u == v || g.has_edge(u, v) || g.out_degree(u) == 0) continue;
    ++checked;

    const RankVector pr = pagerank(g);
    const std::map<VertexId, double> delta = differential_one_step(g, pr, Edge{u, v});

    Digraph g2 = g;
    g2.add_edge(u, v);
    const std::vector<double> before = oracle::pagerank_one_step(g, pr.scores, pr.alpha);
    const std::vector<double> after = oracle::pagerank_one_step(g2, pr.scores, pr.alpha);
    for (VertexId w = 0; w < n; ++w) {
      const double expected = after[w] - before[w];
      const auto it = delta.find(w);
      const double got = it == delta.end() ? 0.0 : it->second;
      ASSERT_NEAR(got, expected, 1e-12) << "vertex " << w;
    }
  }
}

TEST(Differential, SignsAndMassConservation) {
  Digraph g(4);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 0);
  g.add_edge(2, 0);
  const RankVector pr = pagerank(g);
  const auto delta = differential_one_step(g, pr, Edge{0, 3});
  EXPECT_GT(delta.at(3), 0.0);    // the new target gains
  EXPECT_LT(delta.at(1), 0.0);    // existing targets pay for it
  EXPECT_LT(delta.at(2), 0.0);
  double total = 0.0;
  for (const auto& [v, d] : delta) total += d;
  EXPECT_NEAR(total, 0.0, 1e-15);  // redistribution, not creation
}

TEST(Differential, ValidatesEdge) {
  Digraph g(3);
  g.add_edge(0, 1);
  const RankVector pr = pagerank(g);
  EXPECT_THROW(differential_one_step(g, pr, Edge{0, 1}), std::invalid_argument);  // exists
  EXPECT_THROW(differential_one_step(g, pr, Edge{2, 2}), std::invalid_argument);  // loop
  EXPECT_THROW(differential_one_step(g, pr, Edge{2, 0}), std::invalid_argument);  // u dangling
}

}  // namespace
