#include "probekit/probing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace {

using namespace probekit;

bool all_distinct(std::span<const VertexId> picks) {
  std::set<VertexId> seen(picks.begin(), picks.end());
  return seen.size() == picks.size();
}

TEST(InfluencePast, StddevIsPopulationFlavored) {
  InfluencePast past(2);
  past.append(std::vector<double>{1.0, 4.0});
  EXPECT_EQ(past.stddev(0), 0.0);  // single observation: no volatility signal
  past.append(std::vector<double>{3.0, 4.0});
  // Population stddev of {1, 3}: mean 2, variance ((1)^2 + (1)^2)/2 = 1.
  EXPECT_NEAR(past.stddev(0), 1.0, 1e-15);
  EXPECT_EQ(past.stddev(1), 0.0);
  EXPECT_EQ(past.last(0), 3.0);
  EXPECT_EQ(past.length(), 2u);
}

TEST(InfluencePast, Validates) {
  InfluencePast past(2);
  EXPECT_THROW(past.last(0), std::logic_error);  // nothing recorded yet
  EXPECT_THROW(past.append(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(past.append(std::vector<double>{1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(past.append(std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
  past.append(std::vector<double>{1.0, 2.0});
  EXPECT_THROW(past.last(5), std::invalid_argument);
}

TEST(ChangeScore, BlendsRankAndVolatility) {
  EXPECT_EQ(change_score(0.4, 0.2, 0.0), 0.4);   // pure rank
  EXPECT_EQ(change_score(0.4, 0.2, 1.0), 0.2);   // pure volatility
  EXPECT_NEAR(change_score(0.4, 0.2, 0.5), 0.3, 1e-15);
}

TEST(ChangeScores, ColdStartFallsBackToRank) {
  // One period of history: every stddev is 0, so theta only scales the rank
  // part.  The resulting *order* matches the pure-rank order; theta=1
  // degenerates to all-zero scores (documented cold-start behavior).
  InfluencePast past(3);
  past.append(std::vector<double>{0.2, 0.5, 0.3});
  const auto half = change_scores(past, 0.5);
  EXPECT_NEAR(half[1], 0.25, 1e-15);
  const auto vol_only = change_scores(past, 1.0);
  EXPECT_EQ(vol_only, (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(ChangeScores, EmptyHistoryIsAllZero) {
  InfluencePast past(3);
  EXPECT_EQ(change_scores(past, 0.3), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(SelectChange, TopKByScoreThenId) {
  const std::vector<double> scores = {0.1, 0.9, 0.9, 0.4};
  EXPECT_EQ(select_change(scores, 3), (std::vector<VertexId>{1, 2, 3}));
}

TEST(SelectRandom, DistinctInRangeAndSeedStable) {
  std::mt19937_64 rng_a(7), rng_b(7), rng_c(8);
  const auto a = select_random(100, 10, rng_a);
  const auto b = select_random(100, 10, rng_b);
  const auto c = select_random(100, 10, rng_c);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);  // astronomically unlikely to collide
  EXPECT_EQ(a.size(), 10u);
  EXPECT_TRUE(all_distinct(a));
  for (VertexId v : a) EXPECT_LT(v, 100u);
  EXPECT_THROW(select_random(5, 6, rng_a), std::invalid_argument);
}

TEST(SelectRandom, CoversUniverseWhenKEqualsN) {
  std::mt19937_64 rng(3);
  const auto picks = select_random(12, 12, rng);
  EXPECT_TRUE(all_distinct(picks));
  EXPECT_EQ(picks.size(), 12u);
}

TEST(SelectIndegree, PrefersHighInDegree) {
  Digraph g(4);
  g.add_edge(1, 0);
  g.add_edge(2, 0);
  g.add_edge(3, 0);
  g.add_edge(0, 1);
  InfluencePast past(4);
  past.append(std::vector<double>{3.0, 1.0, 0.0, 0.0});
  const auto picks = select_indegree(g, past, 0.0, 2);
  EXPECT_EQ(picks, (std::vector<VertexId>{0, 1}));
}

TEST(SelectPriority, AccumulatesAndResets) {
  std::vector<double> priority(3, 0.0);
  const std::vector<double> rank = {0.5, 0.3, 0.2};
  // Period 1: priorities become (0.5, 0.3, 0.2); picks 0; resets it.
  auto p1 = select_priority(priority, rank, 1);
  EXPECT_EQ(p1, (std::vector<VertexId>{0}));
  EXPECT_EQ(priority[0], 0.0);
  EXPECT_NEAR(priority[1], 0.3, 1e-15);
  // Period 2: priorities (0.5, 0.6, 0.4); 1 has accumulated past 0.
  auto p2 = select_priority(priority, rank, 1);
  EXPECT_EQ(p2, (std::vector<VertexId>{1}));
  // Period 3: (1.0, 0.3, 0.6) -> 0 again.
  auto p3 = select_priority(priority, rank, 1);
  EXPECT_EQ(p3, (std::vector<VertexId>{0}));
}

TEST(RoundRobinRecord, AutoResetsWhenFull) {
  RoundRobinRecord rr(3);
  rr.mark(0);
  rr.mark(1);
  EXPECT_EQ(rr.marked_count(), 2u);
  EXPECT_TRUE(rr.contains(0));
  rr.mark(2);  // completes the cycle -> resets to empty
  EXPECT_EQ(rr.marked_count(), 0u);
  EXPECT_FALSE(rr.contains(0));
}

TEST(RrchChangeArm, GuardsFloatingPointCeil) {
  // 0.8 * 50 is 40.000000000000007 in binary; a naive ceil gives 41.
  EXPECT_EQ(rrch_change_arm(0.8, 50), 40u);
  EXPECT_EQ(rrch_change_arm(0.5, 4), 2u);
  EXPECT_EQ(rrch_change_arm(0.5, 5), 3u);   // genuine round-up stays
  EXPECT_EQ(rrch_change_arm(0.0, 10), 0u);
  EXPECT_EQ(rrch_change_arm(1.0, 10), 10u);
}

TEST(SelectRrch, SplitsBudgetAndAvoidsDuplicates) {
  StrategyConfig cfg;
  cfg.theta = 0.0;
  cfg.beta = 0.5;
  cfg.k = 4;
  std::mt19937_64 rng(11);
  RoundRobinRecord rr(20);
  std::vector<double> scores(20, 0.0);
  scores[7] = 0.9;
  scores[3] = 0.8;
  const auto picks = select_rrch(scores, rr, cfg, rng);
  ASSERT_EQ(picks.size(), 4u);
  EXPECT_TRUE(all_distinct(picks));
  // Change arm = ceil(0.5 * 4) = 2: the two top-scored users lead.
  EXPECT_EQ(picks[0], 7u);
  EXPECT_EQ(picks[1], 3u);
  // Random arm marked its picks (change picks are not marked).
  EXPECT_EQ(rr.marked_count(), 2u);
  EXPECT_TRUE(rr.contains(picks[2]));
  EXPECT_TRUE(rr.contains(picks[3]));
}

TEST(SelectRrch, RandomArmSkipsMarkedUsers) {
  StrategyConfig cfg;
  cfg.beta = 0.0;  // pure round-robin
  cfg.k = 3;
  std::mt19937_64 rng(5);
  RoundRobinRecord rr(9);
  std::set<VertexId> seen;
  for (int period = 0; period < 3; ++period) {
    const auto picks = select_rrch(std::vector<double>(9, 0.0), rr, cfg, rng);
    for (VertexId v : picks) {
      EXPECT_TRUE(seen.insert(v).second) << "vertex " << v << " repeated within the cycle";
    }
  }
  EXPECT_EQ(seen.size(), 9u);  // one full cycle, everyone exactly once
}

TEST(SelectRrch, ResetsMidSelectionWhenPoolEmpties) {
  StrategyConfig cfg;
  cfg.beta = 0.0;
  cfg.k = 4;  // universe of 6: second period needs 4 picks from a pool of 2
  std::mt19937_64 rng(17);
  RoundRobinRecord rr(6);
  const auto p1 = select_rrch(std::vector<double>(6, 0.0), rr, cfg, rng);
  const auto p2 = select_rrch(std::vector<double>(6, 0.0), rr, cfg, rng);
  EXPECT_EQ(p1.size(), 4u);
  EXPECT_EQ(p2.size(), 4u);
  EXPECT_TRUE(all_distinct(p2));
  // The two leftovers of cycle 1 must appear in period 2 (coverage), the
  // remaining two picks come from the restarted cycle.
  std::set<VertexId> first(p1.begin(), p1.end());
  std::size_t leftovers = 0;
  for (VertexId v = 0; v < 6; ++v) {
    if (first.count(v) == 0) {
      ++leftovers;
      EXPECT_NE(std::find(p2.begin(), p2.end(), v), p2.end())
          << "unvisited vertex " << v << " skipped by the new cycle";
    }
  }
  EXPECT_EQ(leftovers, 2u);
}

TEST(SelectRrch, BetaOneIsPureChange) {
  StrategyConfig cfg;
  cfg.theta = 0.0;
  cfg.beta = 1.0;
  cfg.k = 2;
  std::mt19937_64 rng(1);
  RoundRobinRecord rr(5);
  std::vector<double> scores = {0.1, 0.5, 0.4, 0.3, 0.2};
  const auto picks = select_rrch(scores, rr, cfg, rng);
  EXPECT_EQ(picks, (std::vector<VertexId>{1, 2}));
  EXPECT_EQ(rr.marked_count(), 0u);  // no random arm, nothing marked
}

TEST(StrategyConfig, Validation) {
  StrategyConfig cfg;
  cfg.k = 5;
  EXPECT_NO_THROW(cfg.validate(10));
  EXPECT_THROW(cfg.validate(4), std::invalid_argument);  // k > universe
  cfg.k = 0;
  EXPECT_THROW(cfg.validate(10), std::invalid_argument);
  cfg = {};
  cfg.theta = 1.5;
  EXPECT_THROW(cfg.validate(10), std::invalid_argument);
  cfg = {};
  cfg.beta = -0.1;
  EXPECT_THROW(cfg.validate(10), std::invalid_argument);
}

TEST(CoverageBound, Formula) {
  // n=5000, beta=0.8, k=50: random arm 10/period -> 500 periods.
  EXPECT_EQ(rrch_coverage_bound(5000, 0.8, 50), 500u);
  EXPECT_EQ(rrch_coverage_bound(10, 0.0, 3), 4u);  // ceil(10/3)
  EXPECT_THROW(rrch_coverage_bound(10, 1.0, 3), std::invalid_argument);
}

// Property: over rrch_coverage_bound periods, every vertex gets probed at
// least once, whatever the change scores do.
TEST(SelectRrch, CoverageBoundHoldsUnderAdversarialScores) {
  const std::size_t n = 200;
  StrategyConfig cfg;
  cfg.theta = 0.0;
  cfg.beta = 0.8;
  cfg.k = 10;  // random arm = 2/period -> bound = 100 periods
  const std::size_t bound = rrch_coverage_bound(n, cfg.beta, cfg.k);
  EXPECT_EQ(bound, 100u);
  std::mt19937_64 rng(23);
  std::mt19937_64 score_rng(29);
  RoundRobinRecord rr(n);
  std::vector<int> probed(n, 0);
  std::vector<double> scores(n);
  for (std::size_t period = 0; period < bound; ++period) {
    // Adversarial-ish: scores shuffle every period, so the change arm keeps
    // hammering a moving subset and coverage must come from the random arm.
    for (auto& s : scores) s = static_cast<double>(score_rng() % 50);
    for (VertexId v : select_rrch(scores, rr, cfg, rng)) ++probed[v];
  }
  for (std::size_t v = 0; v < n; ++v) {
    EXPECT_GE(probed[v], 1) << "vertex " << v << " never probed within the bound";
  }
}

}  // namespace
