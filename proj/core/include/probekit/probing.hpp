#pragma once

// Probe-target selection under a per-period budget of k users.
//
// The central scoring rule blends the latest estimated influence with its
// historical volatility:
//
//   score(v) = (1 - theta) * last_rank(v) + theta * stddev(rank history of v)
//
// theta = 0 probes whoever currently ranks highest, theta = 1 probes whoever
// moves the most.  The round-robin + change strategy (rrch) spends
// ceil(beta * k) of the budget on the top-scored users and the remainder on
// uniform picks from users not yet visited in the current round-robin cycle,
// guaranteeing every user is eventually refreshed.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "probekit/graph.hpp"
#include "probekit/metrics.hpp"

namespace probekit {

// Per-vertex history of influence scores, appended once per period.
class InfluencePast {
 public:
  explicit InfluencePast(std::size_t vertex_count);

  std::size_t vertex_count() const noexcept { return series_.size(); }
  std::size_t length() const noexcept { return length_; }

  // Records one period of scores (one finite value >= 0 per vertex).
  void append(std::span<const double> scores);

  // Latest recorded score.  Throws std::logic_error when empty.
  double last(VertexId v) const;

  // Population standard deviation of v's history; 0 when fewer than two
  // periods are recorded (cold start).
  double stddev(VertexId v) const;

  std::span<const double> series(VertexId v) const;

 private:
  void check_vertex(VertexId v) const;

  std::size_t length_ = 0;
  std::vector<std::vector<double>> series_;  // [vertex] -> one value per period
};

// Members of the current round-robin cycle that were already probed by the
// random arm.  Resets to empty automatically once every vertex is marked.
class RoundRobinRecord {
 public:
  explicit RoundRobinRecord(std::size_t vertex_count);

  std::size_t vertex_count() const noexcept { return marked_.size(); }
  std::size_t marked_count() const noexcept { return count_; }
  bool contains(VertexId v) const;

  void mark(VertexId v);
  void reset();

 private:
  std::vector<char> marked_;
  std::size_t count_ = 0;
};

struct StrategyConfig {
  double theta = 0.5;          // volatility weight in [0, 1]
  double beta = 0.8;           // change-arm share of the rrch budget, in [0, 1]
  std::size_t k = 1;           // probes per period, 1 <= k <= universe size
  std::uint64_t rng_seed = 0;  // seed for the strategy's random draws

  void validate(std::size_t universe) const;
};

// score(v) for one vertex given its latest rank and volatility.
double change_score(double last_rank, double stddev, double theta);

// score(v) for every vertex from the recorded history.  With an empty
// history there is no rank signal yet: all scores are 0.
std::vector<double> change_scores(const InfluencePast& past, double theta);

// Top-k vertices by (score desc, id asc).
std::vector<VertexId> select_change(std::span<const double> scores, std::size_t k);

// Uniform sample of k distinct vertices.
std::vector<VertexId> select_random(std::size_t universe, std::size_t k, std::mt19937_64& rng);

// Blend of in-degree and its volatility, mirroring change_score with the
// in-degree history in place of the rank history.
std::vector<VertexId> select_indegree(const Digraph& g, const InfluencePast& indegree_past,
                                      double theta, std::size_t k);

// Accumulates each vertex's rank into a priority, probes the k largest
// priorities, and resets those to zero.  Mutates `priority` in place.
std::vector<VertexId> select_priority(std::vector<double>& priority,
                                      std::span<const double> current_rank, std::size_t k);

// Size of the rrch change arm: ceil(beta * k), guarded against the
// floating-point round-up of exact products (0.8 * 50 evaluates slightly
// above 40 in binary).
std::size_t rrch_change_arm(double beta, std::size_t k);

// Round-robin + change: ceil(beta * k) change picks, the rest uniform from
// vertices outside `record` (and not already picked).  Picks are marked in
// `record`; when the eligible pool empties mid-selection the cycle restarts.
// The first rrch_change_arm(beta, k) entries of the result are the change
// picks.
std::vector<VertexId> select_rrch(std::span<const double> scores, RoundRobinRecord& record,
                                  const StrategyConfig& cfg, std::mt19937_64& rng);

// Periods needed until rrch's random arm alone has cycled the universe:
// ceil(n / ((1 - beta) * k)), the worst-case coverage bound.
std::size_t rrch_coverage_bound(std::size_t universe, double beta, std::size_t k);

}  // namespace probekit
