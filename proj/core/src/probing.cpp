#include "probekit/probing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "probekit/detail/random.hpp"

namespace probekit {

InfluencePast::InfluencePast(std::size_t vertex_count) : series_(vertex_count) {}

void InfluencePast::check_vertex(VertexId v) const {
  if (v >= series_.size()) {
    throw std::invalid_argument("InfluencePast: vertex id " + std::to_string(v) +
                                " out of range");
  }
}

void InfluencePast::append(std::span<const double> scores) {
  if (scores.size() != series_.size()) {
    throw std::invalid_argument("InfluencePast::append: got " + std::to_string(scores.size()) +
                                " scores for " + std::to_string(series_.size()) + " vertices");
  }
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0) {
      throw std::invalid_argument("InfluencePast::append: scores must be finite and >= 0");
    }
  }
  for (std::size_t v = 0; v < scores.size(); ++v) series_[v].push_back(scores[v]);
  ++length_;
}

double InfluencePast::last(VertexId v) const {
  check_vertex(v);
  if (length_ == 0) throw std::logic_error("InfluencePast::last: history is empty");
  return series_[v].back();
}

double InfluencePast::stddev(VertexId v) const {
  check_vertex(v);
  const std::vector<double>& s = series_[v];
  if (s.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= static_cast<double>(s.size());
  double var = 0.0;
  for (double x : s) var += (x - mean) * (x - mean);
  var /= static_cast<double>(s.size());
  return std::sqrt(var);
}

std::span<const double> InfluencePast::series(VertexId v) const {
  check_vertex(v);
  return series_[v];
}

RoundRobinRecord::RoundRobinRecord(std::size_t vertex_count) : marked_(vertex_count, 0) {}

bool RoundRobinRecord::contains(VertexId v) const {
  if (v >= marked_.size()) {
    throw std::invalid_argument("RoundRobinRecord: vertex id out of range");
  }
  return marked_[v] != 0;
}

void RoundRobinRecord::mark(VertexId v) {
  if (v >= marked_.size()) {
    throw std::invalid_argument("RoundRobinRecord: vertex id out of range");
  }
  if (marked_[v] == 0) {
    marked_[v] = 1;
    ++count_;
  }
  // A complete cycle: everyone was visited, start over.
  if (count_ == marked_.size()) reset();
}

void RoundRobinRecord::reset() {
  std::fill(marked_.begin(), marked_.end(), 0);
  count_ = 0;
}

void StrategyConfig::validate(std::size_t universe) const {
  if (!(theta >= 0.0) || !(theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in [0, 1], got " + std::to_string(theta));
  }
  if (!(beta >= 0.0) || !(beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1], got " + std::to_string(beta));
  }
  if (k < 1 || k > universe) {
    throw std::invalid_argument("k must lie in [1, " + std::to_string(universe) + "], got " +
                                std::to_string(k));
  }
}

double change_score(double last_rank, double stddev, double theta) {
  return (1.0 - theta) * last_rank + theta * stddev;
}

std::vector<double> change_scores(const InfluencePast& past, double theta) {
  std::vector<double> scores(past.vertex_count(), 0.0);
  if (past.length() == 0) return scores;
  for (VertexId v = 0; v < past.vertex_count(); ++v) {
    scores[v] = change_score(past.last(v), past.stddev(v), theta);
  }
  return scores;
}

std::vector<VertexId> select_change(std::span<const double> scores, std::size_t k) {
  return top_k(scores, k);
}

std::vector<VertexId> select_random(std::size_t universe, std::size_t k, std::mt19937_64& rng) {
  if (k > universe) {
    throw std::invalid_argument("select_random: k exceeds universe size");
  }
  std::vector<VertexId> pool(universe);
  std::iota(pool.begin(), pool.end(), VertexId{0});
  std::vector<VertexId> picks;
  picks.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = detail::uniform_index(rng, pool.size());
    picks.push_back(pool[j]);
    pool[j] = pool.back();
    pool.pop_back();
  }
  return picks;
}

std::vector<VertexId> select_indegree(const Digraph& g, const InfluencePast& indegree_past,
                                      double theta, std::size_t k) {
  if (indegree_past.vertex_count() != g.vertex_count()) {
    throw std::invalid_argument("select_indegree: history universe differs from graph");
  }
  std::vector<double> scores(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    scores[v] = change_score(static_cast<double>(g.in_degree(v)), indegree_past.stddev(v), theta);
  }
  return top_k(scores, k);
}

std::vector<VertexId> select_priority(std::vector<double>& priority,
                                      std::span<const double> current_rank, std::size_t k) {
  if (priority.size() != current_rank.size()) {
    throw std::invalid_argument("select_priority: priority and rank sizes differ");
  }
  for (std::size_t v = 0; v < priority.size(); ++v) priority[v] += current_rank[v];
  std::vector<VertexId> picks = top_k(priority, k);
  for (VertexId v : picks) priority[v] = 0.0;
  return picks;
}

std::size_t rrch_change_arm(double beta, std::size_t k) {
  const double raw = beta * static_cast<double>(k);
  const auto c = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(c, k);
}

std::vector<VertexId> select_rrch(std::span<const double> scores, RoundRobinRecord& record,
                                  const StrategyConfig& cfg, std::mt19937_64& rng) {
  const std::size_t n = scores.size();
  if (record.vertex_count() != n) {
    throw std::invalid_argument("select_rrch: record universe differs from scores");
  }
  cfg.validate(n);

  const std::size_t change_picks = rrch_change_arm(cfg.beta, cfg.k);
  std::vector<VertexId> picks = select_change(scores, change_picks);

  std::vector<char> taken(n, 0);
  for (VertexId v : picks) taken[v] = 1;

  std::vector<VertexId> pool;
  pool.reserve(n);
  for (VertexId v = 0; v < n; ++v) {
    if (!taken[v] && !record.contains(v)) pool.push_back(v);
  }

  std::size_t remaining = cfg.k - change_picks;
  while (remaining > 0) {
    if (pool.empty()) {
      // Cycle exhausted mid-selection: restart it with everyone not already
      // picked this period.
      record.reset();
      for (VertexId v = 0; v < n; ++v) {
        if (!taken[v]) pool.push_back(v);
      }
      if (pool.empty()) break;  // k == n, nothing left to pick
    }
    const std::size_t j = detail::uniform_index(rng, pool.size());
    const VertexId v = pool[j];
    pool[j] = pool.back();
    pool.pop_back();
    picks.push_back(v);
    taken[v] = 1;
    record.mark(v);
    --remaining;
  }
  return picks;
}

std::size_t rrch_coverage_bound(std::size_t universe, double beta, std::size_t k) {
  const double random_arm = (1.0 - beta) * static_cast<double>(k);
  if (!(random_arm > 0.0)) {
    throw std::invalid_argument("rrch_coverage_bound: beta = 1 leaves no random arm");
  }
  return static_cast<std::size_t>(std::ceil(static_cast<double>(universe) / random_arm - 1e-9));
}

}  // namespace probekit
