#pragma once

// Accuracy metrics comparing an estimated ranking / edge set against ground
// truth.  All tie-breaks are by ascending vertex id so repeated evaluations
// of the same inputs agree exactly.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "probekit/graph.hpp"

namespace probekit {

// Root of the mean squared per-vertex score difference, taken over the
// common prefix of the two vectors (the shared vertex universe).  Throws
// std::invalid_argument if that intersection is empty.
double mse(std::span<const double> estimated, std::span<const double> truth);

// Indices of the k largest scores, ordered by (score desc, id asc).
// k is clamped to scores.size().
std::vector<VertexId> top_k(std::span<const double> scores, std::size_t k);

// Top-k restricted to `subset` (same ordering rule); k clamps to its size.
std::vector<VertexId> top_k_subset(std::span<const double> scores,
                                   std::span<const VertexId> subset, std::size_t k);

// Jaccard similarity |A ∩ B| / |A ∪ B| of the two top-k id sets.
// Both selections use top_k's deterministic tie-break.  Two empty
// selections count as identical (similarity 1).
double jaccard_top_k(std::span<const double> estimated, std::span<const double> truth,
                     std::size_t k);

// Jaccard similarity of two plain id sets (duplicates ignored).
double jaccard_sets(std::span<const VertexId> a, std::span<const VertexId> b);

// Kendall rank correlation with tie correction (tau-b):
//   tau_b = (C - D) / sqrt((C + D + Tx) * (C + D + Ty))
// where Tx / Ty count pairs tied only in x / only in y.  Runs in
// O(n log n) via merge-sort inversion counting.  Returns 0 when either
// side is constant (denominator zero).  Throws std::invalid_argument on
// fewer than two observations or mismatched lengths.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Same, restricted to the given vertex ids.
double kendall_tau_b(std::span<const double> x, std::span<const double> y,
                     std::span<const VertexId> subset);

// Edge disagreement between an estimated and a true graph over one universe:
//   first  = |E_est \ E_truth| / |E_truth|   (false positive rate)
//   second = |E_truth \ E_est| / |E_truth|   (false negative rate)
// Throws std::invalid_argument if the truth has no edges.
std::pair<double, double> edge_error_rates(const Digraph& estimated, const Digraph& truth);

// One evaluation row of an experiment, as written to report.csv.
struct PeriodReport {
  int period = 0;
  std::string strategy;
  std::string topic;  // empty for the global (topic-free) ranking
  double theta = 0.0;
  double beta = 0.0;
  double capacity = 0.0;       // probed fraction of the universe per period
  std::uint64_t seed = 0;
  std::size_t probed = 0;      // users probed this period
  double mse_value = 0.0;
  double jaccard10 = 0.0;
  double jaccard100 = 0.0;
  double jaccard1000 = 0.0;
  double kendall = 0.0;
  double edge_fp = 0.0;
  double edge_fn = 0.0;
};

}  // namespace probekit
