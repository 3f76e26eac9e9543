#pragma once

// Link prediction between probes.  New follow edges are guessed with the
// Resource Allocation index over the undirected view of the local graph:
//
//   RA(u, v) = sum over common neighbors w of 1 / degree(w)
//
// where degree is total (in + out) degree and neighborhoods are the
// deduplicated union of in- and out-neighbors.  Candidates are non-adjacent
// pairs with at least one common neighbor.  Direction matters when turning a
// scored pair into follow edges: u -> v is only plausible if u actually
// follows people, so each direction is admitted only when its source clears
// a minimum out-degree (the follower threshold filter).
//
// How many edges to inject per period comes from a running estimate of the
// network's organic growth, fed by what probing observes.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "probekit/graph.hpp"

namespace probekit {

struct CandidatePair {
  VertexId u = 0;  // always u < v
  VertexId v = 0;
  double ra = 0.0;
  bool u_to_v_ok = false;  // out_degree(u) >= filter threshold
  bool v_to_u_ok = false;
};

// Scores every candidate pair of `g`, sorted by (ra desc, u asc, v asc).
// Pairs where neither direction passes the follower threshold are dropped.
// Throws std::invalid_argument on an empty vertex universe.
std::vector<CandidatePair> ra_scores(const Digraph& g, std::size_t filter_min_out);

// History of per-period organic edge-growth observations and the estimate
// derived from them: the rounded mean, clamped at zero (the estimate counts
// edges to add, never to remove).
class GrowthState {
 public:
  void record(long long organic_delta);
  std::size_t observations() const noexcept { return history_.size(); }
  std::span<const long long> history() const noexcept { return history_; }

  // max(0, round(mean(history))); 0 when no observations yet.
  std::size_t growth_estimate() const;

 private:
  std::vector<long long> history_;
};

struct InferenceResult {
  LocalGraph graph;
  std::vector<std::pair<Edge, double>> added;  // injected edges with their RA score
};

// Injects edges for the `budget` highest-RA candidate pairs into the local
// view, marking them as inferred.  Each consumed pair contributes every
// admissible direction that is not already present.
InferenceResult infer_edges(const LocalGraph& local, std::span<const CandidatePair> pairs,
                            std::size_t budget);

}  // namespace probekit
