#pragma once

// Influence scoring: power-iteration PageRank over the follower graph, a
// weighted variant for topic-level scoring, and a one-step differential
// approximation of the impact of a single new edge.
//
// Conventions, fixed for every caller:
//   - teleport term (1 - alpha) / n with uniform personalization,
//   - dangling mass redistributed uniformly each iteration,
//   - L1 convergence test, final L1 normalization to sum exactly ~1,
//   - vertices are scored in ascending id order, so results are reproducible
//     bit-for-bit on the same platform.

#include <functional>
#include <map>
#include <vector>

#include "probekit/graph.hpp"

namespace probekit {

struct RankOptions {
  double alpha = 0.85;    // damping factor, must lie in (0, 1)
  double epsilon = 1e-9;  // L1 convergence threshold, must be > 0
  int max_iter = 200;     // must be >= 1
};

struct RankVector {
  std::vector<double> scores;  // indexed by VertexId, sums to 1
  double alpha = 0.85;
  int iterations_used = 0;
  bool converged = false;
};

// Unweighted PageRank.  Throws std::invalid_argument on an empty graph or
// out-of-range options.
RankVector pagerank(const Digraph& g, const RankOptions& opt = {});

// Per-edge weight lookup; must return a finite value >= 0.
using EdgeWeightFn = std::function<double(VertexId src, VertexId dst)>;

// Weighted PageRank: out-mass of u is split proportionally to edge weights.
// A vertex whose outgoing weights sum to zero is treated as dangling.
// With uniform positive weights this reduces to the unweighted ranking.
RankVector weighted_pagerank(const Digraph& g, const EdgeWeightFn& weight,
                             const RankOptions& opt = {});

// One-step estimate of how adding edge (u, v) shifts the current ranking:
// v gains alpha * PR(u) / (d+1) and each existing out-neighbor of u loses
// alpha * PR(u) / (d * (d+1)), where d = out_degree(u) before insertion.
// Only touched vertices appear in the result.  Throws std::invalid_argument
// if the edge already exists, is a self-loop, or u has no outgoing edges.
std::map<VertexId, double> differential_one_step(const Digraph& g, const RankVector& pr_old,
                                                 Edge new_edge);

}  // namespace probekit
