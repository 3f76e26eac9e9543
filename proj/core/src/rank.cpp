#include "probekit/rank.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace probekit {

namespace {

void check_options(const RankOptions& opt) {
  if (!(opt.alpha > 0.0) || !(opt.alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1), got " + std::to_string(opt.alpha));
  }
  if (!(opt.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be > 0");
  }
  if (opt.max_iter < 1) {
    throw std::invalid_argument("max_iter must be >= 1");
  }
}

void normalize_l1(std::vector<double>& scores) {
  double sum = 0.0;
  for (double s : scores) sum += s;
  if (sum > 0.0) {
    for (double& s : scores) s /= sum;
  }
}

}  // namespace

RankVector pagerank(const Digraph& g, const RankOptions& opt) {
  check_options(opt);
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("pagerank: empty graph");

  std::vector<double> cur(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);

  RankVector result;
  result.alpha = opt.alpha;

  const double teleport = (1.0 - opt.alpha) / static_cast<double>(n);
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    double dangling = 0.0;
    for (VertexId u = 0; u < n; ++u) {
      if (g.out_degree(u) == 0) dangling += cur[u];
    }
    const double base = teleport + opt.alpha * dangling / static_cast<double>(n);

    for (VertexId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (VertexId u : g.in_neighbors(v)) {
        acc += cur[u] / static_cast<double>(g.out_degree(u));
      }
      next[v] = opt.alpha * acc + base;
    }

    double l1 = 0.0;
    for (VertexId v = 0; v < n; ++v) l1 += std::abs(next[v] - cur[v]);
    cur.swap(next);
    result.iterations_used = iter;
    if (l1 < opt.epsilon) {
      result.converged = true;
      break;
    }
  }

  normalize_l1(cur);
  result.scores = std::move(cur);
  return result;
}

RankVector weighted_pagerank(const Digraph& g, const EdgeWeightFn& weight,
                             const RankOptions& opt) {
  check_options(opt);
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("weighted_pagerank: empty graph");
  if (!weight) throw std::invalid_argument("weighted_pagerank: null weight function");

  // Resolve weights once: per-vertex incoming (source, weight) pairs plus
  // total outgoing weight, validating as we go.
  std::vector<double> out_weight(n, 0.0);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v : g.out_neighbors(u)) {
      const double w = weight(u, v);
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("weighted_pagerank: weight of edge (" + std::to_string(u) +
                                    ", " + std::to_string(v) + ") must be finite and >= 0");
      }
      out_weight[u] += w;
    }
  }
  struct InEdge {
    VertexId src;
    double w;
  };
  std::vector<std::vector<InEdge>> in_edges(n);
  for (VertexId v = 0; v < n; ++v) {
    in_edges[v].reserve(g.in_degree(v));
    for (VertexId u : g.in_neighbors(v)) {
      in_edges[v].push_back({u, weight(u, v)});
    }
  }

  std::vector<double> cur(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);

  RankVector result;
  result.alpha = opt.alpha;

  const double teleport = (1.0 - opt.alpha) / static_cast<double>(n);
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    double dangling = 0.0;
    for (VertexId u = 0; u < n; ++u) {
      if (out_weight[u] == 0.0) dangling += cur[u];
    }
    const double base = teleport + opt.alpha * dangling / static_cast<double>(n);

    for (VertexId v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const InEdge& e : in_edges[v]) {
        if (out_weight[e.src] > 0.0) acc += cur[e.src] * e.w / out_weight[e.src];
      }
      next[v] = opt.alpha * acc + base;
    }

    double l1 = 0.0;
    for (VertexId v = 0; v < n; ++v) l1 += std::abs(next[v] - cur[v]);
    cur.swap(next);
    result.iterations_used = iter;
    if (l1 < opt.epsilon) {
      result.converged = true;
      break;
    }
  }

  normalize_l1(cur);
  result.scores = std::move(cur);
  return result;
}

std::map<VertexId, double> differential_one_step(const Digraph& g, const RankVector& pr_old,
                                                 Edge new_edge) {
  const std::size_t n = g.vertex_count();
  if (pr_old.scores.size() != n) {
    throw std::invalid_argument("differential_one_step: rank vector size " +
                                std::to_string(pr_old.scores.size()) + " != vertex count " +
                                std::to_string(n));
  }
  const VertexId u = new_edge.src;
  const VertexId v = new_edge.dst;
  if (u >= n || v >= n) throw std::invalid_argument("differential_one_step: vertex out of range");
  if (u == v) throw std::invalid_argument("differential_one_step: self-loop");
  if (g.has_edge(u, v)) {
    throw std::invalid_argument("differential_one_step: edge (" + std::to_string(u) + ", " +
                                std::to_string(v) + ") already present");
  }
  const std::size_t d = g.out_degree(u);
  if (d == 0) {
    throw std::invalid_argument(
        "differential_one_step: source is dangling; the one-step formula needs out_degree >= 1");
  }

  const double pu = pr_old.scores[u];
  const double alpha = pr_old.alpha;
  const double dd = static_cast<double>(d);

  std::map<VertexId, double> delta;
  for (VertexId w : g.out_neighbors(u)) {
    delta[w] = -alpha * pu / (dd * (dd + 1.0));
  }
  delta[v] = alpha * pu / (dd + 1.0);
  return delta;
}

}  // namespace probekit
