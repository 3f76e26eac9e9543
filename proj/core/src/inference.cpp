#include "probekit/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace probekit {

std::vector<CandidatePair> ra_scores(const Digraph& g, std::size_t filter_min_out) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("ra_scores: empty vertex universe");

  // Undirected neighborhoods (dedup union of in and out) and total degrees.
  std::vector<std::vector<VertexId>> nbrs(n);
  std::vector<std::size_t> total_degree(n);
  for (VertexId v = 0; v < n; ++v) {
    std::span<const VertexId> out = g.out_neighbors(v);
    std::span<const VertexId> in = g.in_neighbors(v);
    std::vector<VertexId>& nb = nbrs[v];
    nb.reserve(out.size() + in.size());
    std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(nb));
    total_degree[v] = out.size() + in.size();
  }

  // Accumulate 1/degree(w) into every unordered pair of w's neighbors.
  // Iterating w ascending fixes the floating-point summation order.
  std::unordered_map<std::uint64_t, double> accum;
  for (VertexId w = 0; w < n; ++w) {
    const std::vector<VertexId>& nb = nbrs[w];
    if (nb.size() < 2) continue;
    const double share = 1.0 / static_cast<double>(total_degree[w]);
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        accum[edge_key(nb[i], nb[j])] += share;
      }
    }
  }

  std::vector<CandidatePair> result;
  result.reserve(accum.size());
  for (const auto& [key, ra] : accum) {
    const auto u = static_cast<VertexId>(key >> 32);
    const auto v = static_cast<VertexId>(key & 0xFFFFFFFFu);
    if (g.has_edge(u, v) || g.has_edge(v, u)) continue;  // already connected
    CandidatePair cp;
    cp.u = u;
    cp.v = v;
    cp.ra = ra;
    cp.u_to_v_ok = g.out_degree(u) >= filter_min_out;
    cp.v_to_u_ok = g.out_degree(v) >= filter_min_out;
    if (!cp.u_to_v_ok && !cp.v_to_u_ok) continue;  // no plausible direction
    result.push_back(cp);
  }
  std::sort(result.begin(), result.end(), [](const CandidatePair& a, const CandidatePair& b) {
    if (a.ra != b.ra) return a.ra > b.ra;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return result;
}

void GrowthState::record(long long organic_delta) { history_.push_back(organic_delta); }

std::size_t GrowthState::growth_estimate() const {
  if (history_.empty()) return 0;
  double mean = 0.0;
  for (long long h : history_) mean += static_cast<double>(h);
  mean /= static_cast<double>(history_.size());
  const long long rounded = std::llround(mean);
  return rounded > 0 ? static_cast<std::size_t>(rounded) : 0;
}

InferenceResult infer_edges(const LocalGraph& local, std::span<const CandidatePair> pairs,
                            std::size_t budget) {
  InferenceResult result{local, {}};
  if (budget == 0 || pairs.empty()) return result;

  // Consume candidates best-first regardless of the caller's ordering.
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pairs[a].ra != pairs[b].ra) return pairs[a].ra > pairs[b].ra;
    if (pairs[a].u != pairs[b].u) return pairs[a].u < pairs[b].u;
    return pairs[a].v < pairs[b].v;
  });

  std::size_t consumed = 0;
  for (std::size_t idx : order) {
    if (consumed == budget) break;
    const CandidatePair& cp = pairs[idx];
    if (cp.u >= local.vertex_count() || cp.v >= local.vertex_count() || cp.u == cp.v) {
      throw std::invalid_argument("infer_edges: malformed candidate pair");
    }
    if (cp.u_to_v_ok && !result.graph.graph().has_edge(cp.u, cp.v)) {
      result.graph.add_inferred(cp.u, cp.v);
      result.added.push_back({Edge{cp.u, cp.v}, cp.ra});
    }
    if (cp.v_to_u_ok && !result.graph.graph().has_edge(cp.v, cp.u)) {
      result.graph.add_inferred(cp.v, cp.u);
      result.added.push_back({Edge{cp.v, cp.u}, cp.ra});
    }
    ++consumed;
  }
  return result;
}

}  // namespace probekit
