#include "probekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace probekit {

double mse(std::span<const double> estimated, std::span<const double> truth) {
  if (estimated.size() != truth.size()) {
    throw std::invalid_argument("mse: score vectors cover different universes");
  }
  const std::size_t n = estimated.size();
  if (n == 0) {
    throw std::invalid_argument("mse: empty vertex universe");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = estimated[i] - truth[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

std::vector<VertexId> top_k(std::span<const double> scores, std::size_t k) {
  k = std::min(k, scores.size());
  std::vector<VertexId> ids(scores.size());
  std::iota(ids.begin(), ids.end(), VertexId{0});
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](VertexId a, VertexId b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  ids.resize(k);
  return ids;
}

std::vector<VertexId> top_k_subset(std::span<const double> scores,
                                   std::span<const VertexId> subset, std::size_t k) {
  std::vector<VertexId> ids(subset.begin(), subset.end());
  for (VertexId v : ids) {
    if (v >= scores.size()) {
      throw std::invalid_argument("top_k_subset: subset id out of range");
    }
  }
  k = std::min(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](VertexId a, VertexId b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  ids.resize(k);
  return ids;
}

double jaccard_sets(std::span<const VertexId> a, std::span<const VertexId> b) {
  std::vector<VertexId> sa(a.begin(), a.end());
  std::vector<VertexId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::vector<VertexId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const std::size_t unions = sa.size() + sb.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(unions);
}

double jaccard_top_k(std::span<const double> estimated, std::span<const double> truth,
                     std::size_t k) {
  return jaccard_sets(top_k(estimated, k), top_k(truth, k));
}

namespace {

// Merge-sort pass over values[order], counting inversions (strictly
// decreasing pairs).  Equal values are kept stable and not counted.
std::uint64_t count_inversions(std::vector<std::size_t>& order, std::vector<std::size_t>& scratch,
                               const std::vector<double>& values, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = count_inversions(order, scratch, values, lo, mid) +
                        count_inversions(order, scratch, values, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (values[order[i]] <= values[order[j]]) {
      scratch[k++] = order[i++];
    } else {
      count += mid - i;
      scratch[k++] = order[j++];
    }
  }
  while (i < mid) scratch[k++] = order[i++];
  while (j < hi) scratch[k++] = order[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            order.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

std::uint64_t tie_pairs(const std::vector<double>& sorted) {
  std::uint64_t acc = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const std::uint64_t t = j - i;
    acc += t * (t - 1) / 2;
    i = j;
  }
  return acc;
}

double kendall_impl(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();

  // Sort observations by (x, y); inversions of y in that order are exactly
  // the discordant pairs (Knight's algorithm).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  // Pairs tied in x, and tied in both, from runs in the (x, y) order.
  std::uint64_t tx = 0, txy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && x[order[j]] == x[order[i]]) ++j;
      const std::uint64_t t = j - i;
      tx += t * (t - 1) / 2;
      std::size_t a = i;
      while (a < j) {
        std::size_t b = a;
        while (b < j && y[order[b]] == y[order[a]]) ++b;
        const std::uint64_t tb = b - a;
        txy += tb * (tb - 1) / 2;
        a = b;
      }
      i = j;
    }
  }

  std::uint64_t ty = 0;
  {
    std::vector<double> ys(y);
    std::sort(ys.begin(), ys.end());
    ty = tie_pairs(ys);
  }

  std::vector<std::size_t> scratch(n);
  const std::uint64_t discordant = count_inversions(order, scratch, y, 0, n);

  // Pairs tied in neither coordinate split into concordant + discordant.
  const std::uint64_t untied = n0 - tx - ty + txy;
  const std::uint64_t concordant = untied - discordant;

  const double denom_x = static_cast<double>(n0 - tx);
  const double denom_y = static_cast<double>(n0 - ty);
  // One sqrt of the product, not a product of sqrts: identical rankings then
  // hit a perfect square and come out exactly +/-1.
  const double denom = std::sqrt(denom_x * denom_y);
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) / denom;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kendall_tau_b: series lengths differ");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("kendall_tau_b: need at least two observations");
  }
  return kendall_impl(std::vector<double>(x.begin(), x.end()),
                      std::vector<double>(y.begin(), y.end()));
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y,
                     std::span<const VertexId> subset) {
  if (subset.size() < 2) {
    throw std::invalid_argument("kendall_tau_b: need at least two observations");
  }
  std::vector<double> xs, ys;
  xs.reserve(subset.size());
  ys.reserve(subset.size());
  for (VertexId v : subset) {
    if (v >= x.size() || v >= y.size()) {
      throw std::invalid_argument("kendall_tau_b: subset id out of range");
    }
    xs.push_back(x[v]);
    ys.push_back(y[v]);
  }
  return kendall_impl(xs, ys);
}

std::pair<double, double> edge_error_rates(const Digraph& estimated, const Digraph& truth) {
  if (estimated.vertex_count() != truth.vertex_count()) {
    throw std::invalid_argument("edge_error_rates: vertex universes differ");
  }
  if (truth.edge_count() == 0) {
    throw std::invalid_argument("edge_error_rates: truth graph has no edges");
  }
  std::size_t fp = 0;
  for (VertexId u = 0; u < estimated.vertex_count(); ++u) {
    for (VertexId v : estimated.out_neighbors(u)) {
      if (!truth.has_edge(u, v)) ++fp;
    }
  }
  std::size_t fn = 0;
  for (VertexId u = 0; u < truth.vertex_count(); ++u) {
    for (VertexId v : truth.out_neighbors(u)) {
      if (!estimated.has_edge(u, v)) ++fn;
    }
  }
  const double m = static_cast<double>(truth.edge_count());
  return {static_cast<double>(fp) / m, static_cast<double>(fn) / m};
}

}  // namespace probekit
