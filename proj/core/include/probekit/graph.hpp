#pragma once

// Directed follower-graph storage with deterministic iteration order.
//
// Vertices form a fixed universe [0, n).  Adjacency lists are kept sorted
// ascending so that every traversal, diff and serialization of the same edge
// set is byte-for-byte reproducible.  Edge membership checks are O(1) via a
// packed-key hash set; list updates are O(degree).

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace probekit {

using VertexId = std::uint32_t;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Packs a directed edge into one 64-bit hash key.
inline constexpr std::uint64_t edge_key(VertexId src, VertexId dst) noexcept {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t vertex_count);

  std::size_t vertex_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool has_edge(VertexId src, VertexId dst) const;

  // Inserts (src, dst).  Returns false if the edge already exists.
  // Throws std::invalid_argument on self-loops or out-of-range vertices.
  bool add_edge(VertexId src, VertexId dst);

  // Removes (src, dst).  Returns false if the edge was absent.
  bool remove_edge(VertexId src, VertexId dst);

  std::span<const VertexId> out_neighbors(VertexId v) const;
  std::span<const VertexId> in_neighbors(VertexId v) const;
  std::size_t out_degree(VertexId v) const;
  std::size_t in_degree(VertexId v) const;

  // All edges in ascending (src, dst) order.
  std::vector<Edge> edges() const;

  // Equality is over (vertex universe, edge set).
  bool operator==(const Digraph& other) const;

 private:
  void check_vertex(VertexId v) const;

  std::size_t edge_count_ = 0;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  std::unordered_set<std::uint64_t> present_;
};

// A ground-truth observation of the network at one period.  Snapshots for
// consecutive periods may share the same immutable graph when nothing changed.
struct Snapshot {
  int period = 0;
  std::shared_ptr<const Digraph> graph;

  const Digraph& g() const {
    if (!graph) throw std::logic_error("Snapshot holds no graph");
    return *graph;
  }
};

inline Snapshot make_snapshot(int period, Digraph g) {
  return Snapshot{period, std::make_shared<const Digraph>(std::move(g))};
}

// Symmetric difference between two edge sets over the same vertex universe.
struct EdgeDelta {
  std::vector<Edge> added;    // in b but not a, ascending
  std::vector<Edge> removed;  // in a but not b, ascending

  bool empty() const noexcept { return added.empty() && removed.empty(); }
};

EdgeDelta edge_diff(const Digraph& a, const Digraph& b);

// The crawler's partial view of the network.  Starts from a full observation
// of period 0 and is refreshed user-by-user as probes land.  Edges injected by
// link prediction are tagged so that later probes (or audits) can tell them
// apart from observed ones.
class LocalGraph {
 public:
  LocalGraph() = default;

  // Full observation of `initial`; every vertex gets last_probed = -1,
  // meaning "not probed since the initial crawl".
  explicit LocalGraph(const Digraph& initial);

  const Digraph& graph() const noexcept { return graph_; }
  std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }

  int last_probed(VertexId v) const;

  bool is_inferred(VertexId src, VertexId dst) const;
  std::size_t inferred_count() const noexcept { return inferred_.size(); }

  // Internal mutators used by probe_update / infer_edges.
  void replace_incident(VertexId v, const Digraph& truth);
  void set_last_probed(VertexId v, int period);
  void add_inferred(VertexId src, VertexId dst);

  // Removes every inferred edge, reverting the view to observed edges only.
  // The inference stage re-derives its overlay from scratch each period so
  // that stale guesses do not accumulate as if they were observations.
  void drop_inferred();

 private:
  Digraph graph_;
  std::vector<int> last_probed_;
  std::unordered_set<std::uint64_t> inferred_;
};

// Applies probe results for `probed` users against the ground truth of
// `truth.period`: every edge incident to a probed user is replaced by the
// truth, stale edges disappear, and the probed users' timestamps advance.
// Returns the updated view plus the delta that was applied to it.
//
// Throws std::invalid_argument if universes mismatch, a probed id is out of
// range, or truth.period is not ahead of the probed users' timestamps.
std::pair<LocalGraph, EdgeDelta> probe_update(const LocalGraph& local,
                                              const Snapshot& truth,
                                              std::span<const VertexId> probed);

}  // namespace probekit
