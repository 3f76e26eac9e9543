#include "probekit/graph.hpp"

#include <algorithm>
#include <string>

namespace probekit {

namespace {

// Insert into a sorted vector, keeping it sorted.  Caller guarantees absence.
void sorted_insert(std::vector<VertexId>& list, VertexId v) {
  list.insert(std::lower_bound(list.begin(), list.end(), v), v);
}

// Erase from a sorted vector.  Caller guarantees presence.
void sorted_erase(std::vector<VertexId>& list, VertexId v) {
  list.erase(std::lower_bound(list.begin(), list.end(), v));
}

}  // namespace

Digraph::Digraph(std::size_t vertex_count) : out_(vertex_count), in_(vertex_count) {}

void Digraph::check_vertex(VertexId v) const {
  if (v >= vertex_count()) {
    throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range [0, " +
                                std::to_string(vertex_count()) + ")");
  }
}

bool Digraph::has_edge(VertexId src, VertexId dst) const {
  check_vertex(src);
  check_vertex(dst);
  return present_.count(edge_key(src, dst)) != 0;
}

bool Digraph::add_edge(VertexId src, VertexId dst) {
  check_vertex(src);
  check_vertex(dst);
  if (src == dst) {
    throw std::invalid_argument("self-loop rejected: " + std::to_string(src));
  }
  if (!present_.insert(edge_key(src, dst)).second) return false;
  sorted_insert(out_[src], dst);
  sorted_insert(in_[dst], src);
  ++edge_count_;
  return true;
}

bool Digraph::remove_edge(VertexId src, VertexId dst) {
  check_vertex(src);
  check_vertex(dst);
  if (present_.erase(edge_key(src, dst)) == 0) return false;
  sorted_erase(out_[src], dst);
  sorted_erase(in_[dst], src);
  --edge_count_;
  return true;
}

std::span<const VertexId> Digraph::out_neighbors(VertexId v) const {
  check_vertex(v);
  return out_[v];
}

std::span<const VertexId> Digraph::in_neighbors(VertexId v) const {
  check_vertex(v);
  return in_[v];
}

std::size_t Digraph::out_degree(VertexId v) const {
  check_vertex(v);
  return out_[v].size();
}

std::size_t Digraph::in_degree(VertexId v) const {
  check_vertex(v);
  return in_[v].size();
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> result;
  result.reserve(edge_count_);
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (VertexId v : out_[u]) result.push_back({u, v});
  }
  return result;
}

bool Digraph::operator==(const Digraph& other) const {
  if (vertex_count() != other.vertex_count() || edge_count_ != other.edge_count_) return false;
  for (VertexId u = 0; u < vertex_count(); ++u) {
    if (out_[u] != other.out_[u]) return false;
  }
  return true;
}

EdgeDelta edge_diff(const Digraph& a, const Digraph& b) {
  if (a.vertex_count() != b.vertex_count()) {
    throw std::invalid_argument("edge_diff: vertex universes differ (" +
                                std::to_string(a.vertex_count()) + " vs " +
                                std::to_string(b.vertex_count()) + ")");
  }
  const std::vector<Edge> ea = a.edges();
  const std::vector<Edge> eb = b.edges();
  EdgeDelta delta;
  std::set_difference(eb.begin(), eb.end(), ea.begin(), ea.end(), std::back_inserter(delta.added));
  std::set_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                      std::back_inserter(delta.removed));
  return delta;
}

LocalGraph::LocalGraph(const Digraph& initial)
    : graph_(initial), last_probed_(initial.vertex_count(), -1) {}

int LocalGraph::last_probed(VertexId v) const {
  if (v >= last_probed_.size()) {
    throw std::invalid_argument("vertex id " + std::to_string(v) + " out of range [0, " +
                                std::to_string(last_probed_.size()) + ")");
  }
  return last_probed_[v];
}

bool LocalGraph::is_inferred(VertexId src, VertexId dst) const {
  return inferred_.count(edge_key(src, dst)) != 0;
}

void LocalGraph::replace_incident(VertexId v, const Digraph& truth) {
  // Drop all current incident edges (copies: lists shrink while erasing).
  const std::vector<VertexId> old_out(graph_.out_neighbors(v).begin(),
                                      graph_.out_neighbors(v).end());
  for (VertexId w : old_out) {
    graph_.remove_edge(v, w);
    inferred_.erase(edge_key(v, w));
  }
  const std::vector<VertexId> old_in(graph_.in_neighbors(v).begin(),
                                     graph_.in_neighbors(v).end());
  for (VertexId w : old_in) {
    graph_.remove_edge(w, v);
    inferred_.erase(edge_key(w, v));
  }
  // Install the truth's incident edges.  Edges touching other vertices may
  // already be present (added when their other endpoint was processed).
  for (VertexId w : truth.out_neighbors(v)) {
    graph_.add_edge(v, w);
    inferred_.erase(edge_key(v, w));
  }
  for (VertexId w : truth.in_neighbors(v)) {
    if (!graph_.has_edge(w, v)) graph_.add_edge(w, v);
    inferred_.erase(edge_key(w, v));
  }
}

void LocalGraph::set_last_probed(VertexId v, int period) {
  if (v >= last_probed_.size()) {
    throw std::invalid_argument("vertex id out of range");
  }
  last_probed_[v] = period;
}

void LocalGraph::add_inferred(VertexId src, VertexId dst) {
  if (graph_.add_edge(src, dst)) inferred_.insert(edge_key(src, dst));
}

void LocalGraph::drop_inferred() {
  for (std::uint64_t key : inferred_) {
    graph_.remove_edge(static_cast<VertexId>(key >> 32),
                       static_cast<VertexId>(key & 0xffffffffu));
  }
  inferred_.clear();
}

std::pair<LocalGraph, EdgeDelta> probe_update(const LocalGraph& local, const Snapshot& truth,
                                              std::span<const VertexId> probed) {
  const Digraph& tg = truth.g();
  if (tg.vertex_count() != local.vertex_count()) {
    throw std::invalid_argument("probe_update: truth universe " +
                                std::to_string(tg.vertex_count()) + " != local universe " +
                                std::to_string(local.vertex_count()));
  }

  std::vector<VertexId> users(probed.begin(), probed.end());
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  for (VertexId u : users) {
    if (u >= local.vertex_count()) {
      throw std::invalid_argument("probe_update: probed id " + std::to_string(u) +
                                  " out of range");
    }
    if (local.last_probed(u) >= truth.period) {
      throw std::invalid_argument("probe_update: user " + std::to_string(u) +
                                  " already probed at period >= " + std::to_string(truth.period));
    }
  }

  LocalGraph next = local;
  const Digraph before = local.graph();
  for (VertexId u : users) {
    next.replace_incident(u, tg);
    next.set_last_probed(u, truth.period);
  }
  return {std::move(next), edge_diff(before, next.graph())};
}

}  // namespace probekit
