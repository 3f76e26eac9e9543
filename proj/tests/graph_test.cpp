#include "probekit/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace {

using namespace probekit;

TEST(Digraph, StartsEmpty) {
  Digraph g(4);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(g.edges().empty());
  for (VertexId v = 0; v < 4; ++v) {
    EXPECT_TRUE(g.out_neighbors(v).empty());
    EXPECT_TRUE(g.in_neighbors(v).empty());
  }
}

TEST(Digraph, AddRemoveRoundTrip) {
  Digraph g(5);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_TRUE(g.add_edge(1, 0));  // reverse direction is a distinct edge
  EXPECT_FALSE(g.add_edge(0, 1));
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.has_edge(0, 2));

  EXPECT_TRUE(g.remove_edge(0, 1));
  EXPECT_FALSE(g.remove_edge(0, 1));
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_FALSE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(Digraph, RejectsSelfLoopsAndOutOfRange) {
  Digraph g(3);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(0, 3), std::invalid_argument);
  EXPECT_THROW(g.add_edge(3, 0), std::invalid_argument);
  EXPECT_THROW((void)g.has_edge(0, 7), std::invalid_argument);
  EXPECT_THROW((void)g.out_neighbors(3), std::invalid_argument);
}

TEST(Digraph, AdjacencyStaysSorted) {
  Digraph g(6);
  for (VertexId v : {4u, 1u, 5u, 2u}) g.add_edge(3, v);
  for (VertexId u : {5u, 0u, 2u}) g.add_edge(u, 3);
  const auto out = g.out_neighbors(3);
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end()));
  const auto in = g.in_neighbors(3);
  EXPECT_TRUE(std::is_sorted(in.begin(), in.end()));
  g.remove_edge(3, 2);
  const auto out2 = g.out_neighbors(3);
  EXPECT_TRUE(std::is_sorted(out2.begin(), out2.end()));
  EXPECT_EQ(out2.size(), 3u);
}

TEST(Digraph, EdgesAscendingAndEquality) {
  Digraph a(4), b(4);
  for (auto [u, v] : {std::pair{2u, 0u}, {0u, 3u}, {0u, 1u}, {3u, 2u}}) a.add_edge(u, v);
  for (auto [u, v] : {std::pair{0u, 1u}, {3u, 2u}, {0u, 3u}, {2u, 0u}}) b.add_edge(u, v);
  const std::vector<Edge> expect = {{0, 1}, {0, 3}, {2, 0}, {3, 2}};
  EXPECT_EQ(a.edges(), expect);
  EXPECT_EQ(a, b);
  b.remove_edge(3, 2);
  EXPECT_FALSE(a == b);
  EXPECT_FALSE(a == Digraph(5));
}

TEST(Digraph, DegreeBookkeepingUnderChurn) {
  std::mt19937_64 rng(99);
  Digraph g(20);
  std::vector<Edge> live;
  for (int step = 0; step < 2000; ++step) {
    const auto u = static_cast<VertexId>(rng() % 20);
    const auto v = static_cast<VertexId>(rng() % 20);
    if (u == v) continue;
    if (rng() % 3 == 0) {
      const bool removed = g.remove_edge(u, v);
      const auto it = std::find(live.begin(), live.end(), Edge{u, v});
      EXPECT_EQ(removed, it != live.end());
      if (it != live.end()) live.erase(it);
    } else {
      const bool added = g.add_edge(u, v);
      const bool fresh = std::find(live.begin(), live.end(), Edge{u, v}) == live.end();
      EXPECT_EQ(added, fresh);
      if (fresh) live.push_back({u, v});
    }
  }
  EXPECT_EQ(g.edge_count(), live.size());
  std::size_t out_total = 0, in_total = 0;
  for (VertexId v = 0; v < 20; ++v) {
    out_total += g.out_degree(v);
    in_total += g.in_degree(v);
  }
  EXPECT_EQ(out_total, live.size());
  EXPECT_EQ(in_total, live.size());
}

TEST(EdgeDiff, SymmetricDifference) {
  Digraph a(4), b(4);
  a.add_edge(0, 1);
  a.add_edge(1, 2);
  a.add_edge(2, 3);
  b.add_edge(0, 1);
  b.add_edge(1, 3);
  b.add_edge(2, 3);
  const EdgeDelta d = edge_diff(a, b);
  EXPECT_EQ(d.added, (std::vector<Edge>{{1, 3}}));
  EXPECT_EQ(d.removed, (std::vector<Edge>{{1, 2}}));
  EXPECT_TRUE(edge_diff(a, a).empty());
}

TEST(EdgeDiff, RejectsUniverseMismatch) {
  EXPECT_THROW(edge_diff(Digraph(3), Digraph(4)), std::invalid_argument);
}

TEST(Snapshot, MissingGraphThrows) {
  Snapshot s;
  EXPECT_THROW(s.g(), std::logic_error);
  const Snapshot ok = make_snapshot(2, Digraph(3));
  EXPECT_EQ(ok.period, 2);
  EXPECT_EQ(ok.g().vertex_count(), 3u);
}

TEST(LocalGraph, InitialObservationCopiesEverything) {
  Digraph truth(4);
  truth.add_edge(0, 1);
  truth.add_edge(2, 3);
  LocalGraph local(truth);
  EXPECT_EQ(local.graph(), truth);
  for (VertexId v = 0; v < 4; ++v) EXPECT_EQ(local.last_probed(v), -1);
  EXPECT_EQ(local.inferred_count(), 0u);
}

TEST(ProbeUpdate, RefreshesOnlyProbedIncidentEdges) {
  Digraph t0(5);
  t0.add_edge(0, 1);
  t0.add_edge(1, 2);
  t0.add_edge(3, 4);
  LocalGraph local(t0);

  // Truth moves on: 0->1 is gone, 2->0 and 4->3 are new.
  Digraph t1 = t0;
  t1.remove_edge(0, 1);
  t1.add_edge(2, 0);
  t1.add_edge(4, 3);
  const Snapshot now = make_snapshot(1, t1);

  const std::vector<VertexId> probed = {0};
  const auto [next, delta] = probe_update(local, now, probed);

  // Probing 0 sees the lost 0->1 and the new 2->0, but not 4->3.
  EXPECT_FALSE(next.graph().has_edge(0, 1));
  EXPECT_TRUE(next.graph().has_edge(2, 0));
  EXPECT_FALSE(next.graph().has_edge(4, 3));
  EXPECT_TRUE(next.graph().has_edge(1, 2));  // untouched
  EXPECT_EQ(delta.added, (std::vector<Edge>{{2, 0}}));
  EXPECT_EQ(delta.removed, (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(next.last_probed(0), 1);
  EXPECT_EQ(next.last_probed(1), -1);
  // The input view is untouched (pure update).
  EXPECT_EQ(local.last_probed(0), -1);
  EXPECT_TRUE(local.graph().has_edge(0, 1));
}

TEST(ProbeUpdate, ProbeAllMatchesTruth) {
  std::mt19937_64 rng(7);
  Digraph t0(12);
  Digraph t1(12);
  for (int i = 0; i < 40; ++i) {
    const auto u = static_cast<VertexId>(rng() % 12);
    const auto v = static_cast<VertexId>(rng() % 12);
    if (u == v) continue;
    if (rng() % 2) t0.add_edge(u, v);
    if (rng() % 2) t1.add_edge(u, v);
  }
  LocalGraph local(t0);
  std::vector<VertexId> all(12);
  for (VertexId v = 0; v < 12; ++v) all[v] = v;
  const auto [next, delta] = probe_update(local, make_snapshot(1, t1), all);
  EXPECT_EQ(next.graph(), t1);
  const EdgeDelta expect = edge_diff(t0, t1);
  EXPECT_EQ(delta.added, expect.added);
  EXPECT_EQ(delta.removed, expect.removed);
}

TEST(ProbeUpdate, IdempotentWithinPeriod) {
  Digraph t0(4);
  t0.add_edge(0, 1);
  LocalGraph local(t0);
  Digraph t1 = t0;
  t1.add_edge(1, 3);
  const Snapshot now = make_snapshot(1, t1);
  const auto [once, d1] = probe_update(local, now, std::vector<VertexId>{1, 3});
  // Probing the same users again against the same period must be rejected:
  // their timestamps already sit at truth.period.
  EXPECT_THROW(probe_update(once, now, std::vector<VertexId>{1}), std::invalid_argument);
  // But probing *other* users still works and changes nothing more.
  const auto [twice, d2] = probe_update(once, now, std::vector<VertexId>{0, 2});
  EXPECT_EQ(twice.graph(), once.graph());
  EXPECT_TRUE(d2.empty());
  (void)d1;
}

TEST(ProbeUpdate, DropsStaleInferredEdgesOnProbe) {
  Digraph t0(4);
  t0.add_edge(0, 1);
  t0.add_edge(2, 1);
  LocalGraph local(t0);
  local.add_inferred(3, 1);  // a guessed follow that truth never had
  EXPECT_TRUE(local.graph().has_edge(3, 1));
  EXPECT_TRUE(local.is_inferred(3, 1));

  const Snapshot now = make_snapshot(1, t0);
  const auto [next, delta] = probe_update(local, now, std::vector<VertexId>{3});
  EXPECT_FALSE(next.graph().has_edge(3, 1));
  EXPECT_FALSE(next.is_inferred(3, 1));
  EXPECT_EQ(delta.removed, (std::vector<Edge>{{3, 1}}));
}

TEST(ProbeUpdate, ConfirmedInferredEdgeLosesItsTag) {
  Digraph t0(4);
  t0.add_edge(0, 1);
  LocalGraph local(t0);
  local.add_inferred(2, 1);

  Digraph t1 = t0;
  t1.add_edge(2, 1);  // the guess came true
  const auto [next, delta] = probe_update(local, make_snapshot(1, t1), std::vector<VertexId>{2});
  EXPECT_TRUE(next.graph().has_edge(2, 1));
  EXPECT_FALSE(next.is_inferred(2, 1));  // now observed, no longer a guess
  EXPECT_TRUE(delta.empty());            // view already had it
}

TEST(ProbeUpdate, ValidatesInput) {
  LocalGraph local{Digraph(3)};
  const Snapshot now = make_snapshot(1, Digraph(3));
  EXPECT_THROW(probe_update(local, make_snapshot(1, Digraph(4)), std::vector<VertexId>{0}),
               std::invalid_argument);
  EXPECT_THROW(probe_update(local, now, std::vector<VertexId>{3}), std::invalid_argument);
  Snapshot no_graph;
  no_graph.period = 1;
  EXPECT_THROW(probe_update(local, no_graph, std::vector<VertexId>{0}), std::logic_error);
}

TEST(ProbeUpdate, DuplicateProbeIdsCollapse) {
  Digraph t0(3);
  LocalGraph local(t0);
  Digraph t1(3);
  t1.add_edge(0, 1);
  const auto [next, delta] =
      probe_update(local, make_snapshot(1, t1), std::vector<VertexId>{1, 1, 0, 1});
  EXPECT_TRUE(next.graph().has_edge(0, 1));
  EXPECT_EQ(delta.added.size(), 1u);
}

}  // namespace
