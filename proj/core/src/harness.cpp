#include "probekit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "probekit/detail/random.hpp"
#include "probekit/io.hpp"
#include "probekit/probing.hpp"

namespace probekit {

namespace {

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

// Short float rendering for directory names ("%g": 0.5, 0.01, 1e-05).
std::string short_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

bool known_strategy(const std::string& name) {
  return name == "noprobe" || name == "random" || name == "indegree" || name == "priority" ||
         name == "change" || name == "rrch";
}

std::vector<double> indegree_scores(const Digraph& g) {
  std::vector<double> scores(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    scores[v] = static_cast<double>(g.in_degree(v));
  }
  return scores;
}

// Everything the truth side precomputes once and shares read-only.
struct TruthCache {
  const Dataset* data = nullptr;
  std::vector<RankVector> pr;                            // [t]
  std::vector<std::vector<RankVector>> wpr;              // [topic][t]
  std::vector<std::vector<std::vector<VertexId>>> rel;   // [topic][t] relevant ids
};

struct TopicMass {
  std::vector<double> raw;
  std::vector<long long> rtfav;
};

TopicMass topic_mass(std::span<const std::vector<TweetRecord>> windows,
                     const TopicDictionary& dict) {
  TopicMass mass;
  mass.raw.resize(windows.size());
  mass.rtfav.resize(windows.size());
  for (VertexId v = 0; v < windows.size(); ++v) {
    mass.raw[v] = raw_topic_score(window_histogram(windows[v]), dict);
    mass.rtfav[v] = rtfav_total(windows[v]);
  }
  return mass;
}

RankVector topic_rank(const Digraph& g, std::span<const std::vector<TweetRecord>> windows,
                      const TopicDictionary& dict, const RankOptions& opt) {
  const TopicMass mass = topic_mass(windows, dict);
  return topic_pagerank(g, build_topic_graph(g, mass.raw, mass.rtfav, dict.topic_id), opt);
}

TruthCache build_truth(const ExperimentConfig& cfg, const Dataset& data) {
  TruthCache truth;
  truth.data = &data;
  const int last = data.last_period();
  truth.pr.reserve(static_cast<std::size_t>(last) + 1);
  for (int t = 0; t <= last; ++t) {
    // Consecutive snapshots may share one graph; reuse the rank too.
    if (t > 0 && data.snapshot(t).graph == data.snapshot(t - 1).graph) {
      truth.pr.push_back(truth.pr.back());
      continue;
    }
    truth.pr.push_back(pagerank(data.snapshot(t).g(), cfg.rank));
  }
  if (cfg.topics.enabled) {
    const auto dicts = data.dictionaries();
    truth.wpr.resize(dicts.size());
    truth.rel.resize(dicts.size());
    for (std::size_t j = 0; j < dicts.size(); ++j) {
      truth.wpr[j].reserve(static_cast<std::size_t>(last) + 1);
      truth.rel[j].reserve(static_cast<std::size_t>(last) + 1);
      for (int t = 0; t <= last; ++t) {
        truth.wpr[j].push_back(topic_rank(data.snapshot(t).g(), data.tweets(t), dicts[j],
                                          cfg.rank));
        truth.rel[j].push_back(
            relevant_users(data.tweets(t), dicts[j], cfg.topics.relevance_p));
      }
    }
  }
  return truth;
}

// Mutable per-pipeline selection state (one for the global network, one per
// topic in wg-wg mode).
struct ProbeState {
  InfluencePast rank_past;
  InfluencePast indegree_past;
  std::vector<double> priority;
  RoundRobinRecord rr;
  std::mt19937_64 rng;

  ProbeState(std::size_t n, std::uint64_t seed)
      : rank_past(n), indegree_past(n), priority(n, 0.0), rr(n), rng(seed) {}
};

// Dispatches one period's probe selection.  `last_rank` is the estimated
// ranking of period t-1.  Returns the probe set; for rrch the first
// `*change_arm` entries are the change picks.
std::vector<VertexId> select_probes(const std::string& name, ProbeState& state,
                                    const Digraph& local_graph,
                                    std::span<const double> last_rank, const StrategyConfig& cfg,
                                    std::size_t* change_arm) {
  if (change_arm != nullptr) *change_arm = 0;
  if (name == "noprobe") return {};
  if (name == "random") return select_random(local_graph.vertex_count(), cfg.k, state.rng);
  if (name == "indegree") {
    return select_indegree(local_graph, state.indegree_past, cfg.theta, cfg.k);
  }
  if (name == "priority") return select_priority(state.priority, last_rank, cfg.k);
  if (name == "change") return select_change(change_scores(state.rank_past, cfg.theta), cfg.k);
  if (name == "rrch") {
    if (change_arm != nullptr) *change_arm = rrch_change_arm(cfg.beta, cfg.k);
    return select_rrch(change_scores(state.rank_past, cfg.theta), state.rr, cfg, state.rng);
  }
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

// Network-wide organic edge growth estimated from what this period's probes
// observed.  For each sampled user the signed incident-edge change since the
// user's last refresh (inferred-edge corrections excluded) is normalized per
// period; the sample mean extrapolates over unprobed users.  Each edge is
// incident to two users, hence the /2.
long long observe_organic(const LocalGraph& before, const EdgeDelta& delta,
                          std::span<const VertexId> sample, int t, std::size_t probed_count) {
  if (sample.empty()) return 0;
  std::vector<char> in_sample(before.vertex_count(), 0);
  for (VertexId u : sample) in_sample[u] = 1;
  std::vector<long long> change(before.vertex_count(), 0);
  for (const Edge& e : delta.added) {
    if (in_sample[e.src]) ++change[e.src];
    if (in_sample[e.dst]) ++change[e.dst];
  }
  for (const Edge& e : delta.removed) {
    if (before.is_inferred(e.src, e.dst)) continue;  // retracting our own guess
    if (in_sample[e.src]) --change[e.src];
    if (in_sample[e.dst]) --change[e.dst];
  }
  double mean_rate = 0.0;
  for (VertexId u : sample) {
    const int last = std::max(0, before.last_probed(u));
    const double covered = static_cast<double>(t - last);
    // Winsorize: one account on a follow spree must not extrapolate to the
    // whole network — the random arm is only a handful of users per period,
    // and a single burst would otherwise swamp the mean.
    mean_rate += std::clamp(static_cast<double>(change[u]) / covered, -3.0, 3.0);
  }
  mean_rate /= static_cast<double>(sample.size());
  const double unprobed = static_cast<double>(before.vertex_count() - probed_count);
  return std::llround(mean_rate * unprobed / 2.0);
}

// Uniform random directed non-edges of `g`, the pool the audit compares the
// proposed edges against.  Draws until `fresh` new keys have entered `out`.
void draw_baseline(const Digraph& g, std::size_t fresh, std::mt19937_64& rng,
                   std::unordered_set<std::uint64_t>& out) {
  const std::size_t n = g.vertex_count();
  for (std::size_t i = 0; i < fresh; ++i) {
    for (;;) {
      const auto u = static_cast<VertexId>(detail::uniform_index(rng, n));
      const auto v = static_cast<VertexId>(detail::uniform_index(rng, n));
      if (u == v || g.has_edge(u, v)) continue;
      if (out.insert(edge_key(u, v)).second) break;
    }
  }
}

struct RowInputs {
  std::span<const double> est;
  std::span<const double> truth;
  const Digraph* est_graph = nullptr;
  const Digraph* truth_graph = nullptr;
};

PeriodReport make_row(const CellKey& key, int period, const std::string& topic,
                      std::size_t probed, const RowInputs& in) {
  PeriodReport row;
  row.period = period;
  row.strategy = key.strategy.name;
  row.topic = topic;
  row.theta = key.strategy.theta;
  row.beta = key.strategy.beta;
  row.capacity = key.capacity;
  row.seed = key.seed;
  row.probed = probed;
  row.mse_value = mse(in.est, in.truth);
  row.jaccard10 = jaccard_top_k(in.est, in.truth, 10);
  row.jaccard100 = jaccard_top_k(in.est, in.truth, 100);
  row.jaccard1000 = jaccard_top_k(in.est, in.truth, 1000);
  row.kendall = kendall_tau_b(in.est, in.truth);
  const auto [fp, fn] = edge_error_rates(*in.est_graph, *in.truth_graph);
  row.edge_fp = fp;
  row.edge_fn = fn;
  return row;
}

// Topic rows compare what the system would report against what the truth
// says: jaccard over each side's relevance-filtered top-k; mse/kendall over
// the truth-relevant population (falling back to the full universe when the
// filter leaves nobody).
PeriodReport make_topic_row(const CellKey& key, int period, const std::string& topic,
                            std::size_t probed, const RowInputs& in,
                            std::span<const VertexId> est_relevant,
                            std::span<const VertexId> truth_relevant) {
  PeriodReport row;
  row.period = period;
  row.strategy = key.strategy.name;
  row.topic = topic;
  row.theta = key.strategy.theta;
  row.beta = key.strategy.beta;
  row.capacity = key.capacity;
  row.seed = key.seed;
  row.probed = probed;

  std::span<const VertexId> population = truth_relevant;
  std::vector<VertexId> everyone;
  if (population.empty()) {
    everyone.resize(in.truth.size());
    for (VertexId v = 0; v < everyone.size(); ++v) everyone[v] = v;
    population = everyone;
  }
  std::vector<double> est_sub, truth_sub;
  est_sub.reserve(population.size());
  truth_sub.reserve(population.size());
  for (VertexId v : population) {
    est_sub.push_back(in.est[v]);
    truth_sub.push_back(in.truth[v]);
  }
  row.mse_value = mse(est_sub, truth_sub);
  row.kendall = population.size() < 2 ? 0.0 : kendall_tau_b(in.est, in.truth, population);
  row.jaccard10 = jaccard_sets(top_k_subset(in.est, est_relevant, 10),
                               top_k_subset(in.truth, truth_relevant, 10));
  row.jaccard100 = jaccard_sets(top_k_subset(in.est, est_relevant, 100),
                                top_k_subset(in.truth, truth_relevant, 100));
  row.jaccard1000 = jaccard_sets(top_k_subset(in.est, est_relevant, 1000),
                                 top_k_subset(in.truth, truth_relevant, 1000));
  const auto [fp, fn] = edge_error_rates(*in.est_graph, *in.truth_graph);
  row.edge_fp = fp;
  row.edge_fn = fn;
  return row;
}

// One topic's crawler-side pipeline state.
struct TopicState {
  ProbeState probe;
  LocalTweets tweets;
  LocalGraph graph;  // wg-wg only
  std::vector<double> last_wpr;

  TopicState(std::size_t n, std::uint64_t seed) : probe(n, seed), tweets(n) {}
};

void enforce_no_lookahead(const InfluencePast& past, int t) {
  if (past.length() != static_cast<std::size_t>(t)) {
    throw std::logic_error("influence past out of step with the period loop");
  }
}

CellResult run_cell(const ExperimentConfig& cfg, const Dataset& data, const TruthCache& truth,
                    const CellKey& key, const std::filesystem::path& cell_dir) {
  const std::size_t n = data.vertex_count();
  const int last = data.last_period();
  const bool write_files = !cell_dir.empty();
  const bool wg_wg = cfg.topics.enabled && cfg.topics.mode == TopicMode::wg_wg;
  const auto dicts = data.dictionaries();
  const std::size_t k = capacity_to_k(n, key.capacity);

  StrategyConfig scfg;
  scfg.theta = key.strategy.theta;
  scfg.beta = key.strategy.beta;
  scfg.k = k;

  const std::uint64_t master =
      detail::substream_seed(key.seed ^ key.strategy.seed, fnv1a(key.strategy.name));
  scfg.rng_seed = master;

  CellResult cell;
  cell.key = key;

  // --- global pipeline state (all modes except wg-wg) ---
  ProbeState gstate(n, detail::substream_seed(master, 1));
  std::mt19937_64 infer_rng(detail::substream_seed(master, 2));
  std::unordered_set<std::uint64_t> injected_keys;  // distinct proposed edges
  std::unordered_set<std::uint64_t> baseline_keys;  // distinct random non-edges
  LocalGraph local(data.snapshot(0).g());
  RankVector est = pagerank(local.graph(), cfg.rank);
  gstate.rank_past.append(est.scores);
  gstate.indegree_past.append(indegree_scores(local.graph()));
  GrowthState growth;

  // --- per-topic state ---
  std::vector<TopicState> topics;
  if (cfg.topics.enabled) {
    topics.reserve(dicts.size());
    for (std::size_t j = 0; j < dicts.size(); ++j) {
      TopicState ts(n, detail::substream_seed(master, 0x10 + j));
      for (VertexId u = 0; u < n; ++u) ts.tweets.refresh(u, data.tweets(0)[u]);
      if (wg_wg) ts.graph = LocalGraph(data.snapshot(0).g());
      const Digraph& base = wg_wg ? ts.graph.graph() : local.graph();
      RankVector wpr = topic_rank(base, ts.tweets.windows(), dicts[j], cfg.rank);
      ts.last_wpr = wpr.scores;
      ts.probe.rank_past.append(wpr.scores);
      ts.probe.indegree_past.append(indegree_scores(base));
      topics.push_back(std::move(ts));
    }
  }

  // wg-wg splits the relation budget across topics (remainder to the first).
  std::vector<std::size_t> topic_k(topics.size(), 0);
  if (wg_wg) {
    for (std::size_t j = 0; j < topics.size(); ++j) {
      topic_k[j] = k / topics.size() + (j < k % topics.size() ? 1 : 0);
    }
  }

  for (int t = 1; t <= last; ++t) {
    const Snapshot& now = data.snapshot(t);

    if (!wg_wg) {
      enforce_no_lookahead(gstate.rank_past, t);
      std::size_t change_arm = 0;
      const std::vector<VertexId> probes =
          select_probes(key.strategy.name, gstate, local.graph(), est.scores, scfg, &change_arm);
      auto [next_local, delta] = probe_update(local, now, probes);

      std::vector<std::pair<Edge, double>> inferred;
      if (cfg.inference.enabled) {
        // The random arm is an unbiased churn sample; use it when available.
        std::span<const VertexId> sample = probes;
        if (key.strategy.name == "rrch" && change_arm < probes.size()) {
          sample = std::span<const VertexId>(probes).subspan(change_arm);
        }
        if (!probes.empty()) {
          growth.record(observe_organic(local, delta, sample, t, probes.size()));
        }
        local = std::move(next_local);
        // The overlay of guessed edges is re-derived from scratch every
        // period: last period's guesses are opinions, not observations, and
        // letting them pile up would slowly drown the probed edges in stale
        // speculation.
        local.drop_inferred();
        // A growth average needs a few periods of history before it is worth
        // acting on: each period contributes only a handful of rate samples,
        // and an early fluke would translate into thousands of junk edges.
        const std::size_t budget = growth.observations() >= 4 ? growth.growth_estimate() : 0;
        if (budget > 0) {
          InferenceResult res =
              infer_edges(local, ra_scores(local.graph(), cfg.inference.filter_min_out), budget);
          std::size_t fresh = 0;
          for (const auto& [edge, ra] : res.added) {
            (void)ra;
            if (injected_keys.insert(edge_key(edge.src, edge.dst)).second) ++fresh;
          }
          draw_baseline(local.graph(), fresh, infer_rng, baseline_keys);
          inferred = std::move(res.added);
          local = std::move(res.graph);
        }
      } else {
        local = std::move(next_local);
      }

      est = pagerank(local.graph(), cfg.rank);
      gstate.rank_past.append(est.scores);
      gstate.indegree_past.append(indegree_scores(local.graph()));

      RowInputs in;
      in.est = est.scores;
      in.truth = truth.pr[static_cast<std::size_t>(t)].scores;
      in.est_graph = &local.graph();
      in.truth_graph = &now.g();
      cell.rows.push_back(make_row(key, t, "", probes.size(), in));

      if (write_files) {
        if (cfg.write_ranks) {
          write_rank_csv(est, cell_dir / ("ranks_" + key.strategy.name + "_" +
                                          std::to_string(t) + ".csv"));
        }
        if (!inferred.empty()) {
          write_inferred_tsv(inferred, cell_dir / ("inferred_" + std::to_string(t) + ".tsv"));
        }
      }
    }

    for (std::size_t j = 0; j < topics.size(); ++j) {
      TopicState& ts = topics[j];
      enforce_no_lookahead(ts.probe.rank_past, t);

      std::vector<VertexId> tweet_probes;
      const Digraph* base = nullptr;
      if (wg_wg) {
        // The topic network drives both relation and tweet probing with its
        // own budget slice.
        StrategyConfig tcfg = scfg;
        tcfg.k = topic_k[j];
        if (tcfg.k > 0) {
          tweet_probes = select_probes(key.strategy.name, ts.probe, ts.graph.graph(),
                                       ts.last_wpr, tcfg, nullptr);
        }
        auto [next_graph, delta] = probe_update(ts.graph, now, tweet_probes);
        (void)delta;
        ts.graph = std::move(next_graph);
        base = &ts.graph.graph();
      } else {
        // g-wg: tweet probes ride the topic scores; the relation network is
        // the globally maintained one.
        if (key.strategy.name != "noprobe") {
          tweet_probes = select_rrch(change_scores(ts.probe.rank_past, scfg.theta), ts.probe.rr,
                                     scfg, ts.probe.rng);
        }
        base = &local.graph();
      }
      for (VertexId u : tweet_probes) ts.tweets.refresh(u, data.tweets(t)[u]);

      RankVector wpr = topic_rank(*base, ts.tweets.windows(), dicts[j], cfg.rank);
      ts.last_wpr = wpr.scores;
      ts.probe.rank_past.append(wpr.scores);
      ts.probe.indegree_past.append(indegree_scores(*base));

      const std::vector<VertexId> est_rel =
          relevant_users(ts.tweets.windows(), dicts[j], cfg.topics.relevance_p);
      RowInputs in;
      in.est = wpr.scores;
      in.truth = truth.wpr[j][static_cast<std::size_t>(t)].scores;
      in.est_graph = base;
      in.truth_graph = &now.g();
      cell.rows.push_back(make_topic_row(key, t, dicts[j].topic_id, tweet_probes.size(), in,
                                         est_rel, truth.rel[j][static_cast<std::size_t>(t)]));
      if (write_files && cfg.write_ranks) {
        write_rank_csv(wpr, cell_dir / ("ranks_" + key.strategy.name + "_" + dicts[j].topic_id +
                                        "_" + std::to_string(t) + ".csv"));
      }
    }
  }

  // Resolve the audit: a proposed edge counts as realized if it occurred in
  // any ground-truth snapshot of the run, which is how link prediction on an
  // evolving network has to be judged — a guess made at period 2 that comes
  // true at period 7 was a good guess.
  cell.audit.injected_total = injected_keys.size();
  cell.audit.baseline_total = baseline_keys.size();
  const auto count_realized = [&](std::unordered_set<std::uint64_t>& keys) {
    std::size_t hits = 0;
    for (int t = 1; t <= last && !keys.empty(); ++t) {
      const Digraph& tg = data.snapshot(t).g();
      for (auto it = keys.begin(); it != keys.end();) {
        if (tg.has_edge(static_cast<VertexId>(*it >> 32),
                        static_cast<VertexId>(*it & 0xffffffffu))) {
          ++hits;
          it = keys.erase(it);
        } else {
          ++it;
        }
      }
    }
    return hits;
  };
  cell.audit.injected_real = count_realized(injected_keys);
  cell.audit.baseline_real = count_realized(baseline_keys);
  return cell;
}

std::string cell_dir_name(const CellKey& key) {
  return key.strategy.name + "_t" + short_double(key.strategy.theta) + "_b" +
         short_double(key.strategy.beta) + "_c" + short_double(key.capacity) + "_s" +
         std::to_string(key.seed);
}

void write_summary(const ExperimentConfig& cfg, const RunResult& result,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << "strategy,topic,theta,beta,capacity,seed,periods,probed_total,"
         "mse_mean,mse_std,jaccard10_mean,jaccard100_mean,jaccard1000_mean,"
         "kendall_mean,edge_fp_mean,edge_fn_mean,inferred_precision,baseline_precision\n";
  for (const CellResult& cell : result.cells) {
    // Group the cell's rows by topic label, preserving first-seen order.
    std::vector<std::string> groups;
    for (const PeriodReport& row : cell.rows) {
      if (std::find(groups.begin(), groups.end(), row.topic) == groups.end()) {
        groups.push_back(row.topic);
      }
    }
    for (const std::string& topic : groups) {
      std::vector<const PeriodReport*> rows;
      for (const PeriodReport& row : cell.rows) {
        if (row.topic == topic) rows.push_back(&row);
      }
      const auto mean_of = [&rows](double PeriodReport::* field) {
        double acc = 0.0;
        for (const PeriodReport* r : rows) acc += r->*field;
        return acc / static_cast<double>(rows.size());
      };
      const auto std_of = [&rows](double PeriodReport::* field, double mean) {
        double acc = 0.0;
        for (const PeriodReport* r : rows) acc += (r->*field - mean) * (r->*field - mean);
        return std::sqrt(acc / static_cast<double>(rows.size()));
      };
      std::size_t probed_total = 0;
      for (const PeriodReport* r : rows) probed_total += r->probed;
      const double mse_mean = mean_of(&PeriodReport::mse_value);
      out << cell.key.strategy.name << ',' << topic << ','
          << format_double(cell.key.strategy.theta) << ','
          << format_double(cell.key.strategy.beta) << ',' << format_double(cell.key.capacity)
          << ',' << cell.key.seed << ',' << rows.size() << ',' << probed_total << ','
          << format_double(mse_mean) << ','
          << format_double(std_of(&PeriodReport::mse_value, mse_mean)) << ','
          << format_double(mean_of(&PeriodReport::jaccard10)) << ','
          << format_double(mean_of(&PeriodReport::jaccard100)) << ','
          << format_double(mean_of(&PeriodReport::jaccard1000)) << ','
          << format_double(mean_of(&PeriodReport::kendall)) << ','
          << format_double(mean_of(&PeriodReport::edge_fp)) << ','
          << format_double(mean_of(&PeriodReport::edge_fn)) << ','
          << format_double(cell.audit.precision()) << ','
          << format_double(cell.audit.baseline_precision()) << '\n';
    }
  }
}

}  // namespace

const Snapshot& Dataset::snapshot(int t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= snapshots_.size()) {
    throw std::invalid_argument("Dataset: no snapshot for period " + std::to_string(t));
  }
  return snapshots_[static_cast<std::size_t>(t)];
}

std::span<const std::vector<TweetRecord>> Dataset::tweets(int t) const {
  if (t < 0 || static_cast<std::size_t>(t) >= tweets_.size()) {
    throw std::invalid_argument("Dataset: no tweets for period " + std::to_string(t));
  }
  return tweets_[static_cast<std::size_t>(t)];
}

Dataset Dataset::generate(const GenConfig& cfg) {
  cfg.validate();
  Dataset data;
  data.n_ = cfg.n;
  data.dictionaries_ = gen_dictionaries(cfg);
  data.snapshots_.reserve(static_cast<std::size_t>(cfg.periods) + 1);
  data.tweets_.reserve(static_cast<std::size_t>(cfg.periods) + 1);
  Snapshot snapshot = gen_initial(cfg);
  for (int t = 0; t <= cfg.periods; ++t) {
    if (t > 0) snapshot = evolve(snapshot, cfg, t);
    data.snapshots_.push_back(snapshot);
    data.tweets_.push_back(gen_tweets(snapshot, cfg));
  }
  return data;
}

Dataset Dataset::load(const std::filesystem::path& dir) {
  const DatasetManifest manifest = read_manifest(dir / "manifest.json");
  Dataset data;
  data.n_ = manifest.n;
  for (int t = 0; t <= manifest.periods; ++t) {
    const std::filesystem::path snap = dir / ("snapshot_" + std::to_string(t) + ".tsv");
    data.snapshots_.push_back(
        Snapshot{t, std::make_shared<const Digraph>(read_snapshot_tsv(snap, manifest.n))});
    const std::filesystem::path tweets = dir / ("tweets_" + std::to_string(t) + ".tsv");
    if (std::filesystem::exists(tweets)) {
      data.tweets_.push_back(read_tweets_tsv(tweets, manifest.n));
    } else {
      data.tweets_.push_back(std::vector<std::vector<TweetRecord>>(manifest.n));
    }
  }
  const std::filesystem::path dicts = dir / "dictionaries.tsv";
  if (std::filesystem::exists(dicts)) data.dictionaries_ = read_dictionaries_tsv(dicts);
  return data;
}

void ExperimentConfig::validate(std::size_t universe) const {
  if (strategies.empty()) throw std::invalid_argument("config: no strategies");
  for (const StrategySpec& s : strategies) {
    if (!known_strategy(s.name)) {
      throw std::invalid_argument("config: unknown strategy '" + s.name + "'");
    }
    if (!(s.theta >= 0.0) || !(s.theta <= 1.0) || !(s.beta >= 0.0) || !(s.beta <= 1.0)) {
      throw std::invalid_argument("config: theta/beta must lie in [0, 1]");
    }
  }
  if (capacities.empty()) throw std::invalid_argument("config: no capacities");
  for (double c : capacities) {
    if (!(c > 0.0) || !(c <= 1.0)) {
      throw std::invalid_argument("config: capacities must lie in (0, 1]");
    }
  }
  if (seeds.empty()) throw std::invalid_argument("config: no seeds");
  if (topics.enabled && inference.enabled && topics.mode == TopicMode::wg_wg) {
    throw std::invalid_argument("config: edge inference is not supported in wg-wg mode");
  }

  // Budget pass: the largest capacity must be probe-able within one period.
  std::size_t k_max = 0;
  for (double c : capacities) k_max = std::max(k_max, capacity_to_k(universe, c));
  const BudgetCheck relations = check_probe_budget(rates, period_days, ProbeKind::relations,
                                                   static_cast<long long>(k_max));
  if (!relations.feasible) {
    throw std::invalid_argument(
        "config: relation budget infeasible: need " + std::to_string(relations.requested) +
        " users/period but the rate limit allows " + std::to_string(relations.capacity) +
        " (short by " + std::to_string(relations.shortfall) + ")");
  }
  if (topics.enabled) {
    const long long tweet_users = static_cast<long long>(k_max);
    const BudgetCheck tweets =
        check_probe_budget(rates, period_days, ProbeKind::tweets, tweet_users);
    if (!tweets.feasible) {
      throw std::invalid_argument(
          "config: tweet budget infeasible: need " + std::to_string(tweets.requested) +
          " users/period but the rate limit allows " + std::to_string(tweets.capacity) +
          " (short by " + std::to_string(tweets.shortfall) + ")");
    }
  }
}

double InferenceAudit::precision() const {
  if (injected_total == 0) return 0.0;
  return static_cast<double>(injected_real) / static_cast<double>(injected_total);
}

double InferenceAudit::baseline_precision() const {
  if (baseline_total == 0) return 0.0;
  return static_cast<double>(baseline_real) / static_cast<double>(baseline_total);
}

RunResult run_experiment(const ExperimentConfig& cfg, const Dataset& data) {
  cfg.validate(data.vertex_count());
  if (data.last_period() < 1) {
    throw std::invalid_argument("run_experiment: need at least periods 0 and 1");
  }
  if (cfg.topics.enabled && data.dictionaries().empty()) {
    throw std::invalid_argument("run_experiment: topics enabled but no dictionaries in dataset");
  }

  const TruthCache truth = build_truth(cfg, data);

  std::vector<CellKey> keys;
  for (const StrategySpec& strategy : cfg.strategies) {
    for (double capacity : cfg.capacities) {
      for (std::uint64_t seed : cfg.seeds) {
        keys.push_back(CellKey{strategy, capacity, seed});
      }
    }
  }

  std::vector<std::filesystem::path> cell_dirs(keys.size());
  const bool writing = !cfg.output_dir.empty();
  if (writing) {
    std::filesystem::create_directories(cfg.output_dir);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      cell_dirs[i] = cfg.output_dir / cell_dir_name(keys[i]);
      std::filesystem::create_directories(cell_dirs[i]);
    }
  }

  RunResult result;
  result.cells.resize(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::atomic<std::size_t> next{0};
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<std::size_t>(keys.size(), cfg.threads == 0 ? hw : cfg.threads);

  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      try {
        result.cells[i] = run_cell(cfg, data, truth, keys[i], cell_dirs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  for (const CellResult& cell : result.cells) {
    result.rows.insert(result.rows.end(), cell.rows.begin(), cell.rows.end());
  }

  if (writing) {
    write_report_csv(result.rows, cfg.rank.alpha, cfg.output_dir / "report.csv");
    write_summary(cfg, result, cfg.output_dir / "summary.csv");
  }
  return result;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const Dataset data =
      cfg.data.generate ? Dataset::generate(cfg.data.gen) : Dataset::load(cfg.data.dir);
  return run_experiment(cfg, data);
}

RunResult sweep(const ExperimentConfig& cfg, const SweepGrid& grid) {
  ExperimentConfig expanded = cfg;
  expanded.strategies.clear();
  for (const StrategySpec& base : cfg.strategies) {
    const std::vector<double> thetas = grid.thetas.empty() ? std::vector<double>{base.theta}
                                                           : grid.thetas;
    const std::vector<double> betas = grid.betas.empty() ? std::vector<double>{base.beta}
                                                         : grid.betas;
    for (double theta : thetas) {
      for (double beta : betas) {
        StrategySpec s = base;
        s.theta = theta;
        s.beta = beta;
        expanded.strategies.push_back(s);
      }
    }
  }
  if (!grid.capacities.empty()) expanded.capacities = grid.capacities;
  if (!grid.seeds.empty()) expanded.seeds = grid.seeds;
  return run_experiment(expanded);
}

double mean_metric(const CellResult& cell, double PeriodReport::* field) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const PeriodReport& row : cell.rows) {
    if (!row.topic.empty()) continue;
    acc += row.*field;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("mean_metric: cell has no global rows");
  return acc / static_cast<double>(count);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }

  const auto fail = [&path](const std::string& what) -> std::runtime_error {
    return std::runtime_error(path.string() + ": " + what);
  };
  const auto check_keys = [&fail](const nlohmann::json& obj, const char* where,
                                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      (void)value;
      if (std::find_if(allowed.begin(), allowed.end(),
                       [&key](const char* a) { return key == a; }) == allowed.end()) {
        throw fail(std::string("unknown key '") + key + "' in " + where);
      }
    }
  };

  ExperimentConfig cfg;
  try {
    check_keys(j, "config",
               {"data", "strategies", "capacities", "seeds", "alpha", "epsilon", "max_iter",
                "inference", "topics", "rates", "period_days", "output_dir", "write_ranks",
                "threads"});

    if (!j.contains("data")) throw fail("missing 'data'");
    const nlohmann::json& data = j.at("data");
    check_keys(data, "data", {"generate", "dir"});
    if (data.contains("generate") == data.contains("dir")) {
      throw fail("'data' needs exactly one of 'generate' or 'dir'");
    }
    if (data.contains("dir")) {
      cfg.data.generate = false;
      cfg.data.dir = data.at("dir").get<std::string>();
    } else {
      cfg.data.generate = true;
      const nlohmann::json& gen = data.at("generate");
      check_keys(gen, "data.generate",
                 {"n", "m0", "periods", "churn_add_frac", "churn_del_frac", "closure_frac",
                  "lurker_frac", "indeg_cap_frac", "hot_frac", "hot_boost", "topic_count",
                  "keywords_per_topic", "silent_frac", "tweets_mean", "tweets_cap",
                  "dominant_topic_share", "seed"});
      GenConfig& g = cfg.data.gen;
      g.n = gen.value("n", g.n);
      g.m0 = gen.value("m0", g.m0);
      g.periods = gen.value("periods", g.periods);
      g.churn_add_frac = gen.value("churn_add_frac", g.churn_add_frac);
      g.churn_del_frac = gen.value("churn_del_frac", g.churn_del_frac);
      g.closure_frac = gen.value("closure_frac", g.closure_frac);
      g.lurker_frac = gen.value("lurker_frac", g.lurker_frac);
      g.indeg_cap_frac = gen.value("indeg_cap_frac", g.indeg_cap_frac);
      g.hot_frac = gen.value("hot_frac", g.hot_frac);
      g.hot_boost = gen.value("hot_boost", g.hot_boost);
      g.topic_count = gen.value("topic_count", g.topic_count);
      g.keywords_per_topic = gen.value("keywords_per_topic", g.keywords_per_topic);
      g.silent_frac = gen.value("silent_frac", g.silent_frac);
      g.tweets_mean = gen.value("tweets_mean", g.tweets_mean);
      g.tweets_cap = gen.value("tweets_cap", g.tweets_cap);
      g.dominant_topic_share = gen.value("dominant_topic_share", g.dominant_topic_share);
      g.seed = gen.value("seed", g.seed);
    }

    if (j.contains("strategies")) {
      cfg.strategies.clear();
      for (const nlohmann::json& s : j.at("strategies")) {
        check_keys(s, "strategies[]", {"name", "theta", "beta", "seed"});
        StrategySpec spec;
        spec.name = s.at("name").get<std::string>();
        spec.theta = s.value("theta", spec.theta);
        spec.beta = s.value("beta", spec.beta);
        spec.seed = s.value("seed", spec.seed);
        cfg.strategies.push_back(spec);
      }
    }
    if (j.contains("capacities")) cfg.capacities = j.at("capacities").get<std::vector<double>>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.rank.alpha = j.value("alpha", cfg.rank.alpha);
    cfg.rank.epsilon = j.value("epsilon", cfg.rank.epsilon);
    cfg.rank.max_iter = j.value("max_iter", cfg.rank.max_iter);

    if (j.contains("inference")) {
      const nlohmann::json& inf = j.at("inference");
      check_keys(inf, "inference", {"enabled", "filter_min_out"});
      cfg.inference.enabled = inf.value("enabled", cfg.inference.enabled);
      cfg.inference.filter_min_out = inf.value("filter_min_out", cfg.inference.filter_min_out);
    }
    if (j.contains("topics")) {
      const nlohmann::json& top = j.at("topics");
      check_keys(top, "topics", {"enabled", "mode", "relevance_p"});
      cfg.topics.enabled = top.value("enabled", cfg.topics.enabled);
      if (top.contains("mode")) {
        const std::string mode = top.at("mode").get<std::string>();
        if (mode == "g-wg") {
          cfg.topics.mode = TopicMode::g_wg;
        } else if (mode == "wg-wg") {
          cfg.topics.mode = TopicMode::wg_wg;
        } else {
          throw fail("topics.mode must be 'g-wg' or 'wg-wg', got '" + mode + "'");
        }
      }
      cfg.topics.relevance_p = top.value("relevance_p", cfg.topics.relevance_p);
    }
    if (j.contains("rates")) {
      const nlohmann::json& rates = j.at("rates");
      check_keys(rates, "rates",
                 {"rel_calls_per_window", "tweet_calls_per_window", "window_minutes",
                  "followers_per_call", "tweets_per_call"});
      cfg.rates.rel_calls_per_window =
          rates.value("rel_calls_per_window", cfg.rates.rel_calls_per_window);
      cfg.rates.tweet_calls_per_window =
          rates.value("tweet_calls_per_window", cfg.rates.tweet_calls_per_window);
      cfg.rates.window_minutes = rates.value("window_minutes", cfg.rates.window_minutes);
      cfg.rates.followers_per_call = rates.value("followers_per_call", cfg.rates.followers_per_call);
      cfg.rates.tweets_per_call = rates.value("tweets_per_call", cfg.rates.tweets_per_call);
    }
    cfg.period_days = j.value("period_days", cfg.period_days);
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.write_ranks = j.value("write_ranks", cfg.write_ranks);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

}  // namespace probekit
