#pragma once

// Experiment orchestration: wires the data source into the per-period loop
// (select -> probe -> infer -> rank -> evaluate) for every configured
// (strategy, capacity, seed) cell, optionally layering the topic pipeline on
// top, and writes the report/summary/rank/inferred-edge files.
//
// Determinism contract: every output byte is a pure function of the config
// (including seeds).  Cells never share mutable state; ground truth and
// truth-side rankings are computed once and shared read-only, so cells may
// run on parallel threads without changing results.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "probekit/budget.hpp"
#include "probekit/generator.hpp"
#include "probekit/graph.hpp"
#include "probekit/inference.hpp"
#include "probekit/metrics.hpp"
#include "probekit/rank.hpp"
#include "probekit/topics.hpp"

namespace probekit {

// Ground truth for one experiment, fully materialized: snapshots 0..periods,
// per-period tweet windows, and topic dictionaries.  Read-only after build.
class Dataset {
 public:
  static Dataset generate(const GenConfig& cfg);

  // Loads manifest.json, snapshot_<t>.tsv, tweets_<t>.tsv (if present) and
  // dictionaries.tsv (if present) from `dir`.
  static Dataset load(const std::filesystem::path& dir);

  std::size_t vertex_count() const noexcept { return n_; }
  int last_period() const noexcept { return static_cast<int>(snapshots_.size()) - 1; }
  const Snapshot& snapshot(int t) const;
  bool has_tweets() const noexcept { return !tweets_.empty(); }
  std::span<const std::vector<TweetRecord>> tweets(int t) const;
  std::span<const TopicDictionary> dictionaries() const noexcept { return dictionaries_; }

 private:
  std::size_t n_ = 0;
  std::vector<Snapshot> snapshots_;
  std::vector<std::vector<std::vector<TweetRecord>>> tweets_;  // [t][author]
  std::vector<TopicDictionary> dictionaries_;
};

struct StrategySpec {
  std::string name = "rrch";  // noprobe | random | indegree | priority | change | rrch
  double theta = 0.5;
  double beta = 0.8;
  std::uint64_t seed = 0;  // extra per-strategy decorrelation, 0 = none
};

struct InferenceConfig {
  bool enabled = false;
  std::size_t filter_min_out = 5;
};

enum class TopicMode {
  g_wg,   // global network maintenance drives topic ranking; tweet probes per topic
  wg_wg,  // per-topic networks drive both relation and tweet probing
};

struct TopicsConfig {
  bool enabled = false;
  TopicMode mode = TopicMode::g_wg;
  double relevance_p = 0.4;  // minimum related-tweet share for the filter
};

struct DataConfig {
  bool generate = true;
  GenConfig gen;               // used when generate
  std::filesystem::path dir;   // used when !generate
};

struct ExperimentConfig {
  DataConfig data;
  std::vector<StrategySpec> strategies = {StrategySpec{}};
  std::vector<double> capacities = {0.01};
  std::vector<std::uint64_t> seeds = {1};
  RankOptions rank;
  InferenceConfig inference;
  TopicsConfig topics;
  RateModel rates;
  double period_days = 15.0;
  std::filesystem::path output_dir;  // empty: keep results in memory only
  bool write_ranks = false;
  unsigned threads = 0;  // parallel cells; 0 = hardware concurrency

  // Structural checks plus the budget feasibility pass (largest configured
  // capacity must fit the rate model).  Throws std::invalid_argument.
  void validate(std::size_t universe) const;
};

// Reads the JSON config documented in the README.  Unknown keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path);

// Audit trail of the link-prediction half: how often the distinct edges it
// proposed really occurred in the network — appeared in some ground-truth
// snapshot of the run — versus a same-size set of uniform random non-edges
// drawn at the same moments.
struct InferenceAudit {
  std::size_t injected_total = 0;  // distinct directed edges ever proposed
  std::size_t injected_real = 0;   // ... of which occurred in some snapshot
  std::size_t baseline_total = 0;  // distinct random non-edges drawn
  std::size_t baseline_real = 0;   // ... of which occurred in some snapshot

  double precision() const;
  double baseline_precision() const;
};

struct CellKey {
  StrategySpec strategy;
  double capacity = 0.0;
  std::uint64_t seed = 0;
};

struct CellResult {
  CellKey key;
  std::vector<PeriodReport> rows;  // global rows, then per-topic rows, by period
  InferenceAudit audit;
};

struct RunResult {
  std::vector<CellResult> cells;   // config order: strategy-major, then capacity, then seed
  std::vector<PeriodReport> rows;  // all cells flattened in cell order
};

// Runs all cells against `data`.  Writes report.csv / summary.csv / per-cell
// artifacts into cfg.output_dir when set.
RunResult run_experiment(const ExperimentConfig& cfg, const Dataset& data);

// Convenience: materializes the data source from cfg, then runs.
RunResult run_experiment(const ExperimentConfig& cfg);

// Parameter sweep: expands the cross product grid x cfg.strategies (empty
// grid axes keep the per-strategy values) and runs the result.
struct SweepGrid {
  std::vector<double> thetas;
  std::vector<double> betas;
  std::vector<double> capacities;
  std::vector<std::uint64_t> seeds;
};

RunResult sweep(const ExperimentConfig& cfg, const SweepGrid& grid);

// Mean of one metric over a cell's global (topic-free) rows.
double mean_metric(const CellResult& cell, double PeriodReport::* field);

}  // namespace probekit
