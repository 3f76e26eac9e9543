#pragma once

// Dataset and result file I/O.  All writers emit bytes that are a pure
// function of their inputs (sorted rows, fixed column order, shortest
// round-trippable float formatting), so repeated runs diff clean.
//
// Dataset directory layout:
//   manifest.json        {"n", "periods", "topic_count", "seed"}
//   snapshot_<t>.tsv     one "src<TAB>dst" edge per line
//   vertices_<t>.txt     one vertex id per line (declares isolated vertices)
//   tweets_<t>.tsv       "period<TAB>author<TAB>rt<TAB>fav<TAB>text"
//   dictionaries.tsv     "topic_id<TAB>keyword<TAB>weight"
//
// Read errors always name the offending file (and line where applicable).

#include <filesystem>
#include <string>
#include <vector>

#include "probekit/generator.hpp"
#include "probekit/graph.hpp"
#include "probekit/metrics.hpp"
#include "probekit/rank.hpp"
#include "probekit/topics.hpp"

namespace probekit {

// Round-trippable decimal rendering (17 significant digits).
std::string format_double(double value);

struct DatasetManifest {
  std::size_t n = 0;
  int periods = 0;
  std::size_t topic_count = 0;
  std::uint64_t seed = 0;
};

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

void write_snapshot_tsv(const Digraph& g, const std::filesystem::path& path);
Digraph read_snapshot_tsv(const std::filesystem::path& path, std::size_t universe);

void write_vertices_txt(std::size_t universe, const std::filesystem::path& path);

void write_tweets_tsv(std::span<const std::vector<TweetRecord>> by_user,
                      const std::filesystem::path& path);
std::vector<std::vector<TweetRecord>> read_tweets_tsv(const std::filesystem::path& path,
                                                      std::size_t universe);

void write_dictionaries_tsv(std::span<const TopicDictionary> dictionaries,
                            const std::filesystem::path& path);
std::vector<TopicDictionary> read_dictionaries_tsv(const std::filesystem::path& path);

// "vertex_id,score" per line, ascending id.
void write_rank_csv(const RankVector& ranks, const std::filesystem::path& path);

// One row per PeriodReport, fixed column order; `alpha` lands in the header
// comment since the paper-side damping choice must be visible in outputs.
void write_report_csv(std::span<const PeriodReport> rows, double alpha,
                      const std::filesystem::path& path);

void write_inferred_tsv(std::span<const std::pair<Edge, double>> edges,
                        const std::filesystem::path& path);

struct ReportFile {
  double alpha = 0.0;
  std::vector<PeriodReport> rows;
};

// Inverse of write_report_csv; validates header and column count.
ReportFile read_report_csv(const std::filesystem::path& path);

// Full dataset emission for `gen`: manifest, every snapshot, every tweet
// file, and the dictionaries.
void write_dataset(const GenConfig& cfg, const std::filesystem::path& dir);

}  // namespace probekit
