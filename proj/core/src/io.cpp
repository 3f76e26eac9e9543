#include "probekit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace probekit {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

long long parse_int(const std::string& field, const std::filesystem::path& path,
                    std::size_t line) {
  try {
    std::size_t pos = 0;
    const long long value = std::stoll(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    fail_line(path, line, "expected an integer, got '" + field + "'");
  }
}

double parse_real(const std::string& field, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    fail_line(path, line, "expected a number, got '" + field + "'");
  }
}

std::vector<std::string> split_tabs(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (fields.size() + 1 < max_fields) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) break;
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  fields.push_back(line.substr(start));
  return fields;
}

}  // namespace

std::string format_double(double value) {
  // Shortest decimal form that parses back to the same bits, so files stay
  // byte-deterministic without "0.84999999999999998"-style noise.
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw std::logic_error("format_double: conversion failed");
  return std::string(buffer, end);
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["n"] = manifest.n;
  j["periods"] = manifest.periods;
  j["topic_count"] = manifest.topic_count;
  j["seed"] = manifest.seed;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
  DatasetManifest manifest;
  try {
    manifest.n = j.at("n").get<std::size_t>();
    manifest.periods = j.at("periods").get<int>();
    manifest.topic_count = j.value("topic_count", std::size_t{0});
    manifest.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(path, std::string("bad manifest field: ") + e.what());
  }
  if (manifest.n < 1 || manifest.periods < 0) fail(path, "manifest out of range");
  return manifest;
}

void write_snapshot_tsv(const Digraph& g, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v : g.out_neighbors(u)) {
      out << u << '\t' << v << '\n';
    }
  }
}

Digraph read_snapshot_tsv(const std::filesystem::path& path, std::size_t universe) {
  std::ifstream in = open_in(path);
  Digraph g(universe);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line, 2);
    if (fields.size() != 2) fail_line(path, lineno, "expected 'src<TAB>dst'");
    const long long src = parse_int(fields[0], path, lineno);
    const long long dst = parse_int(fields[1], path, lineno);
    if (src < 0 || dst < 0 || static_cast<std::size_t>(src) >= universe ||
        static_cast<std::size_t>(dst) >= universe) {
      fail_line(path, lineno, "vertex id outside universe [0, " + std::to_string(universe) + ")");
    }
    try {
      if (!g.add_edge(static_cast<VertexId>(src), static_cast<VertexId>(dst))) {
        fail_line(path, lineno, "duplicate edge");
      }
    } catch (const std::invalid_argument& e) {
      fail_line(path, lineno, e.what());
    }
  }
  return g;
}

void write_vertices_txt(std::size_t universe, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (std::size_t v = 0; v < universe; ++v) out << v << '\n';
}

void write_tweets_tsv(std::span<const std::vector<TweetRecord>> by_user,
                      const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const std::vector<TweetRecord>& window : by_user) {
    for (const TweetRecord& t : window) {
      out << t.period << '\t' << t.author << '\t' << t.retweets << '\t' << t.favorites << '\t'
          << t.text << '\n';
    }
  }
}

std::vector<std::vector<TweetRecord>> read_tweets_tsv(const std::filesystem::path& path,
                                                      std::size_t universe) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<TweetRecord>> by_user(universe);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line, 5);
    if (fields.size() != 5) {
      fail_line(path, lineno, "expected 'period<TAB>author<TAB>rt<TAB>fav<TAB>text'");
    }
    TweetRecord t;
    t.period = static_cast<int>(parse_int(fields[0], path, lineno));
    const long long author = parse_int(fields[1], path, lineno);
    if (author < 0 || static_cast<std::size_t>(author) >= universe) {
      fail_line(path, lineno, "author id outside universe");
    }
    t.author = static_cast<VertexId>(author);
    t.retweets = parse_int(fields[2], path, lineno);
    t.favorites = parse_int(fields[3], path, lineno);
    if (t.retweets < 0 || t.favorites < 0) fail_line(path, lineno, "negative rt/fav count");
    t.text = fields[4];
    by_user[t.author].push_back(std::move(t));
  }
  return by_user;
}

void write_dictionaries_tsv(std::span<const TopicDictionary> dictionaries,
                            const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const TopicDictionary& dict : dictionaries) {
    for (const auto& [keyword, weight] : dict.weights) {
      out << dict.topic_id << '\t' << keyword << '\t' << format_double(weight) << '\n';
    }
  }
}

std::vector<TopicDictionary> read_dictionaries_tsv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<TopicDictionary> dictionaries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line, 3);
    if (fields.size() != 3) fail_line(path, lineno, "expected 'topic_id<TAB>keyword<TAB>weight'");
    const double weight = parse_real(fields[2], path, lineno);
    if (!(weight > 0.0) || !(weight <= 1.0)) {
      fail_line(path, lineno, "keyword weight must lie in (0, 1]");
    }
    if (dictionaries.empty() || dictionaries.back().topic_id != fields[0]) {
      for (const TopicDictionary& d : dictionaries) {
        if (d.topic_id == fields[0]) {
          fail_line(path, lineno, "topic '" + fields[0] + "' listed non-contiguously");
        }
      }
      dictionaries.push_back(TopicDictionary{fields[0], {}});
    }
    if (!dictionaries.back().weights.emplace(fields[1], weight).second) {
      fail_line(path, lineno, "duplicate keyword '" + fields[1] + "'");
    }
  }
  for (const TopicDictionary& d : dictionaries) d.validate();
  return dictionaries;
}

void write_rank_csv(const RankVector& ranks, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "vertex_id,score\n";
  for (std::size_t v = 0; v < ranks.scores.size(); ++v) {
    out << v << ',' << format_double(ranks.scores[v]) << '\n';
  }
}

void write_report_csv(std::span<const PeriodReport> rows, double alpha,
                      const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "# alpha=" << format_double(alpha) << '\n';
  out << "period,strategy,topic,theta,beta,capacity,seed,probed,mse,jaccard10,jaccard100,"
         "jaccard1000,kendall,edge_fp,edge_fn\n";
  for (const PeriodReport& r : rows) {
    out << r.period << ',' << r.strategy << ',' << r.topic << ',' << format_double(r.theta) << ','
        << format_double(r.beta) << ',' << format_double(r.capacity) << ',' << r.seed << ','
        << r.probed << ',' << format_double(r.mse_value) << ',' << format_double(r.jaccard10)
        << ',' << format_double(r.jaccard100) << ',' << format_double(r.jaccard1000) << ','
        << format_double(r.kendall) << ',' << format_double(r.edge_fp) << ','
        << format_double(r.edge_fn) << '\n';
  }
}

ReportFile read_report_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  ReportFile report;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail(path, "empty file");
  if (line.rfind("# alpha=", 0) != 0) fail_line(path, 1, "missing '# alpha=' header");
  report.alpha = parse_real(line.substr(8), path, 1);
  ++line_no;
  const std::string header =
      "period,strategy,topic,theta,beta,capacity,seed,probed,mse,jaccard10,jaccard100,"
      "jaccard1000,kendall,edge_fp,edge_fn";
  if (!std::getline(in, line) || line != header) fail_line(path, 2, "unexpected column header");
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 15) {
      fail_line(path, line_no, "expected 15 columns, got " + std::to_string(fields.size()));
    }
    PeriodReport r;
    r.period = static_cast<int>(parse_int(fields[0], path, line_no));
    r.strategy = fields[1];
    r.topic = fields[2];
    r.theta = parse_real(fields[3], path, line_no);
    r.beta = parse_real(fields[4], path, line_no);
    r.capacity = parse_real(fields[5], path, line_no);
    r.seed = static_cast<std::uint64_t>(parse_int(fields[6], path, line_no));
    r.probed = static_cast<std::size_t>(parse_int(fields[7], path, line_no));
    r.mse_value = parse_real(fields[8], path, line_no);
    r.jaccard10 = parse_real(fields[9], path, line_no);
    r.jaccard100 = parse_real(fields[10], path, line_no);
    r.jaccard1000 = parse_real(fields[11], path, line_no);
    r.kendall = parse_real(fields[12], path, line_no);
    r.edge_fp = parse_real(fields[13], path, line_no);
    r.edge_fn = parse_real(fields[14], path, line_no);
    report.rows.push_back(std::move(r));
  }
  return report;
}

void write_inferred_tsv(std::span<const std::pair<Edge, double>> edges,
                        const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const auto& [edge, ra] : edges) {
    out << edge.src << '\t' << edge.dst << '\t' << format_double(ra) << '\n';
  }
}

void write_dataset(const GenConfig& cfg, const std::filesystem::path& dir) {
  cfg.validate();
  std::filesystem::create_directories(dir);
  write_manifest(DatasetManifest{cfg.n, cfg.periods, cfg.topic_count, cfg.seed},
                 dir / "manifest.json");
  write_dictionaries_tsv(gen_dictionaries(cfg), dir / "dictionaries.tsv");
  Snapshot snapshot = gen_initial(cfg);
  for (int t = 0; t <= cfg.periods; ++t) {
    if (t > 0) snapshot = evolve(snapshot, cfg, t);
    write_snapshot_tsv(snapshot.g(), dir / ("snapshot_" + std::to_string(t) + ".tsv"));
    write_vertices_txt(cfg.n, dir / ("vertices_" + std::to_string(t) + ".txt"));
    write_tweets_tsv(gen_tweets(snapshot, cfg), dir / ("tweets_" + std::to_string(t) + ".tsv"));
  }
}

}  // namespace probekit
