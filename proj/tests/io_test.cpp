#include "probekit/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"

namespace {

using namespace probekit;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("probekit_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

TEST_F(IoTest, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, 0.0, 1e17}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST_F(IoTest, ManifestRoundTrip) {
  const DatasetManifest m{1234, 7, 3, 99};
  write_manifest(m, dir_ / "manifest.json");
  const DatasetManifest r = read_manifest(dir_ / "manifest.json");
  EXPECT_EQ(r.n, 1234u);
  EXPECT_EQ(r.periods, 7);
  EXPECT_EQ(r.topic_count, 3u);
  EXPECT_EQ(r.seed, 99u);
}

TEST_F(IoTest, ManifestErrorsNameTheFile) {
  try {
    read_manifest(dir_ / "missing.json");
    FAIL() << "expected a throw";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("missing.json"), std::string::npos);
  }
  std::ofstream(dir_ / "bad.json") << "{not json";
  try {
    read_manifest(dir_ / "bad.json");
    FAIL() << "expected a throw";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
}

TEST_F(IoTest, SnapshotRoundTripAndDeterminism) {
  std::mt19937_64 rng(77);
  const Digraph g = oracle::random_digraph(50, 300, rng);
  write_snapshot_tsv(g, dir_ / "snap.tsv");
  const Digraph r = read_snapshot_tsv(dir_ / "snap.tsv", 50);
  EXPECT_EQ(r, g);
  // Byte determinism: writing the same graph twice gives identical bytes.
  write_snapshot_tsv(g, dir_ / "snap2.tsv");
  EXPECT_EQ(slurp(dir_ / "snap.tsv"), slurp(dir_ / "snap2.tsv"));
}

TEST_F(IoTest, SnapshotRejectsBadRows) {
  std::ofstream(dir_ / "bad1.tsv") << "0\t1\n1\tx\n";
  EXPECT_THROW(read_snapshot_tsv(dir_ / "bad1.tsv", 5), std::runtime_error);
  std::ofstream(dir_ / "bad2.tsv") << "0\t9\n";  // out of universe
  EXPECT_THROW(read_snapshot_tsv(dir_ / "bad2.tsv", 5), std::runtime_error);
  std::ofstream(dir_ / "bad3.tsv") << "0\t1\n0\t1\n";  // duplicate edge
  EXPECT_THROW(read_snapshot_tsv(dir_ / "bad3.tsv", 5), std::runtime_error);
  try {
    read_snapshot_tsv(dir_ / "bad2.tsv", 5);
    FAIL() << "expected a throw";
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("bad2.tsv"), std::string::npos) << what;
    EXPECT_NE(what.find(":1"), std::string::npos) << "line number missing: " << what;
  }
}

TEST_F(IoTest, TweetsRoundTripWithTabsAndUnicodeInText) {
  std::vector<std::vector<TweetRecord>> by_user(3);
  TweetRecord t;
  t.author = 1;
  t.period = 2;
  t.retweets = 5;
  t.favorites = 7;
  t.text = "caf\xc3\xa9 says hello world";
  by_user[1].push_back(t);
  t.text = "second tweet";
  t.retweets = 0;
  by_user[1].push_back(t);
  write_tweets_tsv(by_user, dir_ / "tweets.tsv");
  const auto r = read_tweets_tsv(dir_ / "tweets.tsv", 3);
  ASSERT_EQ(r.size(), 3u);
  ASSERT_EQ(r[1].size(), 2u);
  EXPECT_EQ(r[1][0].text, "caf\xc3\xa9 says hello world");
  EXPECT_EQ(r[1][0].retweets, 5);
  EXPECT_EQ(r[1][0].favorites, 7);
  EXPECT_EQ(r[1][0].period, 2);
  EXPECT_EQ(r[1][1].text, "second tweet");
  EXPECT_TRUE(r[0].empty());
}

TEST_F(IoTest, DictionariesRoundTrip) {
  std::vector<TopicDictionary> dicts(2);
  dicts[0].topic_id = "alpha";
  dicts[0].weights = {{"x", 0.5}, {"y", 1.0}};
  dicts[1].topic_id = "beta";
  dicts[1].weights = {{"z", 0.25}};
  write_dictionaries_tsv(dicts, dir_ / "dicts.tsv");
  const auto r = read_dictionaries_tsv(dir_ / "dicts.tsv");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].topic_id, "alpha");
  EXPECT_EQ(r[0].weights.at("y"), 1.0);
  EXPECT_EQ(r[1].weights.at("z"), 0.25);
}

TEST_F(IoTest, RankCsvFormat) {
  RankVector pr;
  pr.scores = {0.25, 0.5, 0.25};
  write_rank_csv(pr, dir_ / "ranks.csv");
  const std::string bytes = slurp(dir_ / "ranks.csv");
  EXPECT_EQ(bytes, "vertex_id,score\n0,0.25\n1,0.5\n2,0.25\n");
}

TEST_F(IoTest, ReportCsvRoundTrip) {
  PeriodReport r;
  r.period = 3;
  r.strategy = "rrch";
  r.topic = "topic1";
  r.theta = 0.5;
  r.beta = 0.8;
  r.capacity = 0.01;
  r.seed = 4;
  r.probed = 50;
  r.mse_value = 1.25e-4;
  r.jaccard10 = 0.9;
  r.jaccard100 = 0.8;
  r.jaccard1000 = 0.7;
  r.kendall = 0.65;
  r.edge_fp = 0.01;
  r.edge_fn = 0.02;
  const std::vector<PeriodReport> rows = {r};
  write_report_csv(rows, 0.85, dir_ / "report.csv");

  const std::string bytes = slurp(dir_ / "report.csv");
  EXPECT_EQ(bytes.rfind("# alpha=0.85", 0), 0u) << bytes.substr(0, 40);

  const ReportFile read = read_report_csv(dir_ / "report.csv");
  EXPECT_EQ(read.alpha, 0.85);
  ASSERT_EQ(read.rows.size(), 1u);
  EXPECT_EQ(read.rows[0].period, 3);
  EXPECT_EQ(read.rows[0].strategy, "rrch");
  EXPECT_EQ(read.rows[0].topic, "topic1");
  EXPECT_EQ(read.rows[0].mse_value, 1.25e-4);
  EXPECT_EQ(read.rows[0].probed, 50u);
  EXPECT_EQ(read.rows[0].edge_fn, 0.02);
}

TEST_F(IoTest, InferredTsvFormat) {
  const std::vector<std::pair<Edge, double>> edges = {{{3, 7}, 0.5}, {{1, 2}, 0.25}};
  write_inferred_tsv(edges, dir_ / "inferred.tsv");
  EXPECT_EQ(slurp(dir_ / "inferred.tsv"), "3\t7\t0.5\n1\t2\t0.25\n");
}

TEST_F(IoTest, WriteDatasetLayout) {
  GenConfig cfg;
  cfg.n = 60;
  cfg.m0 = 240;
  cfg.periods = 2;
  cfg.seed = 10;
  write_dataset(cfg, dir_ / "ds");
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ds" / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ds" / "dictionaries.tsv"));
  for (int t = 0; t <= 2; ++t) {
    EXPECT_TRUE(std::filesystem::exists(dir_ / "ds" / ("snapshot_" + std::to_string(t) + ".tsv")));
    EXPECT_TRUE(std::filesystem::exists(dir_ / "ds" / ("vertices_" + std::to_string(t) + ".txt")));
    EXPECT_TRUE(std::filesystem::exists(dir_ / "ds" / ("tweets_" + std::to_string(t) + ".tsv")));
  }
  const DatasetManifest m = read_manifest(dir_ / "ds" / "manifest.json");
  EXPECT_EQ(m.n, 60u);
  EXPECT_EQ(m.periods, 2);
  // Snapshot 0 must reproduce the generator exactly.
  const Digraph s0 = read_snapshot_tsv(dir_ / "ds" / "snapshot_0.tsv", 60);
  EXPECT_EQ(s0, gen_initial(cfg).g());
}

}  // namespace
