#pragma once

// Topic-level influence.  Each user's recent tweets are tokenized and scored
// against a topic dictionary; the score, amplified by how much the audience
// echoed the tweets (retweets + favorites), becomes the user's topic mass.
// Every follow edge pointing at the user is weighted by that mass, and
// weighted PageRank over the resulting graph yields topic influence.
//
// Users who barely tweet about the topic are excluded from ranking
// comparisons by the relevance filter.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "probekit/graph.hpp"
#include "probekit/rank.hpp"

namespace probekit {

struct TweetRecord {
  VertexId author = 0;
  int period = 0;
  std::string text;
  long long retweets = 0;
  long long favorites = 0;
};

// Keyword -> weight in (0, 1], higher meaning more topical.
struct TopicDictionary {
  std::string topic_id;
  std::map<std::string, double> weights;

  bool contains(const std::string& token) const { return weights.count(token) != 0; }
  void validate() const;
};

// Tokenization settings.  The stemmer hook is applied after lowercasing and
// before stop-word removal; identity when unset.
struct Tokenizer {
  std::set<std::string, std::less<>> stop_words;
  std::function<std::string(const std::string&)> stemmer;
};

// token -> occurrence count
using KeywordHistogram = std::map<std::string, long long>;

// Splits on non-alphanumeric ASCII (non-ASCII bytes are treated as word
// characters), lowercases A-Z, applies the stemmer, drops stop words and
// empty results.
KeywordHistogram extract_keywords(std::string_view text, const Tokenizer& tokenizer = {});

// Combined histogram of a whole tweet window.
KeywordHistogram window_histogram(std::span<const TweetRecord> window,
                                  const Tokenizer& tokenizer = {});

// Dictionary-weighted share of matching tokens:
//   sum over dictionary tokens w of weight(w) * count(w), divided by the
//   total token count.  0 for an empty histogram.
double raw_topic_score(const KeywordHistogram& histogram, const TopicDictionary& dict);

// Total audience echo of a tweet window.  Negative counts are rejected.
long long rtfav_total(std::span<const TweetRecord> tweets);

// Per-vertex topic mass attached to a follow graph: the weight of every
// edge (u, v) is mass[v], the mass of the followed user.  Masses are
// max-normalized into [0, 1] (all-zero masses stay zero).
struct TopicWeightedGraph {
  std::string topic_id;
  std::vector<double> mass;

  double edge_weight(VertexId /*src*/, VertexId dst) const { return mass[dst]; }
};

// mass(v) = raw_score(v) * rtfav(v), max-normalized.  Sizes must match the
// graph's vertex universe; scores and totals must be finite and >= 0.
TopicWeightedGraph build_topic_graph(const Digraph& g, std::span<const double> raw_scores,
                                     std::span<const long long> rtfav_totals,
                                     std::string topic_id);

// Weighted PageRank over g with the topic's edge weights.
RankVector topic_pagerank(const Digraph& g, const TopicWeightedGraph& weighted,
                          const RankOptions& opt = {});

// True when at least `min_fraction` of the user's tweets contain one or more
// dictionary keywords.  A user with no tweets is never relevant.
bool relevance_filter(std::span<const TweetRecord> tweets, const TopicDictionary& dict,
                      double min_fraction, const Tokenizer& tokenizer = {});

// Ids passing the relevance filter, ascending, from per-user tweet windows.
std::vector<VertexId> relevant_users(std::span<const std::vector<TweetRecord>> windows,
                                     const TopicDictionary& dict, double min_fraction,
                                     const Tokenizer& tokenizer = {});

// The crawler's view of user timelines: the last fetched tweet window per
// user, possibly stale.  Refreshed per user by tweet probes.
class LocalTweets {
 public:
  LocalTweets() = default;
  explicit LocalTweets(std::size_t vertex_count) : windows_(vertex_count) {}

  std::size_t vertex_count() const noexcept { return windows_.size(); }
  std::span<const TweetRecord> window(VertexId v) const;
  std::span<const std::vector<TweetRecord>> windows() const noexcept { return windows_; }

  // Replaces v's window with the ground-truth window (a tweet probe).
  void refresh(VertexId v, std::vector<TweetRecord> window);

 private:
  std::vector<std::vector<TweetRecord>> windows_;
};

}  // namespace probekit
