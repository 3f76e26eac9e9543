#include "probekit/topics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace probekit {

void TopicDictionary::validate() const {
  if (topic_id.empty()) throw std::invalid_argument("TopicDictionary: empty topic id");
  if (weights.empty()) throw std::invalid_argument("TopicDictionary: no keywords");
  for (const auto& [token, w] : weights) {
    if (token.empty()) throw std::invalid_argument("TopicDictionary: empty keyword");
    if (!(w > 0.0) || !(w <= 1.0)) {
      throw std::invalid_argument("TopicDictionary: weight of '" + token +
                                  "' must lie in (0, 1]");
    }
  }
}

KeywordHistogram extract_keywords(std::string_view text, const Tokenizer& tokenizer) {
  KeywordHistogram histogram;
  std::string token;
  const auto flush = [&] {
    if (token.empty()) return;
    std::string t = tokenizer.stemmer ? tokenizer.stemmer(token) : token;
    token.clear();
    if (t.empty()) return;
    if (tokenizer.stop_words.count(t) != 0) return;
    ++histogram[t];
  };
  for (unsigned char c : text) {
    // Word characters: ASCII alphanumerics (lowercased) and non-ASCII bytes,
    // so UTF-8 words survive untouched.
    if (c >= 0x80 || std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return histogram;
}

KeywordHistogram window_histogram(std::span<const TweetRecord> window,
                                  const Tokenizer& tokenizer) {
  KeywordHistogram combined;
  for (const TweetRecord& t : window) {
    for (const auto& [token, count] : extract_keywords(t.text, tokenizer)) {
      combined[token] += count;
    }
  }
  return combined;
}

double raw_topic_score(const KeywordHistogram& histogram, const TopicDictionary& dict) {
  dict.validate();
  long long total = 0;
  double matched = 0.0;
  for (const auto& [token, count] : histogram) {
    if (count < 0) throw std::invalid_argument("raw_topic_score: negative token count");
    total += count;
    const auto it = dict.weights.find(token);
    if (it != dict.weights.end()) matched += it->second * static_cast<double>(count);
  }
  if (total == 0) return 0.0;
  return matched / static_cast<double>(total);
}

long long rtfav_total(std::span<const TweetRecord> tweets) {
  long long total = 0;
  for (const TweetRecord& t : tweets) {
    if (t.retweets < 0 || t.favorites < 0) {
      throw std::invalid_argument("rtfav_total: negative retweet/favorite count");
    }
    total += t.retweets + t.favorites;
  }
  return total;
}

TopicWeightedGraph build_topic_graph(const Digraph& g, std::span<const double> raw_scores,
                                     std::span<const long long> rtfav_totals,
                                     std::string topic_id) {
  const std::size_t n = g.vertex_count();
  if (raw_scores.size() != n || rtfav_totals.size() != n) {
    throw std::invalid_argument("build_topic_graph: score/total sizes must match the universe");
  }
  TopicWeightedGraph result;
  result.topic_id = std::move(topic_id);
  result.mass.resize(n);
  double max_mass = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (!std::isfinite(raw_scores[v]) || raw_scores[v] < 0.0) {
      throw std::invalid_argument("build_topic_graph: raw scores must be finite and >= 0");
    }
    if (rtfav_totals[v] < 0) {
      throw std::invalid_argument("build_topic_graph: rtfav totals must be >= 0");
    }
    result.mass[v] = raw_scores[v] * static_cast<double>(rtfav_totals[v]);
    max_mass = std::max(max_mass, result.mass[v]);
  }
  if (max_mass > 0.0) {
    for (double& m : result.mass) m /= max_mass;
  }
  return result;
}

RankVector topic_pagerank(const Digraph& g, const TopicWeightedGraph& weighted,
                          const RankOptions& opt) {
  if (weighted.mass.size() != g.vertex_count()) {
    throw std::invalid_argument("topic_pagerank: mass size must match the graph universe");
  }
  return weighted_pagerank(
      g, [&weighted](VertexId src, VertexId dst) { return weighted.edge_weight(src, dst); }, opt);
}

bool relevance_filter(std::span<const TweetRecord> tweets, const TopicDictionary& dict,
                      double min_fraction, const Tokenizer& tokenizer) {
  dict.validate();
  if (!(min_fraction >= 0.0) || !(min_fraction <= 1.0)) {
    throw std::invalid_argument("relevance_filter: min_fraction must lie in [0, 1]");
  }
  if (tweets.empty()) return false;
  std::size_t related = 0;
  for (const TweetRecord& t : tweets) {
    const KeywordHistogram histogram = extract_keywords(t.text, tokenizer);
    for (const auto& [token, count] : histogram) {
      (void)count;
      if (dict.contains(token)) {
        ++related;
        break;
      }
    }
  }
  const double share = static_cast<double>(related) / static_cast<double>(tweets.size());
  return share >= min_fraction;
}

std::vector<VertexId> relevant_users(std::span<const std::vector<TweetRecord>> windows,
                                     const TopicDictionary& dict, double min_fraction,
                                     const Tokenizer& tokenizer) {
  std::vector<VertexId> result;
  for (VertexId v = 0; v < windows.size(); ++v) {
    if (relevance_filter(windows[v], dict, min_fraction, tokenizer)) result.push_back(v);
  }
  return result;
}

std::span<const TweetRecord> LocalTweets::window(VertexId v) const {
  if (v >= windows_.size()) throw std::invalid_argument("LocalTweets: vertex id out of range");
  return windows_[v];
}

void LocalTweets::refresh(VertexId v, std::vector<TweetRecord> window) {
  if (v >= windows_.size()) throw std::invalid_argument("LocalTweets: vertex id out of range");
  windows_[v] = std::move(window);
}

}  // namespace probekit
