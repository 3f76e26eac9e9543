#pragma once

// Synthetic ground truth: a directed preferential-attachment network that
// churns a little every period, plus a heavy-tailed tweet stream with
// per-user topic mixtures.  Everything is a pure function of (config, seed,
// period), so regenerating any period yields identical bytes.

#include <cstdint>
#include <vector>

#include "probekit/graph.hpp"
#include "probekit/topics.hpp"

namespace probekit {

struct GenConfig {
  std::size_t n = 5000;           // vertex universe
  std::size_t m0 = 50000;         // initial edge count, must be >= n
  int periods = 10;               // last period index; snapshots run 0..periods
  double churn_add_frac = 0.04;   // edges added per period, share of |E|
  double churn_del_frac = 0.038;  // edges removed per period, share of |E|
  double closure_frac = 0.5;      // share of added edges that close a wedge
  double lurker_frac = 0.02;      // earliest joiners who follow almost nobody
  double indeg_cap_frac = 0.025;  // soft follower saturation, share of n (0 = off)
  double hot_frac = 0.05;         // users with boosted churn
  double hot_boost = 4.0;         // how much likelier hot users are to churn
  std::size_t topic_count = 2;
  std::size_t keywords_per_topic = 100;
  double silent_frac = 0.3;          // users who never tweet
  double tweets_mean = 3.0;          // mean tweets per active user per period
  std::size_t tweets_cap = 40;       // hard cap per user per period
  double dominant_topic_share = 0.8; // probability a tweet is on the user's main topic
  std::uint64_t seed = 1;

  void validate() const;
};

// Initial network (period 0): m0 edges, targets chosen preferentially by
// in-degree + 1 so a heavy-tailed follower distribution emerges, with a
// closure_frac share of each joiner's follows taken from friends of the
// account just followed (triad formation, the source of the clustering real
// social graphs show).  The first lurker_frac of joiners — the vertices that
// grow into hubs — emit at most a handful of follows, mirroring the celebrity
// accounts real networks have: huge audiences, near-empty following lists.
// Audiences saturate at roughly indeg_cap_frac * n followers: preferential
// draws skip saturated accounts while any unsaturated target remains, putting
// a knee in the tail the way finite populations do.
Snapshot gen_initial(const GenConfig& cfg);

// Advances prev by one period: removes churn_del_frac * |E| edges (hot-user
// incident edges preferred), then adds churn_add_frac * |E| edges.  A
// closure_frac share of the additions follow a friend-of-a-friend (wedge
// closing, the dominant link-formation mechanism in social networks); the
// rest target preferentially by in-degree.  Requires t == prev.period + 1.
// When both counts round to zero the underlying graph object is shared, not
// copied.
Snapshot evolve(const Snapshot& prev, const GenConfig& cfg, int t);

// Stable per-user churn-boost flags (hot_frac of the universe).
std::vector<char> hot_users(const GenConfig& cfg);

// Topic dictionaries: keyword "t<j>kw<i>" with weights cycling .1 to 1.
std::vector<TopicDictionary> gen_dictionaries(const GenConfig& cfg);

// One period of tweets, grouped by author id.  Each active user has a
// stable dominant topic; retweet/favorite counts scale with the author's
// current audience (in-degree).
std::vector<std::vector<TweetRecord>> gen_tweets(const Snapshot& snapshot, const GenConfig& cfg);

}  // namespace probekit
