#include "probekit/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "probekit/detail/random.hpp"

namespace probekit {

namespace {

// Substream tags so the different draws never share a stream.
constexpr std::uint64_t kStreamInit = 0x01;
constexpr std::uint64_t kStreamHot = 0x02;
constexpr std::uint64_t kStreamUserTraits = 0x03;
constexpr std::uint64_t kStreamQuota = 0x04;
constexpr std::uint64_t kStreamEvolveBase = 0x1000;
constexpr std::uint64_t kStreamTweetsBase = 0x2000;

double check_fraction(double x, const char* name) {
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
  return x;
}

// Stable per-user uniform in [0, 1), independent of any stream position.
double user_hash01(const GenConfig& cfg, std::uint64_t stream, VertexId u) {
  const std::uint64_t h = detail::mix64(detail::substream_seed(cfg.seed, stream) ^ u);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Audience saturation threshold derived from cfg; ~0 means "no cap".
std::size_t indeg_cap(const GenConfig& cfg) {
  if (cfg.indeg_cap_frac <= 0.0) return cfg.n;  // disabled
  const auto cap = static_cast<std::size_t>(
      std::llround(cfg.indeg_cap_frac * static_cast<double>(cfg.n)));
  return std::max<std::size_t>(cap, 8);  // tiny universes: cap is meaningless
}

// Preferential target pick: the bag holds each vertex (in-degree + 1) times.
// Retries dodge self-loops, duplicates, banned pairs, and saturated
// audiences; a deterministic ascending scan handles the (rare) exhausted
// case, dropping the saturation cap as a last resort so edge counts stay
// exact.  Returns n on failure.
VertexId pick_target(std::mt19937_64& rng, const std::vector<VertexId>& bag, const Digraph& g,
                     VertexId src, std::size_t cap, const std::set<Edge>* banned = nullptr) {
  const std::size_t n = g.vertex_count();
  const auto ok = [&](VertexId v) {
    return v != src && !g.has_edge(src, v) && (banned == nullptr || !banned->contains({src, v}));
  };
  for (int attempt = 0; attempt < 32; ++attempt) {
    const VertexId v = bag[detail::uniform_index(rng, bag.size())];
    if (ok(v) && g.in_degree(v) < cap) return v;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (ok(v) && g.in_degree(v) < cap) return v;
  }
  for (VertexId v = 0; v < n; ++v) {
    if (ok(v)) return v;
  }
  return static_cast<VertexId>(n);
}

// Uniform source pick with room for another out-edge.
VertexId pick_source(std::mt19937_64& rng, const Digraph& g) {
  const std::size_t n = g.vertex_count();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto s = static_cast<VertexId>(detail::uniform_index(rng, n));
    if (g.out_degree(s) < n - 1) return s;
  }
  for (VertexId s = 0; s < n; ++s) {
    if (g.out_degree(s) < n - 1) return s;
  }
  return static_cast<VertexId>(n);
}

// Poisson draw (Knuth), good for the small means used here.
std::size_t poisson(std::mt19937_64& rng, double mean, std::size_t cap) {
  const double limit = std::exp(-mean);
  double p = 1.0;
  std::size_t k = 0;
  do {
    ++k;
    p *= detail::uniform01(rng);
  } while (p > limit && k <= cap + 1);
  const std::size_t draws = k - 1;
  return std::min(draws, cap);
}

}  // namespace

void GenConfig::validate() const {
  if (n < 2) throw std::invalid_argument("GenConfig: n must be >= 2");
  if (m0 < n || m0 > n * (n - 1)) {
    throw std::invalid_argument("GenConfig: m0 must lie in [n, n*(n-1)]");
  }
  if (periods < 0) throw std::invalid_argument("GenConfig: periods must be >= 0");
  check_fraction(churn_add_frac, "GenConfig: churn_add_frac");
  check_fraction(churn_del_frac, "GenConfig: churn_del_frac");
  check_fraction(closure_frac, "GenConfig: closure_frac");
  check_fraction(lurker_frac, "GenConfig: lurker_frac");
  check_fraction(indeg_cap_frac, "GenConfig: indeg_cap_frac");
  check_fraction(hot_frac, "GenConfig: hot_frac");
  check_fraction(silent_frac, "GenConfig: silent_frac");
  check_fraction(dominant_topic_share, "GenConfig: dominant_topic_share");
  if (!(hot_boost >= 1.0)) throw std::invalid_argument("GenConfig: hot_boost must be >= 1");
  if (topic_count < 1) throw std::invalid_argument("GenConfig: topic_count must be >= 1");
  if (keywords_per_topic < 1) {
    throw std::invalid_argument("GenConfig: keywords_per_topic must be >= 1");
  }
  if (!(tweets_mean > 0.0)) throw std::invalid_argument("GenConfig: tweets_mean must be > 0");
}

Snapshot gen_initial(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(detail::substream_seed(cfg.seed, kStreamInit));
  const std::size_t cap = indeg_cap(cfg);

  Digraph g(cfg.n);
  // Vertices join one at a time and follow existing vertices drawn with
  // probability proportional to in-degree + 1.  The age advantage of early
  // joiners is what yields the power-law in-degree tail; wiring a fixed
  // population in one pass would give every vertex the same expected share.
  const auto lurkers =
      static_cast<VertexId>(std::llround(cfg.lurker_frac * static_cast<double>(cfg.n)));
  std::vector<VertexId> bag{0};  // joined vertices, one entry per (in-degree + 1)
  std::size_t remaining = cfg.m0;
  for (VertexId v = 1; v < cfg.n; ++v) {
    const std::size_t arrivals_left = cfg.n - v;
    std::size_t quota = (remaining + arrivals_left - 1) / arrivals_left;
    if (v < lurkers) {
      // Future hubs follow at most a handful of accounts.
      const auto few = static_cast<std::size_t>(user_hash01(cfg, kStreamQuota, v) * 5.0);
      quota = std::min(quota, few);
    }
    quota = std::min({quota, static_cast<std::size_t>(v), remaining});
    const auto neighbor_of = [&](VertexId u) -> VertexId {
      const std::size_t deg = g.out_degree(u) + g.in_degree(u);
      if (deg == 0) return cfg.n;
      const std::size_t i = detail::uniform_index(rng, deg);
      return i < g.out_degree(u) ? g.out_neighbors(u)[i]
                                 : g.in_neighbors(u)[i - g.out_degree(u)];
    };
    VertexId anchor = cfg.n;  // the vertex followed last, seed for triads
    for (std::size_t e = 0; e < quota; ++e) {
      VertexId dst = cfg.n;
      // Triad formation: often the next account someone follows is a friend
      // of the one they just followed.  This bakes the common-neighbor
      // structure of real social graphs into the initial network.
      if (anchor != cfg.n && detail::uniform01(rng) < cfg.closure_frac) {
        for (int attempt = 0; attempt < 8 && dst == cfg.n; ++attempt) {
          const VertexId cand = neighbor_of(anchor);
          if (cand != cfg.n && cand != v && !g.has_edge(v, cand) && g.in_degree(cand) < cap) {
            dst = cand;
          }
        }
      }
      for (int attempt = 0; attempt < 32 && dst == cfg.n; ++attempt) {
        const VertexId cand = bag[detail::uniform_index(rng, bag.size())];
        if (cand != v && !g.has_edge(v, cand) && g.in_degree(cand) < cap) dst = cand;
      }
      if (dst == cfg.n) {  // exhausted draws: first eligible joined vertex
        for (VertexId w = 0; w < v; ++w) {
          if (!g.has_edge(v, w) && g.in_degree(w) < cap) {
            dst = w;
            break;
          }
        }
      }
      if (dst == cfg.n) {  // every candidate saturated: waive the cap
        for (VertexId w = 0; w < v; ++w) {
          if (!g.has_edge(v, w)) {
            dst = w;
            break;
          }
        }
      }
      g.add_edge(v, dst);
      bag.push_back(dst);
      anchor = dst;
    }
    remaining -= quota;
    bag.push_back(v);
  }

  // Arrival order caps the first pass at n(n-1)/2 edges; denser configs top
  // up with uniformly chosen sources and preferential targets.
  while (remaining > 0) {
    const VertexId src = pick_source(rng, g);
    if (src == cfg.n) break;  // graph is complete
    const VertexId dst = pick_target(rng, bag, g, src, cap);
    if (dst == cfg.n) continue;
    g.add_edge(src, dst);
    bag.push_back(dst);
    --remaining;
  }
  return make_snapshot(0, std::move(g));
}

std::vector<char> hot_users(const GenConfig& cfg) {
  cfg.validate();
  std::vector<char> hot(cfg.n, 0);
  for (VertexId v = 0; v < cfg.n; ++v) {
    if (user_hash01(cfg, kStreamHot, v) < cfg.hot_frac) hot[v] = 1;
  }
  return hot;
}

Snapshot evolve(const Snapshot& prev, const GenConfig& cfg, int t) {
  cfg.validate();
  if (!prev.graph) throw std::invalid_argument("evolve: snapshot holds no graph");
  if (t != prev.period + 1) {
    throw std::invalid_argument("evolve: expected period " + std::to_string(prev.period + 1) +
                                ", got " + std::to_string(t));
  }
  if (prev.g().vertex_count() != cfg.n) {
    throw std::invalid_argument("evolve: snapshot universe differs from config");
  }

  const auto edge_budget = static_cast<double>(prev.g().edge_count());
  const auto deletions = static_cast<std::size_t>(std::llround(cfg.churn_del_frac * edge_budget));
  const auto additions = static_cast<std::size_t>(std::llround(cfg.churn_add_frac * edge_budget));
  if (deletions == 0 && additions == 0) {
    return Snapshot{t, prev.graph};  // nothing changed, share the graph
  }

  std::mt19937_64 rng(
      detail::substream_seed(cfg.seed, kStreamEvolveBase + static_cast<std::uint64_t>(t)));
  Digraph g = prev.g();
  const std::vector<char> hot = hot_users(cfg);
  const std::size_t cap = indeg_cap(cfg);

  // Deletions: sample edges uniformly, accepting cold-only edges with
  // probability 1 / hot_boost so hot users churn faster.
  std::vector<Edge> alive = g.edges();
  std::set<Edge> tombstones;  // this period's deletions stay deleted
  std::size_t removed = 0;
  int rejections = 0;
  while (removed < deletions && !alive.empty()) {
    const std::size_t i = detail::uniform_index(rng, alive.size());
    const Edge e = alive[i];
    const bool is_hot = hot[e.src] || hot[e.dst];
    if (is_hot || detail::uniform01(rng) < 1.0 / cfg.hot_boost || rejections >= 64) {
      g.remove_edge(e.src, e.dst);
      tombstones.insert(e);
      alive[i] = alive.back();
      alive.pop_back();
      ++removed;
      rejections = 0;
    } else {
      ++rejections;
    }
  }

  // Additions: hot sources preferred; a closure_frac share closes a wedge
  // (follow a friend of a friend), the rest target preferentially by
  // in-degree.  Wedge closing is what gives common-neighbor structure
  // predictive power, as it does in real social networks.
  std::vector<VertexId> bag;
  bag.reserve(g.edge_count() + cfg.n);
  for (VertexId v = 0; v < cfg.n; ++v) {
    for (std::size_t c = 0; c <= g.in_degree(v); ++c) bag.push_back(v);
  }
  const auto undirected_neighbor = [&](VertexId u) -> VertexId {
    const std::size_t deg = g.out_degree(u) + g.in_degree(u);
    if (deg == 0) return cfg.n;
    const std::size_t i = detail::uniform_index(rng, deg);
    return i < g.out_degree(u) ? g.out_neighbors(u)[i]
                               : g.in_neighbors(u)[i - g.out_degree(u)];
  };
  for (std::size_t a = 0; a < additions; ++a) {
    VertexId src = cfg.n;
    int attempts = 0;
    while (attempts < 64) {
      const VertexId s = pick_source(rng, g);
      if (s == cfg.n) break;
      if (hot[s] || detail::uniform01(rng) < 1.0 / cfg.hot_boost || attempts == 63) {
        src = s;
        break;
      }
      ++attempts;
    }
    if (src == cfg.n) break;
    VertexId dst = cfg.n;
    if (detail::uniform01(rng) < cfg.closure_frac) {
      for (int tries = 0; tries < 16 && dst == cfg.n; ++tries) {
        const VertexId mid = undirected_neighbor(src);
        if (mid == cfg.n || mid == src) continue;
        const VertexId far = undirected_neighbor(mid);
        if (far == cfg.n || far == src || g.has_edge(src, far) || g.in_degree(far) >= cap ||
            tombstones.contains({src, far})) {
          continue;
        }
        dst = far;
      }
    }
    if (dst == cfg.n) dst = pick_target(rng, bag, g, src, cap, &tombstones);
    if (dst == cfg.n) continue;
    g.add_edge(src, dst);
    bag.push_back(dst);
  }

  return make_snapshot(t, std::move(g));
}

std::vector<TopicDictionary> gen_dictionaries(const GenConfig& cfg) {
  cfg.validate();
  std::vector<TopicDictionary> dicts(cfg.topic_count);
  for (std::size_t j = 0; j < cfg.topic_count; ++j) {
    dicts[j].topic_id = "topic" + std::to_string(j);
    for (std::size_t i = 0; i < cfg.keywords_per_topic; ++i) {
      const std::string keyword = "t" + std::to_string(j) + "kw" + std::to_string(i);
      dicts[j].weights[keyword] = static_cast<double>(i % 10 + 1) / 10.0;
    }
  }
  return dicts;
}

std::vector<std::vector<TweetRecord>> gen_tweets(const Snapshot& snapshot, const GenConfig& cfg) {
  cfg.validate();
  if (!snapshot.graph) throw std::invalid_argument("gen_tweets: snapshot holds no graph");
  const Digraph& g = snapshot.g();
  if (g.vertex_count() != cfg.n) {
    throw std::invalid_argument("gen_tweets: snapshot universe differs from config");
  }

  const std::vector<TopicDictionary> dicts = gen_dictionaries(cfg);
  std::mt19937_64 rng(detail::substream_seed(
      cfg.seed, kStreamTweetsBase + static_cast<std::uint64_t>(snapshot.period)));

  std::vector<std::vector<TweetRecord>> by_user(cfg.n);
  for (VertexId u = 0; u < cfg.n; ++u) {
    if (user_hash01(cfg, kStreamUserTraits, u) < cfg.silent_frac) continue;

    // Stable traits: dominant topic and a heavy-tailed activity level.
    const std::uint64_t traits =
        detail::mix64(detail::substream_seed(cfg.seed, kStreamUserTraits + 1) ^ u);
    const std::size_t dominant = traits % cfg.topic_count;
    const double spread = user_hash01(cfg, kStreamUserTraits + 2, u);
    const double activity =
        cfg.tweets_mean * std::min(10.0, 0.5 / std::sqrt(1.0 - spread + 1e-12));

    const std::size_t count = poisson(rng, activity, cfg.tweets_cap);
    const double audience = static_cast<double>(g.in_degree(u));
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t topic = dominant;
      if (cfg.topic_count > 1 && detail::uniform01(rng) >= cfg.dominant_topic_share) {
        std::size_t other = detail::uniform_index(rng, cfg.topic_count - 1);
        if (other >= dominant) ++other;
        topic = other;
      }
      const TopicDictionary& dict = dicts[topic];

      std::string text;
      const std::size_t keywords = 1 + detail::uniform_index(rng, 3);
      for (std::size_t kw = 0; kw < keywords; ++kw) {
        const std::size_t pick = detail::uniform_index(rng, cfg.keywords_per_topic);
        auto it = dict.weights.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(pick));
        if (!text.empty()) text += ' ';
        text += it->first;
      }
      const std::size_t fillers = 2 + detail::uniform_index(rng, 5);
      for (std::size_t f = 0; f < fillers; ++f) {
        text += " noise" + std::to_string(detail::uniform_index(rng, 200));
      }

      // Echo scales with audience; exponential tails keep a few tweets viral.
      const double echo_mean = 1.0 + 0.05 * audience;
      const auto draw_echo = [&](double scale) {
        const double x = -scale * std::log(1.0 - detail::uniform01(rng));
        return static_cast<long long>(std::floor(x));
      };
      TweetRecord tweet;
      tweet.author = u;
      tweet.period = snapshot.period;
      tweet.text = std::move(text);
      tweet.retweets = draw_echo(echo_mean);
      tweet.favorites = draw_echo(2.0 * echo_mean);
      by_user[u].push_back(std::move(tweet));
    }
  }
  return by_user;
}

}  // namespace probekit
