#pragma once

// Probe-budget arithmetic for a rate-limited API.  Calls are granted in
// fixed windows; a full refresh of one user costs one page per 5,000
// follower/friend ids (relations) or per 200 tweets (timelines).  These
// numbers size how many users one crawler identity can sweep per period
// and translate a capacity fraction into the per-period probe count k.

#include <cstdint>

namespace probekit {

struct RateModel {
  int rel_calls_per_window = 15;    // follower-list (and friend-list) calls
  int tweet_calls_per_window = 180; // timeline calls
  int window_minutes = 15;
  int followers_per_call = 5000;    // ids per relation-list page
  int tweets_per_call = 200;

  void validate() const;
};

enum class ProbeKind { relations, tweets };

// Calls needed to fetch the full relation lists of one user with
// `follower_count` followers and `friend_count` friends.  Both lists cost
// at least one call even when empty.  Negative counts are rejected.
long long relation_probe_cost(long long follower_count, long long friend_count,
                              const RateModel& rates = {});

// Users refreshable in one period of `period_days` days at the best-case
// cost of one call per user.  Follower and friend lists live on separate
// endpoints with separate windows, so relations sustain one user per
// relation call: 15 calls / 15 min = 1 user/min; timelines 180/15 = 12/min.
long long feasible_users(const RateModel& rates, double period_days, ProbeKind kind);

// Translates a capacity fraction (probed share of the universe per period)
// into the probe count k: round(fraction * universe), at least 1.
// Throws std::invalid_argument unless 0 < fraction <= 1 and universe >= 1.
std::size_t capacity_to_k(std::size_t universe, double fraction);

struct BudgetCheck {
  bool feasible = false;
  long long capacity = 0;   // users per period the rate limit allows
  long long requested = 0;  // users per period the experiment wants
  long long shortfall = 0;  // requested - capacity when infeasible, else 0
};

BudgetCheck check_probe_budget(const RateModel& rates, double period_days, ProbeKind kind,
                               long long users_per_period);

}  // namespace probekit
