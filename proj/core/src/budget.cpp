#include "probekit/budget.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace probekit {

void RateModel::validate() const {
  if (rel_calls_per_window < 1 || tweet_calls_per_window < 1 || window_minutes < 1 ||
      followers_per_call < 1 || tweets_per_call < 1) {
    throw std::invalid_argument("RateModel: all fields must be >= 1");
  }
}

long long relation_probe_cost(long long follower_count, long long friend_count,
                              const RateModel& rates) {
  rates.validate();
  if (follower_count < 0 || friend_count < 0) {
    throw std::invalid_argument("relation_probe_cost: negative relation count");
  }
  const long long page = rates.followers_per_call;
  const auto pages = [page](long long count) {
    const long long c = count < 1 ? 1 : count;  // an empty list still costs one call
    return (c + page - 1) / page;
  };
  return pages(follower_count) + pages(friend_count);
}

long long feasible_users(const RateModel& rates, double period_days, ProbeKind kind) {
  rates.validate();
  if (!(period_days > 0.0)) {
    throw std::invalid_argument("feasible_users: period_days must be > 0");
  }
  const int calls =
      kind == ProbeKind::relations ? rates.rel_calls_per_window : rates.tweet_calls_per_window;
  // Follower and friend lists are separate endpoints with separate windows,
  // so one user per relation call of the slower endpoint is the cheapest
  // sustained rate.
  const double users_per_minute = static_cast<double>(calls) / rates.window_minutes;
  return static_cast<long long>(std::floor(users_per_minute * period_days * 1440.0));
}

std::size_t capacity_to_k(std::size_t universe, double fraction) {
  if (universe < 1) {
    throw std::invalid_argument("capacity_to_k: empty universe");
  }
  if (!(fraction > 0.0) || !(fraction <= 1.0)) {
    throw std::invalid_argument("capacity_to_k: fraction must lie in (0, 1], got " +
                                std::to_string(fraction));
  }
  const long long k = std::llround(fraction * static_cast<double>(universe));
  return k < 1 ? 1 : static_cast<std::size_t>(k);
}

BudgetCheck check_probe_budget(const RateModel& rates, double period_days, ProbeKind kind,
                               long long users_per_period) {
  if (users_per_period < 0) {
    throw std::invalid_argument("check_probe_budget: negative request");
  }
  BudgetCheck check;
  check.capacity = feasible_users(rates, period_days, kind);
  check.requested = users_per_period;
  check.feasible = check.requested <= check.capacity;
  check.shortfall = check.feasible ? 0 : check.requested - check.capacity;
  return check;
}

}  // namespace probekit
