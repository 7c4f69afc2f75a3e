#include "pfd/benchmarks.hpp"

#include <algorithm>
#include <cmath>

#include "pfd/errors.hpp"

namespace pfd {

namespace {

bool above(double v, double threshold, bool inclusive) { return inclusive ? v >= threshold : v > threshold; }

struct Threshold
{
  double value;
  bool inclusive;
};

// Inclusive at c is the limit from below, so it sorts just before strict c.
bool not_above(const Threshold &a, const Threshold &b)
{
  return a.value < b.value || (a.value == b.value && (a.inclusive || !b.inclusive));
}

}  // namespace

double two_level_objective(const ValuationProfile &profile, double p, bool p_inclusive, double q, bool q_inclusive,
                           int k, const Objective &obj)
{
  std::size_t s = 0;
  std::size_t t = 0;
  double upper_sum = 0.0;
  double lower_sum = 0.0;
  for (double v : profile.values()) {
    if (above(v, p, p_inclusive)) {
      ++s;
      upper_sum += v;
    } else if (above(v, q, q_inclusive)) {
      ++t;
      lower_sum += v;
    }
  }
  const detail::TierTerms terms = detail::tier_terms(s, t, p, q, k);
  double value = 0.0;
  if (s > 0) {
    value += obj.alpha * terms.upper_alloc * upper_sum + obj.beta * static_cast<double>(s) * terms.upper_pay;
  }
  if (t > 0 && terms.lower_alloc > 0.0) {
    value += obj.alpha * terms.lower_alloc * lower_sum + obj.beta * static_cast<double>(t) * terms.lower_pay;
  }
  return value;
}

BenchmarkResult benchmark(const ValuationProfile &profile, int k, const Objective &obj)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
  std::vector<double> values(profile.values());
  values.push_back(0.0);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<Threshold> candidates;
  for (double c : values) {
    candidates.push_back({c, false});
  }
  candidates.push_back({kInfinity, false});
  std::vector<Threshold> limits;
  for (double c : values) {
    limits.push_back({c, true});
  }

  BenchmarkResult best;
  best.objective = obj;
  bool have = false;
  auto consider = [&](const Threshold &p, const Threshold &q) {
    if (!not_above(q, p)) {
      return;
    }
    const double value = two_level_objective(profile, p.value, p.inclusive, q.value, q.inclusive, k, obj);
    if (!have || detail::strictly_better(value, best.value)) {
      have = true;
      best.value = value;
      best.argmax_p = p.value;
      best.argmax_q = q.value;
      best.p_inclusive = p.inclusive;
      best.q_inclusive = q.inclusive;
    }
  };
  // Attained thresholds first so they win ties against limits.
  for (const auto &p : candidates) {
    for (const auto &q : candidates) {
      consider(p, q);
    }
  }
  for (const auto &p : candidates) {
    for (const auto &q : limits) {
      consider(p, q);
    }
  }
  for (const auto &p : limits) {
    for (const auto &q : candidates) {
      consider(p, q);
    }
    for (const auto &q : limits) {
      consider(p, q);
    }
  }
  return best;
}

double benchmark_n2_closed_form(double v1, double v2)
{
  const double hi = std::max(v1, v2);
  const double lo = std::min(v1, v2);
  return std::max((v1 + v2) / 2.0, hi - lo / 2.0);
}

LotteryPrice best_one_level_lottery(const ValuationProfile &profile, int k, const Objective &obj)
{
  std::vector<double> candidates(profile.values());
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  LotteryPrice best{0.0, two_level_objective(profile, 0.0, false, 0.0, false, k, obj)};
  for (double p : candidates) {
    const double value = two_level_objective(profile, p, false, p, false, k, obj);
    if (detail::strictly_better(value, best.value)) {
      best = {p, value};
    }
  }
  return best;
}

namespace {

double best_scaled_order_statistic(const ValuationProfile &profile, std::size_t from, std::size_t to)
{
  double best = 0.0;
  for (std::size_t i = from; i <= to && i <= profile.size(); ++i) {
    best = std::max(best, static_cast<double>(i) * profile.order_statistic(i));
  }
  return best;
}

}  // namespace

double profit_bm(const ValuationProfile &profile) { return best_scaled_order_statistic(profile, 1, profile.size()); }

double profit_bm2(const ValuationProfile &profile)
{
  if (profile.size() < 2) {
    throw DomainError("bm2 needs at least two agents");
  }
  return best_scaled_order_statistic(profile, 2, profile.size());
}

double profit_ofs(const ValuationProfile &profile, int k)
{
  if (k < 2) {
    throw DomainError("ofs needs k >= 2");
  }
  return best_scaled_order_statistic(profile, 2, static_cast<std::size_t>(k));
}

ProfitBenchmarks profit_benchmarks(const ValuationProfile &profile, int k)
{
  return {profit_bm(profile), profit_bm2(profile), profit_ofs(profile, k)};
}

ValuationProfile truncate_profile(const ValuationProfile &profile)
{
  if (profile.size() < 2) {
    throw DomainError("truncation needs at least two agents");
  }
  std::vector<double> values(profile.values());
  values[profile.order().front()] = profile.order_statistic(2);
  return ValuationProfile(std::move(values));
}

}  // namespace pfd
