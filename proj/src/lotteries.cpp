#include <algorithm>
#include <cmath>

#include "pfd/errors.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

double ExpectedOutcome::total_alloc() const
{
  double total = 0.0;
  for (double x : alloc) {
    total += x;
  }
  return total;
}

ExpectedOutcome empty_outcome(std::size_t n, int units)
{
  ExpectedOutcome out;
  out.alloc.assign(n, 0.0);
  out.payment.assign(n, 0.0);
  out.units = units;
  return out;
}

namespace {

void require_units(int k)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
}

}  // namespace

namespace detail {

TierTerms tier_terms(std::size_t s, std::size_t t, double p, double q, int k)
{
  require_units(k);
  const auto units = static_cast<std::size_t>(k);
  TierTerms out;
  if (s + t <= units) {
    out.upper_alloc = out.lower_alloc = 1.0;
    out.upper_pay = out.lower_pay = q;
  } else if (s <= units) {
    const double left = static_cast<double>(units - s);
    out.upper_alloc = 1.0;
    if (s > 0) {
      out.upper_pay = p - (p - q) * (left + 1.0) / (static_cast<double>(t) + 1.0);
    }
    out.lower_alloc = left / static_cast<double>(t);
    out.lower_pay = q * out.lower_alloc;
  } else {
    out.upper_alloc = static_cast<double>(units) / static_cast<double>(s);
    out.upper_pay = p * out.upper_alloc;
  }
  return out;
}

ExpectedOutcome tiered_lottery(const std::vector<Tier> &tiers, double p, double q, int k)
{
  std::size_t s = 0;
  std::size_t t = 0;
  for (Tier tier : tiers) {
    s += tier == Tier::upper ? 1 : 0;
    t += tier == Tier::lower ? 1 : 0;
  }
  const TierTerms terms = tier_terms(s, t, p, q, k);
  ExpectedOutcome out = empty_outcome(tiers.size(), k);
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    if (tiers[i] == Tier::upper) {
      out.alloc[i] = terms.upper_alloc;
      out.payment[i] = terms.upper_pay;
    } else if (tiers[i] == Tier::lower && terms.lower_alloc > 0.0) {
      out.alloc[i] = terms.lower_alloc;
      out.payment[i] = terms.lower_pay;
    }
  }
  return out;
}

}  // namespace detail

ExpectedOutcome run_lottery(const ValuationProfile &profile, int k)
{
  require_units(k);
  ExpectedOutcome out = empty_outcome(profile.size(), k);
  if (profile.empty()) {
    return out;
  }
  const double share = std::min(1.0, static_cast<double>(k) / static_cast<double>(profile.size()));
  std::fill(out.alloc.begin(), out.alloc.end(), share);
  return out;
}

ExpectedOutcome run_two_level_lottery(const ValuationProfile &profile, double p, double q, int k)
{
  if (std::isnan(p) || std::isnan(q) || q < 0.0 || p < q) {
    throw DomainError("two-level lottery needs p >= q >= 0");
  }
  std::vector<detail::Tier> tiers(profile.size(), detail::Tier::rejected);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] > p) {
      tiers[i] = detail::Tier::upper;
    } else if (profile[i] > q) {
      tiers[i] = detail::Tier::lower;
    }
  }
  return detail::tiered_lottery(tiers, p, q, k);
}

ExpectedOutcome run_one_level_lottery(const ValuationProfile &profile, double p, int k)
{
  return run_two_level_lottery(profile, p, p, k);
}

double one_level_lottery_residual(const std::vector<double> &values, double p, int k)
{
  require_units(k);
  std::size_t s = 0;
  double gain = 0.0;
  for (double v : values) {
    if (v > p) {
      ++s;
      gain += v - p;
    }
  }
  if (s == 0) {
    return 0.0;
  }
  return gain * std::min(1.0, static_cast<double>(k) / static_cast<double>(s));
}

LotteryPrice optimal_lottery_price(const std::vector<double> &values, int k)
{
  require_units(k);
  std::vector<double> candidates(values);
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  LotteryPrice best{0.0, one_level_lottery_residual(values, 0.0, k)};
  for (double p : candidates) {
    const double value = one_level_lottery_residual(values, p, k);
    if (detail::strictly_better(value, best.value)) {
      best = {p, value};
    }
  }
  return best;
}

LotteryPrice optimal_lottery_price(const ValuationProfile &profile, int k)
{
  return optimal_lottery_price(profile.values(), k);
}

}  // namespace pfd
