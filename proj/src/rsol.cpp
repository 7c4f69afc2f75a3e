#include <algorithm>
#include <cmath>
#include <map>

#include "pfd/errors.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

ExpectedOutcome run_rsol(const ValuationProfile &profile, int k, RngStream &rng)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
  std::vector<bool> in_sample(profile.size());
  std::vector<double> sample;
  std::vector<std::size_t> market;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    in_sample[i] = rng.coin();
    if (in_sample[i]) {
      sample.push_back(profile[i]);
    } else {
      market.push_back(i);
    }
  }
  const double price = optimal_lottery_price(sample, k).p;
  std::size_t s = 0;
  for (std::size_t i : market) {
    s += profile[i] > price ? 1 : 0;
  }
  ExpectedOutcome out = empty_outcome(profile.size(), k);
  if (s == 0) {
    return out;
  }
  const double share = std::min(1.0, static_cast<double>(k) / static_cast<double>(s));
  for (std::size_t i : market) {
    if (profile[i] > price) {
      out.alloc[i] = share;
      out.payment[i] = price * share;
    }
  }
  return out;
}

namespace {

struct ValueGroups
{
  std::vector<double> values;  // ascending, distinct
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> group_of;  // per agent
};

ValueGroups group_values(const ValuationProfile &profile)
{
  std::map<double, std::size_t> index;
  for (double v : profile.values()) {
    index.emplace(v, 0);
  }
  ValueGroups g;
  for (auto &[value, idx] : index) {
    idx = g.values.size();
    g.values.push_back(value);
  }
  g.sizes.assign(g.values.size(), 0);
  for (double v : profile.values()) {
    const std::size_t idx = index.at(v);
    g.group_of.push_back(idx);
    ++g.sizes[idx];
  }
  return g;
}

// Optimal lottery price of a sample given as counts per ascending distinct
// value. Same candidates and tie rule as optimal_lottery_price.
double grouped_lottery_price(const std::vector<double> &values, const std::vector<std::size_t> &counts, int k)
{
  const std::size_t m = values.size();
  std::vector<std::size_t> above(m + 1, 0);
  std::vector<double> above_sum(m + 1, 0.0);
  for (std::size_t g = m; g-- > 0;) {
    above[g] = above[g + 1] + counts[g];
    above_sum[g] = above_sum[g + 1] + static_cast<double>(counts[g]) * values[g];
  }
  auto value_at = [&](double p, std::size_t s, double sum) {
    if (s == 0) {
      return 0.0;
    }
    return (sum - static_cast<double>(s) * p) * std::min(1.0, static_cast<double>(k) / static_cast<double>(s));
  };
  // Price 0 serves every positive value.
  const std::size_t first_positive = (m > 0 && values[0] == 0.0) ? 1 : 0;
  double best_p = 0.0;
  double best = value_at(0.0, above[first_positive], above_sum[first_positive]);
  for (std::size_t g = first_positive; g < m; ++g) {
    if (counts[g] == 0) {
      continue;
    }
    const double value = value_at(values[g], above[g + 1], above_sum[g + 1]);
    if (detail::strictly_better(value, best)) {
      best = value;
      best_p = values[g];
    }
  }
  return best_p;
}

}  // namespace

double rsol_exact_cost(const ValuationProfile &profile)
{
  const ValueGroups groups = group_values(profile);
  double cost = 1.0;
  for (std::size_t m : groups.sizes) {
    cost *= static_cast<double>(m + 1);
  }
  return cost;
}

ExpectedOutcome rsol_exact(const ValuationProfile &profile, int k)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
  if (rsol_exact_cost(profile) > kRsolExactLimit) {
    throw DomainError("profile too large for exact RSOL enumeration");
  }
  const ValueGroups groups = group_values(profile);
  const std::size_t m = groups.values.size();
  std::vector<std::vector<double>> binom(m);
  for (std::size_t g = 0; g < m; ++g) {
    binom[g].assign(groups.sizes[g] + 1, 1.0);
    for (std::size_t c = 1; c <= groups.sizes[g]; ++c) {
      binom[g][c] = binom[g][c - 1] * static_cast<double>(groups.sizes[g] - c + 1) / static_cast<double>(c);
    }
  }
  const double scale = std::ldexp(1.0, -static_cast<int>(profile.size()));

  std::vector<double> group_alloc(m, 0.0);
  std::vector<double> group_pay(m, 0.0);
  std::vector<std::size_t> counts(m, 0);
  while (true) {
    double weight = scale;
    for (std::size_t g = 0; g < m; ++g) {
      weight *= binom[g][counts[g]];
    }
    const double price = grouped_lottery_price(groups.values, counts, k);
    std::size_t s = 0;
    for (std::size_t g = 0; g < m; ++g) {
      if (groups.values[g] > price) {
        s += groups.sizes[g] - counts[g];
      }
    }
    if (s > 0) {
      const double share = std::min(1.0, static_cast<double>(k) / static_cast<double>(s));
      for (std::size_t g = 0; g < m; ++g) {
        if (groups.values[g] > price && counts[g] < groups.sizes[g]) {
          const double in_market =
              static_cast<double>(groups.sizes[g] - counts[g]) / static_cast<double>(groups.sizes[g]);
          group_alloc[g] += weight * in_market * share;
          group_pay[g] += weight * in_market * share * price;
        }
      }
    }
    std::size_t g = 0;
    while (g < m && counts[g] == groups.sizes[g]) {
      counts[g] = 0;
      ++g;
    }
    if (g == m) {
      break;
    }
    ++counts[g];
  }

  ExpectedOutcome out = empty_outcome(profile.size(), k);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.alloc[i] = group_alloc[groups.group_of[i]];
    out.payment[i] = group_pay[groups.group_of[i]];
  }
  return out;
}

MechanismSpec thm_worst_platform(int k)
{
  MixtureSpec mix;
  mix.components.push_back({107.0 / 108.0, RsolSpec{k}});
  mix.components.push_back({1.0 / 108.0, VickreySpec{k}});
  return mix;
}

}  // namespace pfd
