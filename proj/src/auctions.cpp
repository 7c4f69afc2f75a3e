#include <algorithm>
#include <array>
#include <cmath>

#include "pfd/errors.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

ExpectedOutcome run_vickrey(const ValuationProfile &profile, int k)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
  ExpectedOutcome out = empty_outcome(profile.size(), k);
  const auto units = static_cast<std::size_t>(k);
  if (profile.size() <= units) {
    std::fill(out.alloc.begin(), out.alloc.end(), 1.0);
    return out;
  }
  const double price = profile.sorted()[units];
  std::size_t above = 0;
  std::size_t tied = 0;
  for (double v : profile.values()) {
    above += v > price ? 1 : 0;
    tied += v == price ? 1 : 0;
  }
  const double share = static_cast<double>(units - above) / static_cast<double>(tied);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] > price) {
      out.alloc[i] = 1.0;
      out.payment[i] = price;
    } else if (profile[i] == price) {
      out.alloc[i] = share;
      out.payment[i] = price * share;
    }
  }
  return out;
}

namespace {

struct Branch
{
  double x1 = 0.0;
  double x2 = 0.0;
  double pay1 = 0.0;
  double pay2 = 0.0;
};

// Weighted Vickrey with w_1 = 1. Equal weighted bids go to the agent with the
// lower value; equal values split the unit.
Branch weighted_vickrey(double v1, double v2, double w2)
{
  int sign = 0;
  if (std::isinf(w2)) {
    sign = v2 > 0.0 ? -1 : 0;
  } else if (w2 == 0.0) {
    sign = v1 > 0.0 ? 1 : 0;
  } else {
    const double score2 = w2 * v2;
    sign = v1 > score2 ? 1 : (v1 < score2 ? -1 : 0);
  }
  if (sign == 0) {
    sign = v1 < v2 ? 1 : (v1 > v2 ? -1 : 0);
  }
  const double threshold1 = (w2 == 0.0 || v2 == 0.0) ? 0.0 : w2 * v2;
  const double threshold2 = (v1 == 0.0 || std::isinf(w2)) ? 0.0 : v1 / w2;
  Branch out;
  if (sign > 0) {
    out.x1 = 1.0;
    out.pay1 = threshold1;
  } else if (sign < 0) {
    out.x2 = 1.0;
    out.pay2 = threshold2;
  } else {
    out.x1 = out.x2 = 0.5;
    out.pay1 = 0.5 * threshold1;
    out.pay2 = 0.5 * threshold2;
  }
  return out;
}

}  // namespace

ExpectedOutcome run_ratio_auction(const ValuationProfile &profile, double r, double b)
{
  if (profile.size() != 2) {
    throw DomainError("ratio auction needs exactly two agents");
  }
  if (!(r >= 1.0) || std::isinf(r) || !(b >= 0.5 && b <= 1.0)) {
    throw DomainError("ratio auction needs r >= 1 and b in [1/2, 1]");
  }
  const std::array<double, 4> weights = {0.0, 1.0 / r, r, kInfinity};
  const std::array<double, 4> probs = {1.0 - b, b - 0.5, b - 0.5, 1.0 - b};
  ExpectedOutcome out = empty_outcome(2, 1);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (probs[j] == 0.0) {
      continue;
    }
    const Branch br = weighted_vickrey(profile[0], profile[1], weights[j]);
    out.alloc[0] += probs[j] * br.x1;
    out.alloc[1] += probs[j] * br.x2;
    out.payment[0] += probs[j] * br.pay1;
    out.payment[1] += probs[j] * br.pay2;
  }
  return out;
}

namespace {

void require_posting_range(double h)
{
  if (!(h >= 1.0) || std::isinf(h)) {
    throw DomainError("random price posting needs a finite h >= 1");
  }
}

}  // namespace

ExpectedOutcome run_random_price_posting(const ValuationProfile &profile, double h)
{
  require_posting_range(h);
  const double norm = 1.0 + std::log(h);
  ExpectedOutcome out = empty_outcome(profile.size(), static_cast<int>(std::max<std::size_t>(profile.size(), 1)));
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] < 1.0) {
      continue;
    }
    const double capped = std::min(profile[i], h);
    out.alloc[i] = (1.0 + std::log(capped)) / norm;
    out.payment[i] = capped / norm;
  }
  return out;
}

double sample_posting_price(double h, RngStream &rng)
{
  require_posting_range(h);
  const double norm = 1.0 + std::log(h);
  const double u = rng.uniform();
  if (u * norm < 1.0) {
    return 1.0;
  }
  return std::min(h, std::exp(u * norm - 1.0));
}

double sample_posting_revenue(double v, double h, RngStream &rng)
{
  const double price = sample_posting_price(h, rng);
  return price <= v ? price : 0.0;
}

double expected_posting_revenue(double v, double h)
{
  require_posting_range(h);
  if (!(v >= 1.0 && v <= h)) {
    throw DomainError("posting revenue needs v in [1, h]");
  }
  return v / (1.0 + std::log(h));
}

}  // namespace pfd
