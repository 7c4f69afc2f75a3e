#include <algorithm>
#include <functional>

#include "pfd/errors.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

IronedThresholds ironed_thresholds(const ValuationProfile &profile, const IronedVirtualFunction &fn, int k)
{
  if (k < 1) {
    throw DomainError("number of units must be at least 1");
  }
  const MixedDistribution &dist = fn.distribution();
  std::vector<double> levels(profile.size());
  std::vector<double> eligible;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double v = profile[i];
    if (v < dist.support_min() || v > dist.upper_support()) {
      throw DomainError("profile value outside the distribution's support");
    }
    levels[i] = fn(v);
    if (levels[i] >= 0.0) {
      eligible.push_back(levels[i]);
    }
  }

  IronedThresholds out;
  out.tiers.assign(profile.size(), detail::Tier::rejected);
  const auto units = static_cast<std::size_t>(k);
  if (eligible.size() <= units) {
    out.p = out.q = fn.threshold_at_least(0.0);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (levels[i] >= 0.0) {
        out.tiers[i] = detail::Tier::upper;
      }
    }
    return out;
  }

  std::sort(eligible.begin(), eligible.end(), std::greater<>());
  const double marginal = eligible[units - 1];
  const auto at_or_above = static_cast<std::size_t>(
      std::count_if(eligible.begin(), eligible.end(), [&](double x) { return x >= marginal; }));
  // When the marginal group fits exactly, the next level down competes for
  // nothing but still sets the price of the sure winners.
  const double ref = at_or_above > units ? marginal : eligible[units];
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (levels[i] > ref) {
      out.tiers[i] = detail::Tier::upper;
    } else if (levels[i] == ref) {
      out.tiers[i] = detail::Tier::lower;
    }
  }
  out.p = fn.threshold_above(ref);
  out.q = fn.threshold_at_least(ref);
  return out;
}

ExpectedOutcome run_ironed_maximizer(const ValuationProfile &profile, const IronedVirtualFunction &fn, int k)
{
  const IronedThresholds th = ironed_thresholds(profile, fn, k);
  return detail::tiered_lottery(th.tiers, th.p, th.q, k);
}

}  // namespace pfd
