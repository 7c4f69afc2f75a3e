#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "pfd/ironing.hpp"
#include "pfd/profile.hpp"
#include "pfd/rng.hpp"

namespace pfd {

/// Allocation probabilities and expected payments, averaged over the
/// mechanism's internal randomness.
struct ExpectedOutcome
{
  std::vector<double> alloc;
  std::vector<double> payment;
  int units = 1;

  std::size_t size() const { return alloc.size(); }
  double total_alloc() const;
};

ExpectedOutcome empty_outcome(std::size_t n, int units);

struct LotterySpec
{
  int k = 1;
};

struct OneLevelLotterySpec
{
  double p = 0.0;
  int k = 1;
};

struct TwoLevelLotterySpec
{
  double p = 0.0;
  double q = 0.0;
  int k = 1;
};

struct VickreySpec
{
  int k = 1;
};

struct RatioAuctionSpec
{
  double r = 2.0;
  double b = 0.75;
};

struct IronedMaximizerSpec
{
  std::shared_ptr<const IronedVirtualFunction> ironed;
  int k = 1;
};

struct RsolSpec
{
  int k = 1;
};

struct RandomPricePostingSpec
{
  double h = 10.0;
};

struct MixtureComponent;

struct MixtureSpec
{
  std::vector<MixtureComponent> components;
};

using MechanismSpec = std::variant<LotterySpec, OneLevelLotterySpec, TwoLevelLotterySpec, VickreySpec,
                                   RatioAuctionSpec, IronedMaximizerSpec, RsolSpec, MixtureSpec,
                                   RandomPricePostingSpec>;

struct MixtureComponent
{
  double weight = 1.0;
  MechanismSpec mechanism;
};

/// Throws ConstructionError when the spec violates its invariants.
void validate(const MechanismSpec &spec);
std::string mechanism_name(const MechanismSpec &spec);

// Lotteries -----------------------------------------------------------------

/// k units shared uniformly among all n agents at price zero.
ExpectedOutcome run_lottery(const ValuationProfile &profile, int k);

/// S = {v > p} served first, then T = {q < v <= p} by uniform lottery for the
/// remaining units. p may be +inf.
ExpectedOutcome run_two_level_lottery(const ValuationProfile &profile, double p, double q, int k);

ExpectedOutcome run_one_level_lottery(const ValuationProfile &profile, double p, int k);

/// Residual surplus of the one-level p-lottery, without building an outcome.
double one_level_lottery_residual(const std::vector<double> &values, double p, int k);

struct LotteryPrice
{
  double p = 0.0;
  double value = 0.0;
};

/// Best one-level lottery price for residual surplus over {0} and the
/// profile's values; ties go to the smallest price. Empty input gives (0, 0).
LotteryPrice optimal_lottery_price(const std::vector<double> &values, int k);
LotteryPrice optimal_lottery_price(const ValuationProfile &profile, int k);

namespace detail {

enum class Tier : unsigned char
{
  rejected,
  lower,
  upper
};

struct TierTerms
{
  double upper_alloc = 0.0;
  double upper_pay = 0.0;
  double lower_alloc = 0.0;
  double lower_pay = 0.0;
};

/// Per-agent allocation and payment of each tier given tier sizes s and t.
TierTerms tier_terms(std::size_t s, std::size_t t, double p, double q, int k);

/// Two-level lottery outcome for agents already split into tiers; p and q are
/// the tier thresholds used for pricing.
ExpectedOutcome tiered_lottery(const std::vector<Tier> &tiers, double p, double q, int k);

/// Comparison used when searching candidate thresholds: values within a
/// relative 1e-12 count as ties and the earlier candidate is kept.
inline bool strictly_better(double value, double best)
{
  return value > best + 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace detail

// Auctions -------------------------------------------------------------------

/// (k+1)-th price auction; the marginal tie group shares the leftover units.
ExpectedOutcome run_vickrey(const ValuationProfile &profile, int k);

/// Two-agent ratio auction as a mixture of weighted Vickrey auctions with
/// w_1 = 1 and w_2 in {0, 1/r, r, inf} drawn with probabilities
/// {1 - b, b - 1/2, b - 1/2, 1 - b}. When the values differ by more than a
/// factor r the high agent wins with probability b, otherwise with 1/2.
ExpectedOutcome run_ratio_auction(const ValuationProfile &profile, double r, double b);

/// One unit per agent, each offered an independent price from
/// P(z) = (1 + ln z) / (1 + ln h) on [1, h].
ExpectedOutcome run_random_price_posting(const ValuationProfile &profile, double h);

/// Draws a price from the platform's distribution.
double sample_posting_price(double h, RngStream &rng);
/// Realized revenue from one agent with value v.
double sample_posting_revenue(double v, double h, RngStream &rng);
/// v / (1 + ln h); v must lie in [1, h].
double expected_posting_revenue(double v, double h);

// Ironed virtual surplus maximizer -------------------------------------------

struct IronedThresholds
{
  double p = kInfinity;
  double q = kInfinity;
  std::vector<detail::Tier> tiers;
};

/// Tiers and thresholds of the two-level lottery equivalent to serving the k
/// highest non-negative ironed virtual values with random tie-breaking.
IronedThresholds ironed_thresholds(const ValuationProfile &profile, const IronedVirtualFunction &fn, int k);

ExpectedOutcome run_ironed_maximizer(const ValuationProfile &profile, const IronedVirtualFunction &fn, int k);

// RSOL -------------------------------------------------------------------------

/// One draw: random market/sample split, the sample's optimal lottery price
/// run on the market, the sample rejected.
ExpectedOutcome run_rsol(const ValuationProfile &profile, int k, RngStream &rng);

/// Exact expectation over all 2^n splits, enumerated by how many agents of
/// each distinct value land in the sample.
ExpectedOutcome rsol_exact(const ValuationProfile &profile, int k);
/// Number of count vectors rsol_exact would enumerate.
double rsol_exact_cost(const ValuationProfile &profile);
inline constexpr double kRsolExactLimit = 1u << 20;

MechanismSpec thm_worst_platform(int k);

// Generic evaluation --------------------------------------------------------

struct EvalOptions
{
  /// Partitions averaged when RSOL is too large to enumerate.
  std::size_t rsol_samples = 4096;
  std::uint64_t seed = 0;
};

ExpectedOutcome evaluate(const MechanismSpec &spec, const ValuationProfile &profile, const EvalOptions &options = {});

ExpectedOutcome run_mixture(const ValuationProfile &profile, const MixtureSpec &mixture,
                            const EvalOptions &options = {});

/// sum_i alpha v_i x_i + beta p_i
double objective_value(const ExpectedOutcome &outcome, const ValuationProfile &profile, const Objective &obj);

}  // namespace pfd
