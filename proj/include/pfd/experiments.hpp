#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfd/benchmarks.hpp"
#include "pfd/distributions.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

struct Estimate
{
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Draws are made in fixed-size chunks; chunk c uses RngStream::substream(seed, c)
/// so results are identical for any worker count.
inline constexpr std::size_t kChunkSize = 4096;

/// Monte Carlo estimates of `columns` quantities that `draw` writes for each
/// sample. All columns share the same random draws.
std::vector<Estimate> mc_columns(std::size_t samples, std::uint64_t seed, std::size_t columns,
                                 const std::function<void(RngStream &, double *)> &draw);

Estimate mc_scalar(std::size_t samples, std::uint64_t seed, const std::function<double(RngStream &)> &draw);

ValuationProfile sample_profile(const MixedDistribution &dist, std::size_t n, RngStream &rng);

/// E[objective of mech] over n i.i.d. draws from dist.
Estimate mc_expectation(const MechanismSpec &mech, const MixedDistribution &dist, std::size_t n, const Objective &obj,
                        std::size_t samples, std::uint64_t seed);

/// E[benchmark] over n i.i.d. draws from dist.
Estimate expected_benchmark(const MixedDistribution &dist, std::size_t n, int k, const Objective &obj,
                            std::size_t samples, std::uint64_t seed);

struct AdoptionReport
{
  Estimate benchmark;
  Estimate mechanism;
  double advantage = 0.0;  // benchmark mean / mechanism mean
};

/// Benchmark and mechanism estimated on the same profiles.
AdoptionReport adoption_advantage(const MechanismSpec &mech, const MixedDistribution &dist, std::size_t n, int k,
                                  const Objective &obj, std::size_t samples, std::uint64_t seed);

// Worst-case ratios -------------------------------------------------------------

struct RatioCell
{
  ValuationProfile profile;
  double mechanism = 0.0;
  double benchmark = 0.0;
  double ratio = 1.0;
};

struct RatioReport
{
  double worst_ratio = 0.0;
  ValuationProfile argmax_profile;
  std::string grid_spec;
  std::vector<RatioCell> cells;
};

/// benchmark / mechanism; +inf when only the mechanism is zero, 1 when both are.
double performance_ratio(double benchmark_value, double mechanism_value);

RatioReport worst_case_ratio_grid(const MechanismSpec &mech, int k, const Objective &obj,
                                  const std::vector<ValuationProfile> &grid, const std::string &grid_spec = "",
                                  const EvalOptions &options = {});

/// All pairs (a, b) with a, b on `points` evenly spaced values covering [lo, hi].
std::vector<ValuationProfile> pair_grid(double lo, double hi, std::size_t points);

/// Profiles with n uniform in [n_min, n_max] and log-uniform values in [lo, hi].
std::vector<ValuationProfile> random_profiles(std::size_t count, std::size_t n_min, std::size_t n_max, double lo,
                                              double hi, std::uint64_t seed);

// Balanced sampling ---------------------------------------------------------------

/// in_sample[r] tells whether the agent of rank r + 1 is in the sample.
bool balanced_check(std::span<const bool> in_sample);
bool balanced_check(const std::vector<bool> &in_sample);

Estimate balanced_probability(std::size_t n, std::size_t trials, std::uint64_t seed);

/// Exact probability by dynamic programming over the prefix sample count.
double balanced_probability_exact(std::size_t n);

struct RuinRoot
{
  double root = 0.0;
  double cube = 0.0;
  double bound = 0.0;  // (1 - 2 r^3) / 4
};

/// Root of r^4 - 2r + 1 in (0, 1).
RuinRoot ruin_root();

// Two-agent exponential bound -----------------------------------------------------

/// E[bm | min of the two values = v] = v + (1 + e^-v) / 2.
double exponential_benchmark_conditional(double v);
/// The same conditional expectation integrated numerically over the gap.
double exponential_benchmark_conditional_numeric(double v);
/// Integral of the conditional against the density 2 e^{-2v} of the minimum.
double exponential_benchmark_integral();
/// Same integral with the numeric conditional as integrand.
double exponential_benchmark_integral_nested();

// Standard-auction lower bound ------------------------------------------------------

struct LowerBoundReport
{
  int beta = 2;
  std::size_t n = 0;
  std::vector<Estimate> special_lottery;  // j beta lottery under F_j, per j
  std::vector<double> price_grid;
  std::vector<Estimate> randomized;  // p-lottery averaged over j, per price
  double best_special = 0.0;
  double best_randomized = 0.0;
  double best_randomized_price = 0.0;
  double separation = 0.0;
};

/// Expected virtual surplus of single-unit one-level lotteries on the
/// lb_family(beta) distributions with n agents.
LowerBoundReport lb_standard_auctions(int beta, std::size_t n, std::size_t trials, std::uint64_t seed,
                                      std::vector<double> price_grid = {});

/// Residual-surplus Monte Carlo of the p-lottery, k = 1, for cross-checking
/// the virtual surplus estimates.
Estimate lottery_residual_surplus(const MixedDistribution &dist, std::size_t n, double p, std::size_t trials,
                                  std::uint64_t seed);

// Profit comparisons ----------------------------------------------------------------

/// True when p (1 - F(p)) / F(p) is non-increasing on `grid_points` interior
/// quantiles, with relative slack 1e-9.
bool inscribed_triangle_check(const MixedDistribution &dist, std::size_t grid_points = 2000);

/// Exponential pieces with mean 0.25 on [0, 1) and mean 100 above: most of
/// the monopoly revenue sits in a thin tail.
MixedDistribution thin_tail_distribution();

struct MonopolyPrice
{
  double price = 0.0;
  double revenue = 0.0;
};

/// argmax_p p (1 - F(p-)) by quantile grid search refined with Brent's method.
MonopolyPrice monopoly_price(const MixedDistribution &dist);

struct VickreyMonopolyReport
{
  Estimate vickrey;          // Monte Carlo E[min of two draws]
  double vickrey_exact = 0.0;
  double monopoly = 0.0;
  bool holds = false;  // vickrey.mean >= monopoly - 3 stderr
};

VickreyMonopolyReport vickrey2_vs_monopoly(const MixedDistribution &dist, std::size_t samples, std::uint64_t seed);

struct ProfitComparison
{
  Estimate bm2;
  Estimate myerson;
  bool holds = false;  // bm2 >= myerson - 3 combined stderr
};

/// Digital goods: E[bm2] against posting the monopoly price to every agent.
ProfitComparison bm2_vs_myerson_profit(const MixedDistribution &dist, std::size_t n, std::size_t samples,
                                       std::uint64_t seed);

// RSOL analysis ---------------------------------------------------------------------

enum class ProfileFamily
{
  ones_then_zeros,  // (1, 1, 0, ..., 0)
  geometric,        // (1, 1/2, 1/4, ...)
  uniform_grid,     // (n, n - 1, ..., 1) / n
  all_equal,        // (1, ..., 1)
  random,           // log-uniform values in [1e-2, 1e2]
};

std::string family_name(ProfileFamily family);
ProfileFamily parse_family(const std::string &name);
ValuationProfile family_profile(ProfileFamily family, std::size_t n);

struct RsolCell
{
  std::string family;
  std::size_t n = 0;
  int k = 1;
  ValuationProfile profile;
  double benchmark = 0.0;
  double platform = 0.0;
  double rsol = 0.0;
  double ratio = 0.0;       // benchmark / platform
  double rsol_ratio = 0.0;  // benchmark / rsol
  bool exact = false;
};

struct RsolSweepReport
{
  double worst_ratio = 0.0;
  ValuationProfile argmax_profile;
  std::vector<RsolCell> cells;
};

/// benchmark / thm_worst_platform(k) over the families. `trials` random
/// profiles are drawn for the random family at each (n, k).
RsolSweepReport rsol_ratio_sweep(const std::vector<std::size_t> &n_list, const std::vector<int> &k_list,
                                 const std::vector<ProfileFamily> &families, std::size_t trials, std::uint64_t seed,
                                 std::size_t rsol_samples = 4096);

struct StepCheck
{
  std::size_t balanced_partitions = 0;
  double conditional_sample_value = 0.0;  // E[L_opt(S) | balanced]
  double truncated_optimum = 0.0;         // L_opt(v^(2))
  double worst_market_to_sample = 0.0;    // min over partitions, prices of L_p(M) / L_p(S)
  bool step1 = false;
  bool step2 = false;
};

/// Enumerates every market/sample split of the truncated profile (n <= 20)
/// and checks both proof steps on the balanced ones. Ranks follow the
/// descending order of the original profile.
StepCheck rsol_step_checks(const ValuationProfile &profile, int k);

}  // namespace pfd
