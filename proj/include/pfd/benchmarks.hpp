#pragma once

#include "pfd/ironing.hpp"
#include "pfd/mechanisms.hpp"
#include "pfd/profile.hpp"

namespace pfd {

/// Best two-level lottery at a profile. The thresholds are reported as values;
/// an inclusive flag marks a limit from below (the tier takes agents with
/// v >= threshold but the price is still the threshold), which is how profit
/// attains its supremum.
struct BenchmarkResult
{
  double value = 0.0;
  double argmax_p = 0.0;
  double argmax_q = 0.0;
  bool p_inclusive = false;
  bool q_inclusive = false;
  Objective objective;
};

/// Objective of the two-level lottery whose tiers are {v > p} (or v >= p when
/// inclusive) and {q < v <= p} analogously, priced at p and q.
double two_level_objective(const ValuationProfile &profile, double p, bool p_inclusive, double q, bool q_inclusive,
                           int k, const Objective &obj);

/// Exhaustive search over thresholds in {0} U values U {inf}, q <= p. Ties go
/// to the smallest (p, q), attained thresholds before limits.
BenchmarkResult benchmark(const ValuationProfile &profile, int k, const Objective &obj = Objective::residual_surplus());

/// max{(v1 + v2)/2, v_(1) - v_(2)/2}
double benchmark_n2_closed_form(double v1, double v2);

/// Best one-level lottery over p in {0} U values; ties to the smallest p.
LotteryPrice best_one_level_lottery(const ValuationProfile &profile, int k,
                                    const Objective &obj = Objective::residual_surplus());

struct ProfitBenchmarks
{
  double bm = 0.0;
  double bm2 = 0.0;
  double ofs = 0.0;
};

/// max_i i v_(i)
double profit_bm(const ValuationProfile &profile);
/// max_{i >= 2} i v_(i); needs n >= 2.
double profit_bm2(const ValuationProfile &profile);
/// max_{2 <= i <= k} i v_(i); needs k >= 2.
double profit_ofs(const ValuationProfile &profile, int k);
ProfitBenchmarks profit_benchmarks(const ValuationProfile &profile, int k);

/// Replaces the highest value by the second highest.
ValuationProfile truncate_profile(const ValuationProfile &profile);

}  // namespace pfd
