#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfd/errors.hpp"
#include "pfd/experiments.hpp"

namespace pfd {

double performance_ratio(double benchmark_value, double mechanism_value)
{
  if (mechanism_value > 0.0) {
    return benchmark_value / mechanism_value;
  }
  return benchmark_value > 0.0 ? kInfinity : 1.0;
}

RatioReport worst_case_ratio_grid(const MechanismSpec &mech, int k, const Objective &obj,
                                  const std::vector<ValuationProfile> &grid, const std::string &grid_spec,
                                  const EvalOptions &options)
{
  validate(mech);
  RatioReport report;
  report.grid_spec = grid_spec;
  report.cells = parallel_map<RatioCell>(grid.size(), [&](std::size_t i) {
    RatioCell cell;
    cell.profile = grid[i];
    EvalOptions local = options;
    local.seed = RngStream::substream(options.seed, i).bits();
    cell.mechanism = objective_value(evaluate(mech, grid[i], local), grid[i], obj);
    cell.benchmark = benchmark(grid[i], k, obj).value;
    cell.ratio = performance_ratio(cell.benchmark, cell.mechanism);
    return cell;
  });
  for (const auto &cell : report.cells) {
    if (report.argmax_profile.empty() || cell.ratio > report.worst_ratio) {
      report.worst_ratio = cell.ratio;
      report.argmax_profile = cell.profile;
    }
  }
  return report;
}

std::vector<ValuationProfile> pair_grid(double lo, double hi, std::size_t points)
{
  if (points < 2 || !(hi > lo) || lo < 0.0) {
    throw DomainError("pair grid needs 0 <= lo < hi and at least two points");
  }
  std::vector<double> axis(points);
  for (std::size_t i = 0; i < points; ++i) {
    axis[i] = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  std::vector<ValuationProfile> grid;
  grid.reserve(points * points);
  for (double a : axis) {
    for (double b : axis) {
      grid.emplace_back(std::vector<double>{a, b});
    }
  }
  return grid;
}

std::vector<ValuationProfile> random_profiles(std::size_t count, std::size_t n_min, std::size_t n_max, double lo,
                                              double hi, std::uint64_t seed)
{
  if (n_min < 1 || n_max < n_min || !(lo > 0.0) || !(hi >= lo)) {
    throw DomainError("random profiles need 1 <= n_min <= n_max and 0 < lo <= hi");
  }
  RngStream rng(seed);
  const double log_lo = std::log(lo);
  const double log_span = std::log(hi) - log_lo;
  std::vector<ValuationProfile> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t n = n_min + static_cast<std::size_t>(rng.below(n_max - n_min + 1));
    std::vector<double> values(n);
    for (double &v : values) {
      v = std::exp(log_lo + rng.uniform() * log_span);
    }
    out.emplace_back(std::move(values));
  }
  return out;
}

// RSOL analysis ---------------------------------------------------------------------

std::string family_name(ProfileFamily family)
{
  switch (family) {
  case ProfileFamily::ones_then_zeros:
    return "ones_then_zeros";
  case ProfileFamily::geometric:
    return "geometric";
  case ProfileFamily::uniform_grid:
    return "uniform_grid";
  case ProfileFamily::all_equal:
    return "all_equal";
  case ProfileFamily::random:
    return "random";
  }
  return "unknown";
}

ProfileFamily parse_family(const std::string &name)
{
  for (auto f : {ProfileFamily::ones_then_zeros, ProfileFamily::geometric, ProfileFamily::uniform_grid,
                 ProfileFamily::all_equal, ProfileFamily::random}) {
    if (family_name(f) == name) {
      return f;
    }
  }
  throw DomainError("unknown profile family '" + name + "'");
}

ValuationProfile family_profile(ProfileFamily family, std::size_t n)
{
  if (n < 1) {
    throw DomainError("profile family needs n >= 1");
  }
  std::vector<double> values(n, 0.0);
  switch (family) {
  case ProfileFamily::ones_then_zeros:
    values[0] = 1.0;
    if (n > 1) {
      values[1] = 1.0;
    }
    break;
  case ProfileFamily::geometric:
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = std::ldexp(1.0, -static_cast<int>(i));
    }
    break;
  case ProfileFamily::uniform_grid:
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = static_cast<double>(n - i) / static_cast<double>(n);
    }
    break;
  case ProfileFamily::all_equal:
    std::fill(values.begin(), values.end(), 1.0);
    break;
  case ProfileFamily::random:
    throw DomainError("random family profiles need a seed");
  }
  return ValuationProfile(std::move(values));
}

RsolSweepReport rsol_ratio_sweep(const std::vector<std::size_t> &n_list, const std::vector<int> &k_list,
                                 const std::vector<ProfileFamily> &families, std::size_t trials, std::uint64_t seed,
                                 std::size_t rsol_samples)
{
  RsolSweepReport report;
  std::uint64_t stream = 0;
  for (std::size_t n : n_list) {
    for (int k : k_list) {
      if (k < 1 || static_cast<std::size_t>(k) > n) {
        continue;
      }
      for (ProfileFamily family : families) {
        std::vector<ValuationProfile> profiles;
        if (family == ProfileFamily::random) {
          profiles = random_profiles(trials, n, n, 1e-2, 1e2, RngStream::substream(seed, stream++).bits());
        } else {
          profiles.push_back(family_profile(family, n));
        }
        for (auto &p : profiles) {
          RsolCell cell;
          cell.family = family_name(family);
          cell.n = n;
          cell.k = k;
          cell.profile = std::move(p);
          report.cells.push_back(std::move(cell));
        }
      }
    }
  }
  const Objective obj = Objective::residual_surplus();
  report.cells = parallel_map<RsolCell>(report.cells.size(), [&](std::size_t i) {
    RsolCell cell = report.cells[i];
    const ValuationProfile &profile = cell.profile;
    cell.exact = rsol_exact_cost(profile) <= kRsolExactLimit;
    EvalOptions options;
    options.rsol_samples = rsol_samples;
    options.seed = RngStream::substream(seed ^ 0x5eedULL, i).bits();
    cell.rsol = objective_value(evaluate(RsolSpec{cell.k}, profile, options), profile, obj);
    const double vickrey = objective_value(run_vickrey(profile, cell.k), profile, obj);
    cell.platform = 107.0 / 108.0 * cell.rsol + 1.0 / 108.0 * vickrey;
    cell.benchmark = benchmark(profile, cell.k, obj).value;
    cell.ratio = performance_ratio(cell.benchmark, cell.platform);
    cell.rsol_ratio = performance_ratio(cell.benchmark, cell.rsol);
    return cell;
  });
  for (const auto &cell : report.cells) {
    if (report.argmax_profile.empty() || cell.ratio > report.worst_ratio) {
      report.worst_ratio = cell.ratio;
      report.argmax_profile = cell.profile;
    }
  }
  return report;
}

StepCheck rsol_step_checks(const ValuationProfile &profile, int k)
{
  const std::size_t n = profile.size();
  if (n < 2 || n > 20) {
    throw DomainError("step checks need 2 <= n <= 20");
  }
  const ValuationProfile truncated = truncate_profile(profile);
  std::vector<double> ranked(n);
  for (std::size_t r = 0; r < n; ++r) {
    ranked[r] = truncated[profile.order()[r]];
  }
  std::vector<double> prices(ranked);
  prices.push_back(0.0);
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

  StepCheck out;
  out.truncated_optimum = optimal_lottery_price(truncated, k).value;
  out.worst_market_to_sample = kInfinity;
  out.step2 = true;
  double sample_total = 0.0;
  std::vector<bool> in_sample(n);
  std::vector<double> sample;
  std::vector<double> market;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t r = 0; r < n; ++r) {
      in_sample[r] = ((mask >> r) & 1u) != 0;
    }
    if (!balanced_check(in_sample)) {
      continue;
    }
    ++out.balanced_partitions;
    sample.clear();
    market.clear();
    for (std::size_t r = 0; r < n; ++r) {
      (in_sample[r] ? sample : market).push_back(ranked[r]);
    }
    sample_total += optimal_lottery_price(sample, k).value;
    for (double p : prices) {
      const double on_sample = one_level_lottery_residual(sample, p, k);
      if (on_sample <= 0.0) {
        continue;
      }
      const double on_market = one_level_lottery_residual(market, p, k);
      out.worst_market_to_sample = std::min(out.worst_market_to_sample, on_market / on_sample);
      if (on_market < on_sample / 9.0 - 1e-12 * std::max(1.0, on_sample)) {
        out.step2 = false;
      }
    }
  }
  if (out.balanced_partitions > 0) {
    out.conditional_sample_value = sample_total / static_cast<double>(out.balanced_partitions);
  }
  out.step1 = out.conditional_sample_value >= out.truncated_optimum / 2.0 - 1e-12 * std::max(1.0, out.truncated_optimum);
  return out;
}

}  // namespace pfd
