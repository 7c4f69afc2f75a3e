#include "pfd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "pfd/errors.hpp"

namespace pfd {

namespace {

struct Moments
{
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x)
  {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments &other)
  {
    if (other.count == 0) {
      return;
    }
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
  }
};

Estimate to_estimate(const Moments &m, std::uint64_t seed)
{
  Estimate e;
  e.mean = m.mean;
  e.samples = m.count;
  e.seed = seed;
  if (m.count > 1) {
    e.std_error = std::sqrt(std::max(0.0, m.m2) / static_cast<double>(m.count - 1) / static_cast<double>(m.count));
  }
  return e;
}

}  // namespace

std::vector<Estimate> mc_columns(std::size_t samples, std::uint64_t seed, std::size_t columns,
                                 const std::function<void(RngStream &, double *)> &draw)
{
  if (samples == 0) {
    throw DomainError("Monte Carlo needs at least one sample");
  }
  const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  const auto parts = parallel_map<std::vector<Moments>>(chunks, [&](std::size_t c) {
    RngStream rng = RngStream::substream(seed, c);
    std::vector<Moments> acc(columns);
    std::vector<double> row(columns);
    const std::size_t begin = c * kChunkSize;
    const std::size_t end = std::min(samples, begin + kChunkSize);
    for (std::size_t s = begin; s < end; ++s) {
      draw(rng, row.data());
      for (std::size_t j = 0; j < columns; ++j) {
        acc[j].add(row[j]);
      }
    }
    return acc;
  });
  std::vector<Moments> total(columns);
  for (const auto &part : parts) {
    for (std::size_t j = 0; j < columns; ++j) {
      total[j].merge(part[j]);
    }
  }
  std::vector<Estimate> out;
  out.reserve(columns);
  for (const auto &m : total) {
    out.push_back(to_estimate(m, seed));
  }
  return out;
}

Estimate mc_scalar(std::size_t samples, std::uint64_t seed, const std::function<double(RngStream &)> &draw)
{
  return mc_columns(samples, seed, 1, [&](RngStream &rng, double *row) { row[0] = draw(rng); }).front();
}

ValuationProfile sample_profile(const MixedDistribution &dist, std::size_t n, RngStream &rng)
{
  std::vector<double> values(n);
  for (double &v : values) {
    v = dist.sample(rng);
  }
  return ValuationProfile(std::move(values));
}

Estimate mc_expectation(const MechanismSpec &mech, const MixedDistribution &dist, std::size_t n, const Objective &obj,
                        std::size_t samples, std::uint64_t seed)
{
  validate(mech);
  return mc_scalar(samples, seed, [&](RngStream &rng) {
    const ValuationProfile profile = sample_profile(dist, n, rng);
    EvalOptions options;
    options.seed = rng.bits();
    return objective_value(evaluate(mech, profile, options), profile, obj);
  });
}

Estimate expected_benchmark(const MixedDistribution &dist, std::size_t n, int k, const Objective &obj,
                            std::size_t samples, std::uint64_t seed)
{
  return mc_scalar(samples, seed, [&](RngStream &rng) {
    const ValuationProfile profile = sample_profile(dist, n, rng);
    return benchmark(profile, k, obj).value;
  });
}

AdoptionReport adoption_advantage(const MechanismSpec &mech, const MixedDistribution &dist, std::size_t n, int k,
                                  const Objective &obj, std::size_t samples, std::uint64_t seed)
{
  validate(mech);
  const auto est = mc_columns(samples, seed, 2, [&](RngStream &rng, double *row) {
    const ValuationProfile profile = sample_profile(dist, n, rng);
    EvalOptions options;
    options.seed = rng.bits();
    row[0] = benchmark(profile, k, obj).value;
    row[1] = objective_value(evaluate(mech, profile, options), profile, obj);
  });
  AdoptionReport report{est[0], est[1], 0.0};
  if (!(report.mechanism.mean > 0.0)) {
    throw DegenerateInputError("mechanism has non-positive expected objective");
  }
  report.advantage = report.benchmark.mean / report.mechanism.mean;
  return report;
}

// Balanced sampling ---------------------------------------------------------------

bool balanced_check(std::span<const bool> in_sample)
{
  const std::size_t n = in_sample.size();
  if (n < 2 || in_sample[0] || !in_sample[1]) {
    return false;
  }
  std::size_t count = 1;
  for (std::size_t i = 3; i <= n; ++i) {
    count += in_sample[i - 1] ? 1 : 0;
    if (4 * count < i || 4 * count > 3 * i) {
      return false;
    }
  }
  return true;
}

bool balanced_check(const std::vector<bool> &in_sample)
{
  auto buffer = std::make_unique<bool[]>(in_sample.size());
  std::copy(in_sample.begin(), in_sample.end(), buffer.get());
  return balanced_check(std::span<const bool>(buffer.get(), in_sample.size()));
}

Estimate balanced_probability(std::size_t n, std::size_t trials, std::uint64_t seed)
{
  return mc_scalar(trials, seed, [n](RngStream &rng) {
    if (n < 2) {
      return 0.0;
    }
    std::uint64_t buffer = 0;
    int left = 0;
    auto coin = [&] {
      if (left == 0) {
        buffer = rng.bits();
        left = 64;
      }
      const bool bit = (buffer & 1u) != 0;
      buffer >>= 1;
      --left;
      return bit;
    };
    if (coin() || !coin()) {
      return 0.0;
    }
    std::size_t count = 1;
    for (std::size_t i = 3; i <= n; ++i) {
      count += coin() ? 1 : 0;
      if (4 * count < i || 4 * count > 3 * i) {
        return 0.0;
      }
    }
    return 1.0;
  });
}

double balanced_probability_exact(std::size_t n)
{
  if (n < 2) {
    return 0.0;
  }
  std::vector<double> prob(n + 1, 0.0);
  prob[1] = 0.25;
  for (std::size_t i = 3; i <= n; ++i) {
    std::vector<double> next(n + 1, 0.0);
    for (std::size_t c = 0; c + 1 <= i; ++c) {
      if (prob[c] == 0.0) {
        continue;
      }
      next[c] += 0.5 * prob[c];
      next[c + 1] += 0.5 * prob[c];
    }
    for (std::size_t c = 0; c <= i; ++c) {
      if (4 * c < i || 4 * c > 3 * i) {
        next[c] = 0.0;
      }
    }
    prob.swap(next);
  }
  double total = 0.0;
  for (double p : prob) {
    total += p;
  }
  return total;
}

RuinRoot ruin_root()
{
  auto f = [](double r) { return r * r * r * r - 2.0 * r + 1.0; };
  auto tol = [](double a, double b) { return std::abs(b - a) < 1e-14; };
  const auto bracket = boost::math::tools::bisect(f, 0.0, 0.9, tol);
  RuinRoot out;
  out.root = 0.5 * (bracket.first + bracket.second);
  out.cube = out.root * out.root * out.root;
  out.bound = (1.0 - 2.0 * out.cube) / 4.0;
  return out;
}

// Two-agent exponential bound -----------------------------------------------------

double exponential_benchmark_conditional(double v) { return v + 0.5 * (1.0 + std::exp(-v)); }

double exponential_benchmark_conditional_numeric(double v)
{
  // Given the minimum v, the maximum is v + x with x ~ Exp(1).
  auto bm = [v](double x) { return std::max(v + x / 2.0, v / 2.0 + x) * std::exp(-x); };
  double total = 0.0;
  if (v > 0.0) {
    boost::math::quadrature::tanh_sinh<double> inner;
    total += inner.integrate(bm, 0.0, v);
  }
  boost::math::quadrature::exp_sinh<double> tail;
  total += tail.integrate([&](double x) { return bm(v + x); }, 0.0, kInfinity);
  return total;
}

double exponential_benchmark_integral()
{
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(
      [](double v) { return exponential_benchmark_conditional(v) * 2.0 * std::exp(-2.0 * v); }, 0.0, kInfinity);
}

double exponential_benchmark_integral_nested()
{
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(
      [](double v) { return exponential_benchmark_conditional_numeric(v) * 2.0 * std::exp(-2.0 * v); }, 0.0,
      kInfinity);
}

// Standard-auction lower bound ------------------------------------------------------

LowerBoundReport lb_standard_auctions(int beta, std::size_t n, std::size_t trials, std::uint64_t seed,
                                      std::vector<double> price_grid)
{
  if (beta < 2 || n < 1) {
    throw DomainError("lower bound needs beta >= 2 and n >= 1");
  }
  const auto b = static_cast<double>(beta);
  if (price_grid.empty()) {
    for (int i = 0; i <= 8 * (beta + 1); ++i) {
      price_grid.push_back(b / 8.0 * i);
    }
  }
  const std::vector<MixedDistribution> family = lb_family(beta);
  LowerBoundReport report;
  report.beta = beta;
  report.n = n;
  report.price_grid = price_grid;
  std::vector<std::vector<Estimate>> per_j;
  for (int j = 0; j < beta; ++j) {
    const MixedDistribution &dist = family[static_cast<std::size_t>(j)];
    std::vector<double> prices{b * j};
    prices.insert(prices.end(), price_grid.begin(), price_grid.end());
    const auto est = mc_columns(
        trials, RngStream::substream(seed, static_cast<std::uint64_t>(j)).bits(), prices.size(),
        [&](RngStream &rng, double *row) {
          std::vector<double> values(n);
          std::vector<double> phi_prefix(n + 1);
          for (double &v : values) {
            v = dist.sample(rng);
          }
          std::sort(values.begin(), values.end(), std::greater<>());
          phi_prefix[0] = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            phi_prefix[i + 1] = phi_prefix[i] + dist.inverse_hazard(values[i]);
          }
          // Single unit: the winner is uniform among the agents above p.
          for (std::size_t c = 0; c < prices.size(); ++c) {
            const auto s = static_cast<std::size_t>(
                std::upper_bound(values.begin(), values.end(), prices[c], std::greater<>()) - values.begin());
            row[c] = s == 0 ? 0.0 : phi_prefix[s] / static_cast<double>(s);
          }
        });
    report.special_lottery.push_back(est[0]);
    per_j.emplace_back(est.begin() + 1, est.end());
  }
  for (std::size_t c = 0; c < price_grid.size(); ++c) {
    Estimate avg;
    double var = 0.0;
    for (const auto &row : per_j) {
      avg.mean += row[c].mean / b;
      var += row[c].std_error * row[c].std_error;
      avg.samples += row[c].samples;
    }
    avg.std_error = std::sqrt(var) / b;
    avg.seed = seed;
    report.randomized.push_back(avg);
    if (avg.mean > report.best_randomized) {
      report.best_randomized = avg.mean;
      report.best_randomized_price = price_grid[c];
    }
  }
  for (const auto &e : report.special_lottery) {
    report.best_special = std::max(report.best_special, e.mean);
  }
  report.separation = report.best_randomized > 0.0 ? report.best_special / report.best_randomized : kInfinity;
  return report;
}

Estimate lottery_residual_surplus(const MixedDistribution &dist, std::size_t n, double p, std::size_t trials,
                                  std::uint64_t seed)
{
  return mc_scalar(trials, seed, [&](RngStream &rng) {
    std::vector<double> values(n);
    for (double &v : values) {
      v = dist.sample(rng);
    }
    return one_level_lottery_residual(values, p, 1);
  });
}

// Profit comparisons ----------------------------------------------------------------

bool inscribed_triangle_check(const MixedDistribution &dist, std::size_t grid_points)
{
  if (grid_points < 2) {
    throw DomainError("inscribed triangle check needs at least two grid points");
  }
  double previous = kInfinity;
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double q = static_cast<double>(i) / static_cast<double>(grid_points + 1);
    const double p = dist.quantile(q);
    const double f = dist.cdf(p);
    if (!(f > 0.0) || !std::isfinite(p)) {
      continue;
    }
    const double ratio = p * dist.survival(p) / f;
    if (ratio > previous + 1e-9 * std::max(1.0, std::abs(previous))) {
      return false;
    }
    previous = ratio;
  }
  return true;
}

MixedDistribution thin_tail_distribution()
{
  return MixedDistribution({{0.0, 4.0, PieceShape::exponential}, {1.0, 0.01, PieceShape::exponential}}, {});
}

MonopolyPrice monopoly_price(const MixedDistribution &dist)
{
  auto revenue = [&](double p) { return p * (1.0 - dist.cdf_left(p)); };
  std::vector<double> candidates;
  const std::size_t cells = std::size_t{1} << 14;
  for (std::size_t i = 0; i < cells; ++i) {
    candidates.push_back(dist.quantile(static_cast<double>(i) / static_cast<double>(cells)));
  }
  for (const auto &piece : dist.pieces()) {
    candidates.push_back(piece.start);
  }
  for (const auto &atom : dist.atoms()) {
    candidates.push_back(atom.value);
  }
  if (std::isfinite(dist.upper_support())) {
    candidates.push_back(dist.upper_support());
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  MonopolyPrice best{candidates.front(), revenue(candidates.front())};
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double r = revenue(candidates[i]);
    if (r > best.revenue) {
      best = {candidates[i], r};
      best_index = i;
    }
  }
  const double lo = candidates[best_index == 0 ? 0 : best_index - 1];
  const double hi = candidates[std::min(best_index + 1, candidates.size() - 1)];
  if (hi > lo && std::isfinite(hi)) {
    const auto refined =
        boost::math::tools::brent_find_minima([&](double p) { return -revenue(p); }, lo, hi, 52);
    if (-refined.second > best.revenue) {
      best = {refined.first, -refined.second};
    }
  }
  return best;
}

VickreyMonopolyReport vickrey2_vs_monopoly(const MixedDistribution &dist, std::size_t samples, std::uint64_t seed)
{
  VickreyMonopolyReport report;
  report.vickrey = mc_scalar(samples, seed, [&](RngStream &rng) {
    const double a = dist.sample(rng);
    const double b = dist.sample(rng);
    return std::min(a, b);
  });
  report.vickrey_exact = dist.expected_min_of_two();
  report.monopoly = monopoly_price(dist).revenue;
  report.holds = report.vickrey.mean >= report.monopoly - 3.0 * report.vickrey.std_error;
  return report;
}

ProfitComparison bm2_vs_myerson_profit(const MixedDistribution &dist, std::size_t n, std::size_t samples,
                                       std::uint64_t seed)
{
  if (n < 2) {
    throw DomainError("bm2 needs at least two agents");
  }
  const double price = monopoly_price(dist).price;
  const auto est = mc_columns(samples, seed, 2, [&](RngStream &rng, double *row) {
    const ValuationProfile profile = sample_profile(dist, n, rng);
    row[0] = profit_bm2(profile);
    std::size_t buyers = 0;
    for (double v : profile.values()) {
      buyers += v >= price ? 1 : 0;
    }
    row[1] = price * static_cast<double>(buyers);
  });
  ProfitComparison out{est[0], est[1], false};
  const double combined = std::sqrt(out.bm2.std_error * out.bm2.std_error + out.myerson.std_error * out.myerson.std_error);
  out.holds = out.bm2.mean >= out.myerson.mean - 3.0 * combined;
  return out;
}

}  // namespace pfd
