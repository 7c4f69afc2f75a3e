#include <doctest.h>

#include <cmath>

#include "pfd/errors.hpp"
#include "pfd/experiments.hpp"

using namespace pfd;
using doctest::Approx;

namespace {

// Probability that a uniform random split is balanced, by enumeration.
double balanced_brute_force(std::size_t n)
{
  std::size_t hits = 0;
  std::vector<bool> split(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      split[i] = (mask >> i & 1u) != 0;
    }
    hits += balanced_check(split) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(1u << n);
}

struct ThreadGuard
{
  unsigned saved = worker_threads();
  ~ThreadGuard() { set_worker_threads(saved); }
};

}  // namespace

TEST_CASE("monte carlo harness")
{
  const auto est = mc_columns(10000, 1, 2, [](RngStream &rng, double *row) {
    row[0] = 3.0;
    row[1] = rng.uniform();
  });
  CHECK(est[0].mean == 3.0);
  CHECK(est[0].std_error == 0.0);
  CHECK(est[0].samples == 10000);
  CHECK(est[0].seed == 1);
  CHECK(std::abs(est[1].mean - 0.5) < 3.0 * est[1].std_error);
  CHECK(est[1].std_error == Approx(std::sqrt(1.0 / 12.0 / 10000)).epsilon(0.05));
  CHECK_THROWS_AS(mc_scalar(0, 1, [](RngStream &) { return 0.0; }), DomainError);
}

TEST_CASE("results do not depend on the worker count")
{
  ThreadGuard guard;
  auto run = [] {
    return expected_benchmark(MixedDistribution::exponential(1.0), 3, 1, Objective::residual_surplus(), 20000, 9);
  };
  set_worker_threads(1);
  const auto a = run();
  set_worker_threads(4);
  const auto b = run();
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const auto c = balanced_probability(50, 30000, 2);
  set_worker_threads(1);
  const auto d = balanced_probability(50, 30000, 2);
  CHECK(c.mean == d.mean);
}

TEST_CASE("expectations on the exponential")
{
  const auto d = MixedDistribution::exponential(1.0);
  const auto lottery = mc_expectation(LotterySpec{1}, d, 2, Objective::residual_surplus(), 200000, 3);
  CHECK(std::abs(lottery.mean - 1.0) < 3.0 * lottery.std_error);
  const auto bm = expected_benchmark(d, 2, 1, Objective::residual_surplus(), 200000, 4);
  CHECK(std::abs(bm.mean - 4.0 / 3.0) < 3.0 * bm.std_error);
  const auto vickrey = mc_expectation(VickreySpec{1}, d, 2, Objective::profit(), 200000, 5);
  CHECK(std::abs(vickrey.mean - 0.5) < 3.0 * vickrey.std_error);
}

TEST_CASE("adoption advantage")
{
  const auto d = MixedDistribution::exponential(1.0);
  const auto r = adoption_advantage(LotterySpec{1}, d, 2, 1, Objective::residual_surplus(), 100000, 6);
  CHECK(r.advantage == Approx(r.benchmark.mean / r.mechanism.mean));
  CHECK(std::abs(r.advantage - 4.0 / 3.0) < 0.02);
  // The benchmark dominates the lottery on every profile, so the paired
  // estimate can never fall below 1.
  CHECK(r.advantage >= 1.0);
  CHECK_THROWS_AS(adoption_advantage(VickreySpec{1}, MixedDistribution::point_mass(1.0), 2, 1,
                                     Objective::residual_surplus(), 1000, 1),
                  DegenerateInputError);
}

TEST_CASE("performance ratio")
{
  CHECK(performance_ratio(2, 1) == 2.0);
  CHECK(performance_ratio(1, 0) == kInfinity);
  CHECK(performance_ratio(0, 0) == 1.0);
}

TEST_CASE("grids")
{
  const auto grid = pair_grid(0, 1, 3);
  CHECK(grid.size() == 9);
  CHECK(grid.front() == ValuationProfile{0, 0});
  CHECK(grid.back() == ValuationProfile{1, 1});
  CHECK_THROWS_AS(pair_grid(1, 1, 3), DomainError);
  const auto random = random_profiles(100, 2, 5, 0.1, 10, 7);
  CHECK(random.size() == 100);
  for (const auto &p : random) {
    REQUIRE(p.size() >= 2);
    REQUIRE(p.size() <= 5);
    for (double v : p.values()) {
      REQUIRE(v >= 0.1);
      REQUIRE(v <= 10.0);
    }
  }
  CHECK(random_profiles(5, 2, 5, 0.1, 10, 7) == std::vector<ValuationProfile>(random.begin(), random.begin() + 5));
  CHECK_THROWS_AS(random_profiles(5, 3, 2, 0.1, 10, 7), DomainError);
}

TEST_CASE("worst-case ratios on two agents")
{
  const auto grid = pair_grid(0, 1, 61);
  const Objective obj = Objective::residual_surplus();
  CHECK(worst_case_ratio_grid(LotterySpec{1}, 1, obj, grid).worst_ratio == Approx(2.0));
  MixtureSpec mix;
  mix.components.push_back({2.0 / 3.0, LotterySpec{1}});
  mix.components.push_back({1.0 / 3.0, VickreySpec{1}});
  CHECK(worst_case_ratio_grid(mix, 1, obj, grid).worst_ratio == Approx(1.5));
  const auto ratio = worst_case_ratio_grid(RatioAuctionSpec{2, 0.75}, 1, obj, grid);
  CHECK(ratio.worst_ratio <= 4.0 / 3.0 + 1e-12);
  CHECK(ratio.worst_ratio >= 4.0 / 3.0 - 0.02);
  CHECK(ratio.cells.size() == grid.size());
  CHECK(worst_case_ratio_grid(VickreySpec{1}, 1, obj, grid).worst_ratio == kInfinity);
}

TEST_CASE("balanced splits")
{
  CHECK_FALSE(balanced_check(std::vector<bool>{false}));
  CHECK(balanced_check(std::vector<bool>{false, true}));
  CHECK_FALSE(balanced_check(std::vector<bool>{true, true}));
  CHECK_FALSE(balanced_check(std::vector<bool>{false, false}));
  CHECK(balanced_check(std::vector<bool>{false, true, true}));
  CHECK(balanced_check(std::vector<bool>{false, true, false, true}));
  // Three of four in the sample is still inside [1/4, 3/4]; four of five is not.
  CHECK(balanced_check(std::vector<bool>{false, true, true, true}));
  CHECK_FALSE(balanced_check(std::vector<bool>{false, true, true, true, true}));
  CHECK_FALSE(balanced_check(std::vector<bool>{false, true, false, false, false}));

  for (std::size_t n = 2; n <= 16; ++n) {
    REQUIRE(balanced_probability_exact(n) == Approx(balanced_brute_force(n)).epsilon(1e-12));
  }
  double previous = 1.0;
  for (std::size_t n : {2, 10, 100, 1000}) {
    const double p = balanced_probability_exact(n);
    CHECK(p <= previous + 1e-15);
    previous = p;
  }
  const auto root = ruin_root();
  CHECK(balanced_probability_exact(1000) >= root.bound);
  const auto mc = balanced_probability(100, 100000, 11);
  CHECK(std::abs(mc.mean - balanced_probability_exact(100)) < 3.0 * mc.std_error);
}

TEST_CASE("ruin root")
{
  // Newton iteration from the left of the root.
  double r = 0.5;
  for (int i = 0; i < 50; ++i) {
    r -= (r * r * r * r - 2.0 * r + 1.0) / (4.0 * r * r * r - 2.0);
  }
  const auto root = ruin_root();
  CHECK(root.root == Approx(r).epsilon(1e-13));
  CHECK(root.root == Approx(0.5436890127).epsilon(1e-9));
  CHECK(root.cube == Approx(r * r * r).epsilon(1e-12));
  CHECK(root.bound == Approx((1.0 - 2.0 * r * r * r) / 4.0).epsilon(1e-12));
}

TEST_CASE("two-agent exponential benchmark")
{
  CHECK(exponential_benchmark_conditional(0.0) == 1.0);
  for (double v : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(exponential_benchmark_conditional_numeric(v) == Approx(exponential_benchmark_conditional(v)).epsilon(1e-10));
  }
  CHECK(exponential_benchmark_integral() == Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(exponential_benchmark_integral_nested() == Approx(4.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("lower-bound family")
{
  const auto f0 = lb_family_levels(2, 0);
  CHECK(f0.breakpoints == std::vector<double>{0, 2});
  CHECK(f0.levels == std::vector<double>{2, 1});
  const auto f1 = lb_family_levels(2, 1);
  CHECK(f1.breakpoints == std::vector<double>{0, 2, 4});
  CHECK(f1.levels == std::vector<double>{1, 2, 1});
  CHECK(lb_family(3).size() == 3);
  CHECK_THROWS_AS(lb_family(1), DomainError);
  CHECK_THROWS_AS(lb_family_levels(2, 2), DomainError);

  const auto report = lb_standard_auctions(2, 5, 20000, 12, {0.0, 1.0, 2.0});
  CHECK(report.special_lottery.size() == 2);
  CHECK(report.randomized.size() == 3);
  double best = 0.0;
  for (const auto &e : report.special_lottery) {
    best = std::max(best, e.mean);
  }
  CHECK(report.best_special == best);
  CHECK(report.separation == Approx(report.best_special / report.best_randomized));
  // Virtual surplus and residual surplus agree in expectation.
  const auto family = lb_family(2);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto direct = lottery_residual_surplus(family[j], 5, 2.0 * j, 200000, 13);
    const auto &virt = report.special_lottery[j];
    CHECK(std::abs(direct.mean - virt.mean) <
          4.0 * std::hypot(direct.std_error, virt.std_error));
  }
  CHECK_THROWS_AS(lb_standard_auctions(1, 5, 10, 1), DomainError);
}

TEST_CASE("profit comparisons")
{
  CHECK(inscribed_triangle_check(MixedDistribution::uniform(0, 1)));
  CHECK(inscribed_triangle_check(MixedDistribution::exponential(1)));
  CHECK_FALSE(inscribed_triangle_check(thin_tail_distribution()));
  CHECK_THROWS_AS(inscribed_triangle_check(MixedDistribution::uniform(0, 1), 1), DomainError);

  const auto expo = monopoly_price(MixedDistribution::exponential(1));
  CHECK(expo.price == Approx(1.0).epsilon(1e-6));
  CHECK(expo.revenue == Approx(std::exp(-1.0)).epsilon(1e-12));
  const auto uni = monopoly_price(MixedDistribution::uniform(0, 1));
  CHECK(uni.price == Approx(0.5).epsilon(1e-6));
  CHECK(uni.revenue == Approx(0.25).epsilon(1e-12));
  CHECK(monopoly_price(MixedDistribution::equal_revenue(10)).revenue == Approx(1.0).epsilon(1e-9));

  const auto vm = vickrey2_vs_monopoly(MixedDistribution::uniform(0, 1), 100000, 14);
  CHECK(vm.vickrey_exact == Approx(1.0 / 3.0));
  CHECK(vm.monopoly == Approx(0.25));
  CHECK(vm.holds);
  CHECK(std::abs(vm.vickrey.mean - 1.0 / 3.0) < 3.0 * vm.vickrey.std_error);

  const auto cmp = bm2_vs_myerson_profit(MixedDistribution::exponential(1), 5, 50000, 15);
  CHECK(cmp.holds);
  // Posting the monopoly price to n agents earns n p (1 - F(p)).
  CHECK(std::abs(cmp.myerson.mean - 5.0 * std::exp(-1.0)) < 3.0 * cmp.myerson.std_error + 1e-12);
  CHECK_THROWS_AS(bm2_vs_myerson_profit(MixedDistribution::exponential(1), 1, 10, 1), DomainError);
}

TEST_CASE("profile families")
{
  CHECK(family_profile(ProfileFamily::ones_then_zeros, 4) == ValuationProfile{1, 1, 0, 0});
  CHECK(family_profile(ProfileFamily::geometric, 3) == ValuationProfile{1, 0.5, 0.25});
  CHECK(family_profile(ProfileFamily::uniform_grid, 4) == ValuationProfile{1, 0.75, 0.5, 0.25});
  CHECK(family_profile(ProfileFamily::all_equal, 2) == ValuationProfile{1, 1});
  CHECK_THROWS_AS(family_profile(ProfileFamily::random, 3), DomainError);
  CHECK_THROWS_AS(family_profile(ProfileFamily::geometric, 0), DomainError);
  for (auto f : {ProfileFamily::ones_then_zeros, ProfileFamily::geometric, ProfileFamily::uniform_grid,
                 ProfileFamily::all_equal, ProfileFamily::random}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK_THROWS_AS(parse_family("zigzag"), DomainError);
}

TEST_CASE("rsol sweep")
{
  const auto report = rsol_ratio_sweep({2, 4}, {1, 2},
                                       {ProfileFamily::ones_then_zeros, ProfileFamily::all_equal, ProfileFamily::random},
                                       2, 16);
  CHECK(report.cells.size() == 2 * 2 * 4);
  double worst = 0.0;
  for (const auto &c : report.cells) {
    CHECK(c.exact);
    CHECK(c.benchmark == Approx(benchmark(c.profile, c.k).value));
    const double platform = objective_value(evaluate(thm_worst_platform(c.k), c.profile), c.profile,
                                            Objective::residual_surplus());
    CHECK(c.platform == Approx(platform));
    CHECK(c.ratio == Approx(performance_ratio(c.benchmark, c.platform)));
    CHECK(c.ratio <= 216.0);
    worst = std::max(worst, c.ratio);
  }
  CHECK(report.worst_ratio == worst);
  const auto again = rsol_ratio_sweep({2, 4}, {1, 2},
                                      {ProfileFamily::ones_then_zeros, ProfileFamily::all_equal, ProfileFamily::random},
                                      2, 16);
  CHECK(again.worst_ratio == report.worst_ratio);
}

TEST_CASE("rsol proof steps on small profiles")
{
  for (int k : {1, 2}) {
    for (auto f : {ProfileFamily::ones_then_zeros, ProfileFamily::geometric, ProfileFamily::uniform_grid}) {
      const auto profile = family_profile(f, 8);
      const auto s = rsol_step_checks(profile, k);
      INFO(family_name(f) << " k=" << k);
      CHECK(s.balanced_partitions > 0);
      CHECK(s.step1);
      CHECK(s.step2);
    }
  }
  CHECK_THROWS_AS(rsol_step_checks({1}, 1), DomainError);
}
