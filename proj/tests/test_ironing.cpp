#include <doctest.h>

#include <cmath>

#include "pfd/errors.hpp"
#include "pfd/experiments.hpp"
#include "pfd/ironing.hpp"
#include "pfd/serialization.hpp"

using namespace pfd;
using doctest::Approx;

namespace {

const MixedDistribution &app_a()
{
  static const auto d = build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}});
  return d;
}

}  // namespace

TEST_CASE("objective names and parsing")
{
  CHECK(parse_objective("residual") == Objective::residual_surplus());
  CHECK(parse_objective("residual_surplus") == Objective::residual_surplus());
  CHECK(parse_objective("profit") == Objective::profit());
  CHECK(parse_objective("revenue") == Objective::profit());
  CHECK(parse_objective("surplus") == Objective::surplus());
  CHECK(parse_objective("2,-0.5") == Objective{2.0, -0.5});
  CHECK(Objective{2.0, -0.5}.name() == "2,-0.5");
  CHECK_THROWS_AS(parse_objective("0,0"), DomainError);
  CHECK_THROWS_AS(parse_objective("welfare"), DomainError);
}

TEST_CASE("virtual value examples")
{
  for (double mu : {0.5, 1.0, 3.0}) {
    for (double v : {0.0, 1.0, 10.0}) {
      CHECK(virtual_value(MixedDistribution::exponential(mu), Objective::residual_surplus(), v) ==
            Approx(mu).epsilon(1e-12));
    }
  }
  CHECK(virtual_value(MixedDistribution::uniform(0.0, 1.0), Objective::profit(), 0.75) == Approx(0.5));
  CHECK(virtual_value(MixedDistribution::power_law(2.0, 1.0), Objective::residual_surplus(), 4.0) == Approx(2.0));
  CHECK(virtual_value(MixedDistribution::uniform(0.0, 1.0), Objective::surplus(), 0.3) == Approx(0.3));
  CHECK_THROWS_AS(virtual_value(MixedDistribution::equal_revenue(10.0), Objective::profit(), 10.0), DomainError);
  CHECK_THROWS_AS(virtual_value(MixedDistribution::uniform(0.0, 1.0), Objective::profit(), 1.5), DomainError);
}

TEST_CASE("lower convex hull")
{
  const std::vector<Point2> collinear{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK(lower_convex_hull(collinear) == std::vector<Point2>{{0, 0}, {3, 3}});
  const std::vector<Point2> spike{{0, 0}, {1, 1}, {2, 0}};
  CHECK(lower_convex_hull(spike) == std::vector<Point2>{{0, 0}, {2, 0}});
  const std::vector<Point2> convex{{0, 0}, {1, -1}, {2, 0}};
  CHECK(lower_convex_hull(convex) == convex);
  const std::vector<Point2> one{{0, 0}};
  CHECK_THROWS_AS(lower_convex_hull(one), DomainError);
  const std::vector<Point2> unsorted{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(lower_convex_hull(unsorted), DomainError);

  // Brute-force oracle: a point is on the hull iff no chord passes below it.
  RngStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point2> pts;
    double x = 0.0;
    for (int i = 0; i < 12; ++i) {
      x += 0.1 + rng.uniform();
      pts.push_back({x, rng.uniform() * 4.0 - 2.0});
    }
    const auto hull = lower_convex_hull(pts);
    for (std::size_t i = 1; i + 1 < hull.size(); ++i) {
      const double s0 = (hull[i].y - hull[i - 1].y) / (hull[i].x - hull[i - 1].x);
      const double s1 = (hull[i + 1].y - hull[i].y) / (hull[i + 1].x - hull[i].x);
      REQUIRE(s0 < s1);
    }
    for (const auto &p : pts) {
      for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        if (p.x >= hull[i].x && p.x <= hull[i + 1].x) {
          const double t = (p.x - hull[i].x) / (hull[i + 1].x - hull[i].x);
          REQUIRE(p.y >= hull[i].y + t * (hull[i + 1].y - hull[i].y) - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("ironing an exponential gives its mean")
{
  const auto fn = iron(MixedDistribution::exponential(1.0), Objective::residual_surplus());
  CHECK(fn.exact());
  CHECK(fn.slopes().size() == 1);
  CHECK(fn(7.0) == Approx(1.0).epsilon(1e-15));
  CHECK(fn.at_quantile(0.3) == Approx(1.0).epsilon(1e-15));
  CHECK(fn.integral() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ironing a power law leaves the virtual value unchanged")
{
  const auto d = MixedDistribution::power_law(2.0, 1.0);
  const auto fn = iron(d, Objective::residual_surplus());
  CHECK_FALSE(fn.exact());
  double previous = -1.0;
  for (double v = 1.0; v < 200.0; v *= 1.07) {
    const double g = fn(v);
    CHECK(g == Approx(v / 2.0).epsilon(1e-9));
    CHECK(g > previous);
    previous = g;
  }
  CHECK(fn.threshold_above(1.0) == Approx(2.0).epsilon(1e-12));
  CHECK(fn.threshold_at_least(2.0) == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ironing profit on the uniform is the identity map 2v - 1")
{
  const auto d = MixedDistribution::uniform(0.0, 1.0);
  const auto fn = iron(d, Objective::profit());
  for (double v = 0.01; v < 1.0; v += 0.01) {
    REQUIRE(fn(v) == Approx(2.0 * v - 1.0).epsilon(1e-9));
  }
  CHECK(std::abs(fn.integral()) < 1e-9);
  CHECK(fn.threshold_at_least(0.0) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("three-piece construction irons the level-2 piece with the tail")
{
  const auto fn = iron(app_a(), Objective::residual_surplus());
  REQUIRE(fn.exact());
  // H is linear between the piece boundaries with slopes 1, 2, 1.
  const double q1 = 1.0 - std::exp(-1.0);
  const double q2 = 1.0 - std::exp(-1.5);
  const double h1 = q1;
  const double h_end = q1 + 2.0 * (q2 - q1) + (1.0 - q2);
  const double slope = (h_end - h1) / (1.0 - q1);
  REQUIRE(fn.slopes().size() == 2);
  CHECK(fn.quantile_breakpoints()[1] == Approx(q1).epsilon(1e-14));
  CHECK(fn.slopes()[0] == Approx(1.0).epsilon(1e-14));
  CHECK(fn.slopes()[1] == Approx(slope).epsilon(1e-14));
  CHECK(fn(0.5) == Approx(1.0));
  CHECK(fn(1.0) == Approx(slope));
  CHECK(fn(1.5) == Approx(slope));
  CHECK(fn(30.0) == Approx(slope));
  CHECK(fn.integral() == Approx(h_end).epsilon(1e-12));
  CHECK(fn.threshold_above(1.0) == 1.0);
  CHECK(fn.threshold_at_least(1.0) == 0.0);
  CHECK(fn.threshold_above(slope) == kInfinity);
}

TEST_CASE("ironing rejects atoms")
{
  CHECK_THROWS_AS(iron(MixedDistribution::equal_revenue(10.0), Objective::profit()), DomainError);
}

TEST_CASE("integral of g equals H(1)")
{
  const std::pair<MixedDistribution, Objective> cases[] = {
      {MixedDistribution::exponential(2.0), Objective::profit()},
      {MixedDistribution::uniform(1.0, 3.0), Objective::residual_surplus()},
      {MixedDistribution::power_law(3.0, 1.0), Objective::profit()},
      {app_a(), Objective::profit()},
      {app_a(), Objective{1.0, -0.5}},
      {build_from_virtual_values({{0.0, 0.5, 1.0, 3.0}, {4.0, 0.2, 5.0, 0.5}}), Objective::residual_surplus()},
  };
  for (const auto &[d, obj] : cases) {
    const auto fn = iron(d, obj);
    const double h1 = cumulative_virtual_value(d, obj, kInfinity);
    CHECK(fn.integral() == Approx(h1).epsilon(1e-9));
    CHECK(std::abs(fn.hull_at(0.0)) < 1e-12);
  }
}

TEST_CASE("monotonicity and hull domination on random constructions")
{
  RngStream rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    PiecewiseConstantFn levels;
    double t = 0.0;
    const int pieces = 1 + static_cast<int>(rng.below(6));
    for (int j = 0; j < pieces; ++j) {
      levels.breakpoints.push_back(t);
      levels.levels.push_back(std::exp(std::log(0.1) + rng.uniform() * std::log(100.0)));
      t += 0.2 + 1.8 * rng.uniform();
    }
    const auto d = build_from_virtual_values(levels);
    const Objective obj = trial % 3 == 0 ? Objective::profit() : Objective::residual_surplus();
    const auto fn = iron(d, obj);
    for (std::size_t j = 1; j < fn.slopes().size(); ++j) {
      REQUIRE(fn.slopes()[j] >= fn.slopes()[j - 1]);
    }
    double previous = -kInfinity;
    for (int i = 0; i < 1000; ++i) {
      const double g = fn(d.quantile((i + 0.5) / 1000.0));
      REQUIRE(g >= previous - 1e-12);
      previous = g;
    }
    for (int i = 0; i <= 1024; ++i) {
      const double q = i / 1024.0;
      const double h = i == 1024 ? cumulative_virtual_value(d, obj, kInfinity)
                                 : cumulative_virtual_value(d, obj, d.quantile(q));
      REQUIRE(fn.hull_at(q) <= h + 1e-9);
    }
  }
}

TEST_CASE("ironed maximizer is optimal among two-level lotteries in expectation")
{
  // Paired Monte Carlo: every column shares the same profiles.
  const auto d = app_a();
  const auto fn = std::make_shared<const IronedVirtualFunction>(iron(d, Objective::residual_surplus()));
  const std::vector<double> grid{0.0, 0.5, 1.0, 1.5, 2.0, 3.0, kInfinity};
  std::vector<std::pair<double, double>> pairs;
  for (double p : grid) {
    for (double q : grid) {
      if (q <= p && !std::isinf(q)) {
        pairs.emplace_back(p, q);
      }
    }
  }
  const Objective obj = Objective::residual_surplus();
  const auto est = mc_columns(1'000'000, 404, pairs.size(), [&](RngStream &rng, double *out) {
    const auto profile = sample_profile(d, 3, rng);
    const double best = objective_value(run_ironed_maximizer(profile, *fn, 1), profile, obj);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out[i] = best - objective_value(run_two_level_lottery(profile, pairs[i].first, pairs[i].second, 1), profile, obj);
    }
  });
  for (const auto &e : est) {
    CHECK(e.mean >= -3.0 * e.std_error);
  }
}

TEST_CASE("expected payment equals expected virtual surplus")
{
  const auto d = MixedDistribution::exponential(1.0);
  for (double p : {0.0, 0.5, 1.5}) {
    const auto est = mc_columns(1'000'000, 77, 1, [&](RngStream &rng, double *out) {
      const auto profile = sample_profile(d, 2, rng);
      const auto outcome = run_one_level_lottery(profile, p, 1);
      const double phi = virtual_value(d, Objective::profit(), profile[0]);
      out[0] = outcome.payment[0] - phi * outcome.alloc[0];
    });
    CHECK(std::abs(est[0].mean) <= 3.0 * est[0].std_error);
  }
}

TEST_CASE("ironed function serializes breakpoints and slopes")
{
  const auto j = to_json(iron(app_a(), Objective::residual_surplus()));
  CHECK(j.at("breakpoints").size() == 3);
  CHECK(j.at("slopes").size() == 2);
  CHECK(j.at("value_breakpoints")[2] == "inf");
  CHECK(j.at("exact") == true);
}
