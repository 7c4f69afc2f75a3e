#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfd/distributions.hpp"
#include "pfd/errors.hpp"

using namespace pfd;
using doctest::Approx;

namespace {

// Richardson-extrapolated central difference of the survival function.
double numeric_density(const MixedDistribution &d, double v, double h)
{
  auto central = [&](double step) { return (d.survival(v - step) - d.survival(v + step)) / (2.0 * step); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

double simpson(const std::function<double(double)> &f, double a, double b, int panels)
{
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("cdf examples")
{
  CHECK(MixedDistribution::exponential(1.0).cdf(0.0) == 0.0);
  const auto er = MixedDistribution::equal_revenue(10.0);
  CHECK(er.cdf(2.0) == Approx(0.5).epsilon(1e-15));
  CHECK(er.cdf(10.0) == 1.0);
  CHECK(er.cdf_left(10.0) == Approx(0.9).epsilon(1e-15));
  CHECK(er.cdf(0.5) == 0.0);
  CHECK(er.cdf(50.0) == 1.0);
  CHECK(MixedDistribution::uniform(0.0, 1.0).cdf(0.3) == Approx(0.3).epsilon(1e-15));
  CHECK(MixedDistribution::power_law(2.0, 1.0).cdf(2.0) == Approx(0.75).epsilon(1e-15));
}

TEST_CASE("quantile examples")
{
  const auto e = MixedDistribution::exponential(1.0);
  CHECK(e.quantile(1.0 - std::exp(-1.0)) == Approx(1.0).epsilon(1e-12));
  CHECK(MixedDistribution::equal_revenue(10.0).quantile(0.5) == Approx(2.0).epsilon(1e-12));
  CHECK(MixedDistribution::equal_revenue(10.0).quantile(0.95) == 10.0);
  CHECK(e.quantile(0.0) == 0.0);
  CHECK(MixedDistribution::uniform(2.0, 3.0).quantile(0.0) == 2.0);
  CHECK(MixedDistribution::power_law(2.0, 1.5).quantile(0.0) == 1.5);
}

TEST_CASE("sampling")
{
  SUBCASE("exponential mean")
  {
    const auto e = MixedDistribution::exponential(1.0);
    RngStream rng(11);
    double sum = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
      sum += e.sample(rng);
    }
    CHECK(std::abs(sum / 1e6 - 1.0) < 0.01);
  }
  SUBCASE("point mass")
  {
    const auto d = MixedDistribution::point_mass(5.0);
    RngStream rng(3);
    for (int i = 0; i < 1000; ++i) {
      REQUIRE(d.sample(rng) == 5.0);
    }
  }
  SUBCASE("fixed seed repeats")
  {
    const auto d = build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}});
    RngStream a(99);
    RngStream b(99);
    for (int i = 0; i < 1000; ++i) {
      REQUIRE(d.sample(a) == d.sample(b));
    }
  }
}

TEST_CASE("virtual value construction")
{
  SUBCASE("constant level is exponential")
  {
    const auto d = build_from_virtual_values({{0.0}, {2.5}});
    const auto e = MixedDistribution::exponential(2.5);
    for (double v : {0.0, 0.3, 1.0, 7.0, 40.0}) {
      CHECK(d.survival(v) == Approx(e.survival(v)).epsilon(1e-14));
    }
    CHECK(d.mean() == Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("levels 1, 2, 1")
  {
    const auto d = build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}});
    CHECK(d.survival(1.0) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(d.survival(2.0) == Approx(std::exp(-1.0) * std::exp(-0.5)).epsilon(1e-14));
    CHECK(d.survival(3.0) == Approx(std::exp(-2.5)).epsilon(1e-14));
    const double levels[] = {1.0, 2.0, 1.0};
    for (int i = 0; i < 300; ++i) {
      const double v = 0.01 + i * 0.01;
      if (std::abs(v - 1.0) < 0.01 || std::abs(v - 2.0) < 0.01) {
        continue;
      }
      const double ratio = d.survival(v) / numeric_density(d, v, 1e-3);
      REQUIRE(ratio == Approx(levels[v < 1.0 ? 0 : (v < 2.0 ? 1 : 2)]).epsilon(1e-6));
    }
  }
  SUBCASE("round trip at piece midpoints")
  {
    const PiecewiseConstantFn fn{{0.0, 0.5, 1.7, 2.0, 4.0}, {0.3, 4.0, 0.8, 9.0, 1.2}};
    const auto d = build_from_virtual_values(fn);
    for (std::size_t j = 0; j < fn.levels.size(); ++j) {
      const double mid = j + 1 < fn.levels.size() ? 0.5 * (fn.breakpoints[j] + fn.breakpoints[j + 1]) : 6.0;
      const double numeric = d.survival(mid) / numeric_density(d, mid, 1e-3);
      CHECK(numeric == Approx(fn.levels[j]).epsilon(1e-9));
      CHECK(d.inverse_hazard(mid) == Approx(fn.levels[j]).epsilon(1e-12));
    }
  }
  SUBCASE("invalid levels")
  {
    CHECK_THROWS_AS(build_from_virtual_values({{0.0, 1.0}, {1.0, 0.0}}), ConstructionError);
    CHECK_THROWS_AS(build_from_virtual_values({{0.0, 1.0}, {1.0, -2.0}}), ConstructionError);
    CHECK_THROWS_AS(build_from_virtual_values({{0.5}, {1.0}}), ConstructionError);
    CHECK_THROWS_AS(build_from_virtual_values({{0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}}), ConstructionError);
  }
}

TEST_CASE("lower-bound family")
{
  const auto levels = lb_family_levels(2, 0);
  CHECK(levels.breakpoints == std::vector<double>{0.0, 2.0});
  CHECK(levels.levels == std::vector<double>{2.0, 1.0});
  const auto family = lb_family(2);
  CHECK(family.size() == 2);
  for (int beta : {2, 3}) {
    const auto fam = lb_family(beta);
    for (int j = 0; j < beta; ++j) {
      const double mid = j * beta + beta / 2.0;
      const double numeric = fam[j].survival(mid) / numeric_density(fam[j], mid, 1e-3);
      CHECK(numeric == Approx(beta).epsilon(1e-6));
      CHECK(fam[j].inverse_hazard(j * beta + beta + 0.5) == Approx(1.0));
    }
  }
}

TEST_CASE("standard constructors")
{
  CHECK(MixedDistribution::exponential(1.0).mean() == Approx(1.0).epsilon(1e-14));
  CHECK(MixedDistribution::uniform(1.0, 3.0).mean() == Approx(2.0).epsilon(1e-14));
  CHECK(MixedDistribution::power_law(2.0, 1.0).mean() == Approx(2.0).epsilon(1e-12));
  CHECK(MixedDistribution::equal_revenue(10.0).mean() == Approx(1.0 + std::log(10.0)).epsilon(1e-12));
  CHECK(MixedDistribution::power_law(1.0, 1.0).mean() == kInfinity);
  CHECK_THROWS_AS(MixedDistribution::exponential(0.0), ConstructionError);
  CHECK_THROWS_AS(MixedDistribution::uniform(1.0, 1.0), ConstructionError);
  CHECK_THROWS_AS(MixedDistribution::power_law(-1.0, 1.0), ConstructionError);
  CHECK_THROWS_AS(MixedDistribution::power_law(2.0, 0.0), ConstructionError);
  CHECK_THROWS_AS(MixedDistribution::equal_revenue(1.0), ConstructionError);
  CHECK_THROWS_AS(MixedDistribution({{0.0, 1.0}}, {{1.0, 0.7}, {2.0, 0.7}}), ConstructionError);
}

TEST_CASE("density, hazard and atoms")
{
  const auto u = MixedDistribution::uniform(0.0, 2.0);
  CHECK(u.pdf(1.0) == Approx(0.5));
  CHECK(u.pdf(2.0) == Approx(0.5));
  CHECK(u.pdf(3.0) == 0.0);
  CHECK(u.inverse_hazard(1.5) == Approx(0.5));
  const auto er = MixedDistribution::equal_revenue(10.0);
  CHECK(er.has_atoms());
  CHECK_THROWS_AS(er.inverse_hazard(10.0), DomainError);
  CHECK(er.inverse_hazard(2.0) == Approx(2.0));
  CHECK_THROWS_AS(u.inverse_hazard(2.5), DomainError);
  CHECK(MixedDistribution::power_law(2.0, 1.0).inverse_hazard(4.0) == Approx(2.0));
}

TEST_CASE("survival integrals match quadrature")
{
  const MixedDistribution dists[] = {MixedDistribution::exponential(1.5), MixedDistribution::uniform(0.5, 2.0),
                                     MixedDistribution::power_law(3.0, 1.0),
                                     build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}})};
  for (const auto &d : dists) {
    const double lo = d.support_min();
    for (double v : {lo + 0.3, lo + 1.0, lo + 1.9}) {
      for (int power : {1, 2}) {
        // Split at the kinks of S so each panel integrates a smooth function.
        std::vector<double> cuts{lo};
        for (double b : d.interior_boundaries()) {
          if (b < v) {
            cuts.push_back(b);
          }
        }
        if (d.upper_support() < v) {
          cuts.push_back(d.upper_support());
        }
        cuts.push_back(v);
        double numeric = 0.0;
        for (std::size_t c = 1; c < cuts.size(); ++c) {
          numeric += simpson([&](double u) { return std::pow(d.survival(u), power); }, cuts[c - 1], cuts[c], 20000);
        }
        CHECK(d.survival_integral(v, power) == Approx(numeric).epsilon(1e-10));
      }
    }
  }
  // E[min of two] = integral of S^2 over the support.
  CHECK(MixedDistribution::exponential(1.0).expected_min_of_two() == Approx(0.5).epsilon(1e-12));
  CHECK(MixedDistribution::uniform(0.0, 1.0).expected_min_of_two() == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(MixedDistribution::power_law(2.0, 1.0).expected_min_of_two() == Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("round trip, monotone survival and KS on standard distributions")
{
  const MixedDistribution dists[] = {MixedDistribution::exponential(1.0), MixedDistribution::uniform(0.0, 1.0),
                                     MixedDistribution::power_law(2.0, 1.0), MixedDistribution::equal_revenue(10.0),
                                     build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}})};
  std::uint64_t seed = 5;
  for (const auto &d : dists) {
    RngStream rng(seed++);
    for (int i = 0; i < 1000; ++i) {
      const double q = rng.uniform();
      const double v = d.quantile(q);
      if (d.has_atoms() && v == d.upper_support()) {
        continue;
      }
      REQUIRE(std::abs(d.cdf(v) - q) <= 1e-9);
    }
    const double hi = std::isinf(d.upper_support()) ? d.quantile(0.9999) : d.upper_support();
    double previous = 1.0;
    for (int i = 0; i <= 10'000; ++i) {
      const double s = d.survival(d.support_min() + (hi - d.support_min()) * i / 10'000.0);
      REQUIRE(s <= previous);
      previous = s;
    }
    std::vector<double> xs(100'000);
    for (double &x : xs) {
      x = d.sample(rng);
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i + 1 < xs.size() && xs[i + 1] == xs[i]) {
        continue;
      }
      const auto first = std::lower_bound(xs.begin(), xs.end(), xs[i]) - xs.begin();
      ks = std::max(ks, std::abs((i + 1) / 1e5 - d.cdf(xs[i])));
      ks = std::max(ks, std::abs(first / 1e5 - d.cdf_left(xs[i])));
    }
    CHECK(ks < 0.01);
  }
}
