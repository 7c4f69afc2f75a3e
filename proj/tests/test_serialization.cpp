#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pfd/errors.hpp"
#include "pfd/serialization.hpp"

using namespace pfd;
using doctest::Approx;

namespace {

void check_same_distribution(const MixedDistribution &a, const MixedDistribution &b)
{
  for (double v : {0.0, 0.3, 1.0, 2.5, 7.0, 40.0}) {
    REQUIRE(a.cdf(v) == b.cdf(v));
  }
  REQUIRE(a.upper_support() == b.upper_support());
}

void check_same_mechanism(const MechanismSpec &a, const MechanismSpec &b)
{
  for (const ValuationProfile &p : {ValuationProfile{3, 1}, ValuationProfile{2, 2}, ValuationProfile{5, 0.5}}) {
    const auto x = evaluate(a, p);
    const auto y = evaluate(b, p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      REQUIRE(x.alloc[i] == Approx(y.alloc[i]));
      REQUIRE(x.payment[i] == Approx(y.payment[i]));
    }
  }
}

}  // namespace

TEST_CASE("numbers")
{
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(kInfinity) == "inf");
  CHECK(format_number(-kInfinity) == "-inf");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(number_json(kInfinity) == "inf");
  CHECK(number_json(2.5) == 2.5);
  CHECK(number_from_json(Json("inf")) == kInfinity);
  CHECK(number_from_json(Json("-inf")) == -kInfinity);
  CHECK(number_from_json(Json(3)) == 3.0);
  CHECK_THROWS_AS(number_from_json(Json("three")), ConstructionError);
  CHECK_THROWS_AS(number_from_json(Json::array()), ConstructionError);
  CHECK_FALSE(library_version().empty());
}

TEST_CASE("distribution round trips")
{
  const MixedDistribution cases[] = {
      MixedDistribution::exponential(2.0),
      MixedDistribution::uniform(1.0, 3.0),
      MixedDistribution::power_law(2.0, 1.5),
      MixedDistribution::equal_revenue(10.0),
      MixedDistribution::point_mass(4.0),
      build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}}),
  };
  for (const auto &d : cases) {
    const auto text = to_json(d).dump();
    check_same_distribution(d, parse_distribution(text));
    check_same_distribution(d, distribution_from_json(Json::parse(text)));
  }
}

TEST_CASE("distribution shorthand")
{
  check_same_distribution(parse_distribution("exponential:2"), MixedDistribution::exponential(2.0));
  check_same_distribution(parse_distribution("exponential"), MixedDistribution::exponential(1.0));
  check_same_distribution(parse_distribution("uniform:0:1"), MixedDistribution::uniform(0.0, 1.0));
  check_same_distribution(parse_distribution("power_law:2"), MixedDistribution::power_law(2.0, 1.0));
  check_same_distribution(parse_distribution("equal_revenue:10"), MixedDistribution::equal_revenue(10.0));
  check_same_distribution(parse_distribution("point_mass:5"), MixedDistribution::point_mass(5.0));
  check_same_distribution(parse_distribution("lb:2:1"), lb_family(2)[1]);
  check_same_distribution(parse_distribution("levels:0,1,2:1,2,1"),
                          build_from_virtual_values({{0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}}));
  check_same_distribution(parse_distribution("thin_tail"), thin_tail_distribution());
  CHECK_THROWS_AS(parse_distribution(""), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("gamma:2"), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("uniform:0"), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("uniform:0:x"), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("levels:0,1"), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("{\"pieces\": ["), ConstructionError);
  CHECK_THROWS_AS(parse_distribution("{\"pieces\": [], \"atoms\": []}"), ConstructionError);
}

TEST_CASE("piecewise functions")
{
  const PiecewiseConstantFn fn{{0.0, 2.0}, {3.0, 1.0}};
  const auto back = piecewise_from_json(to_json(fn));
  CHECK(back.breakpoints == fn.breakpoints);
  CHECK(back.levels == fn.levels);
}

TEST_CASE("mechanism round trips")
{
  const MechanismSpec cases[] = {
      LotterySpec{1},
      OneLevelLotterySpec{1.5, 1},
      TwoLevelLotterySpec{kInfinity, 0.5, 2},
      VickreySpec{1},
      RatioAuctionSpec{2.0, 0.75},
      RsolSpec{1},
      thm_worst_platform(1),
      RandomPricePostingSpec{10.0},
  };
  for (const auto &spec : cases) {
    const auto text = to_json(spec).dump();
    INFO(text);
    const auto back = parse_mechanism(text);
    CHECK(mechanism_name(back) == mechanism_name(spec));
    if (!std::holds_alternative<RandomPricePostingSpec>(spec)) {
      check_same_mechanism(spec, back);
    }
  }
  CHECK(to_json(TwoLevelLotterySpec{kInfinity, 0.5, 2}).at("p") == "inf");
  const auto ironed = parse_mechanism(R"({"type": "ironed_maximizer", "distribution": "exponential:1", "k": 1})");
  check_same_mechanism(ironed, LotterySpec{1});
}

TEST_CASE("mechanism shorthand")
{
  CHECK(mechanism_name(parse_mechanism("lottery")) == "lottery(k=1)");
  CHECK(mechanism_name(parse_mechanism("lottery:2")) == "lottery(k=2)");
  CHECK(mechanism_name(parse_mechanism("vickrey:2")) == "vickrey(k=2)");
  CHECK(mechanism_name(parse_mechanism("ratio_auction:2:0.75")) == "ratio_auction(r=2,b=0.75)");
  CHECK(mechanism_name(parse_mechanism("one_level_lottery:1.5:2")) == "one_level_lottery(p=1.5,k=2)");
  CHECK(mechanism_name(parse_mechanism("two_level_lottery:inf:1:1")) == "two_level_lottery(p=inf,q=1,k=1)");
  CHECK(mechanism_name(parse_mechanism("rsol:3")) == "rsol(k=3)");
  CHECK(mechanism_name(parse_mechanism("thm_worst:1")) == mechanism_name(thm_worst_platform(1)));
  CHECK(mechanism_name(parse_mechanism("random_price_posting")) == "random_price_posting(h=10)");
  CHECK(mechanism_name(parse_mechanism("random_price_posting:5")) == "random_price_posting(h=5)");
  CHECK_THROWS_AS(parse_mechanism(""), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("auction"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("lottery:1:2"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("lottery:1.5"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("lottery:0"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("two_level_lottery:1:2:1"), ConstructionError);
}

TEST_CASE("invalid mechanism JSON")
{
  CHECK_THROWS_AS(parse_mechanism("{\"type\": "), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("{\"k\": 1}"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("{\"type\": \"auction\"}"), ConstructionError);
  CHECK_THROWS_AS(parse_mechanism("{\"type\": \"one_level_lottery\", \"p\": \"cheap\"}"), ConstructionError);
  CHECK_THROWS_AS(
      parse_mechanism(R"({"type": "mixture", "components": [{"weight": 0.5, "mechanism": {"type": "lottery"}}]})"),
      ConstructionError);
}

TEST_CASE("result JSON")
{
  const auto bm = to_json(benchmark({10, 1}, 1));
  CHECK(bm.at("value") == 9.5);
  CHECK(bm.at("p") == 1.0);
  CHECK(bm.at("objective").at("name") == "residual");
  const auto none = to_json(benchmark({0, 0}, 1));
  CHECK(none.at("value") == 0.0);
  const auto out = to_json(run_vickrey({5, 3}, 1));
  CHECK(out.at("alloc") == Json::array({1.0, 0.0}));
  CHECK(out.at("payment") == Json::array({3.0, 0.0}));
  const auto est = to_json(Estimate{kInfinity, 0.5, 10, 7});
  CHECK(est.at("mean") == "inf");
  CHECK(est.at("seed") == 7);
  CHECK(to_json(ValuationProfile{1, 2}) == Json::array({1.0, 2.0}));
}

TEST_CASE("CSV output")
{
  CsvTable table;
  table.header = {"name", "value"};
  table.add_row({"plain", "1"});
  table.add_row({"with,comma", "say \"hi\""});
  CHECK_THROWS_AS(table.add_row({"short"}), DomainError);
  std::ostringstream out;
  table.write(out, Json{{"command", "test"}, {"seed", 3}});
  CHECK(out.str() ==
        "# command: test\n"
        "# seed: 3\n"
        "name,value\n"
        "plain,1\n"
        "\"with,comma\",\"say \"\"hi\"\"\"\n");
}
