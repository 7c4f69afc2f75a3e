#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfd/benchmarks.hpp"
#include "pfd/distributions.hpp"
#include "pfd/experiments.hpp"
#include "pfd/ironing.hpp"
#include "pfd/mechanisms.hpp"

namespace pfd {

using Json = nlohmann::ordered_json;

std::string library_version();

/// 12 significant digits; infinities as "inf" / "-inf".
std::string format_number(double x);
/// Numbers as JSON numbers, infinities as the strings "inf" / "-inf".
Json number_json(double x);
/// Accepts a JSON number or the strings "inf", "-inf".
double number_from_json(const Json &j);

Json to_json(const MixedDistribution &dist);
MixedDistribution distribution_from_json(const Json &j);
/// JSON text, or shorthand such as "exponential:1", "uniform:0:1",
/// "power_law:2:1", "equal_revenue:10", "point_mass:5", "lb:2:0" (beta, j),
/// "levels:0,1,2:1,2,1" (breakpoints, levels) and "thin_tail".
MixedDistribution parse_distribution(const std::string &text);

Json to_json(const PiecewiseConstantFn &fn);
PiecewiseConstantFn piecewise_from_json(const Json &j);

Json to_json(const IronedVirtualFunction &fn);

/// Tagged by "type": lottery, one_level_lottery, two_level_lottery, vickrey,
/// ratio_auction, ironed_maximizer (with "distribution" and "objective"),
/// rsol, mixture (with "components": [{"weight", "mechanism"}]),
/// random_price_posting.
Json to_json(const MechanismSpec &spec);
MechanismSpec mechanism_from_json(const Json &j);
/// JSON text or shorthand such as "lottery:1", "vickrey:2", "ratio_auction:2:0.75",
/// "one_level_lottery:p:k", "two_level_lottery:p:q:k", "rsol:k", "thm_worst:k",
/// "random_price_posting:h".
MechanismSpec parse_mechanism(const std::string &text);

Json to_json(const Objective &obj);
Json to_json(const BenchmarkResult &result);
Json to_json(const ExpectedOutcome &outcome);
Json to_json(const Estimate &estimate);
Json to_json(const ValuationProfile &profile);

/// Rows of formatted cells under a header; written as RFC 4180-style CSV with
/// leading "# key: value" metadata comment lines.
struct CsvTable
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void write(std::ostream &out, const Json &metadata) const;
};

}  // namespace pfd
