#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfd/acceptance.hpp"
#include "pfd/errors.hpp"
#include "pfd/experiments.hpp"
#include "pfd/serialization.hpp"

namespace {

using pfd::CsvTable;
using pfd::Json;
using pfd::format_number;
using pfd::number_json;

struct IoError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct Globals
{
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  unsigned threads = 0;
  std::string format = "json";
  std::string out;
};

std::size_t samples_or(const Globals &g, std::size_t fallback) { return g.samples > 0 ? g.samples : fallback; }

std::string default_dir()
{
  const char *env = std::getenv("PD_OUTPUT_DIR");
  return env != nullptr ? std::string(env) : std::string();
}

std::vector<std::string> split_list(const std::string &text, char sep = ',')
{
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) {
      parts.push_back(item);
    }
  }
  return parts;
}

double parse_number(const std::string &text)
{
  if (text == "e") {
    return std::numbers::e;
  }
  if (text == "inf") {
    return pfd::kInfinity;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception &) {
    throw pfd::DomainError("cannot parse number '" + text + "'");
  }
  if (used != text.size()) {
    throw pfd::DomainError("cannot parse number '" + text + "'");
  }
  return x;
}

std::vector<double> number_list(const std::string &text)
{
  std::vector<double> out;
  for (const auto &part : split_list(text)) {
    out.push_back(parse_number(part));
  }
  if (out.empty()) {
    throw pfd::DomainError("empty list '" + text + "'");
  }
  return out;
}

template <class Int>
std::vector<Int> integer_list(const std::string &text)
{
  std::vector<Int> out;
  for (double x : number_list(text)) {
    if (x < 0 || x != std::floor(x)) {
      throw pfd::DomainError("expected non-negative integers in '" + text + "'");
    }
    out.push_back(static_cast<Int>(x));
  }
  return out;
}

std::vector<std::string> profile_row(const pfd::ValuationProfile &profile, std::size_t width)
{
  std::vector<std::string> row;
  for (std::size_t i = 0; i < width; ++i) {
    row.push_back(i < profile.size() ? format_number(profile[i]) : "");
  }
  return row;
}

Json profile_json(const pfd::ValuationProfile &profile) { return pfd::to_json(profile); }

void write_output(const Globals &g, const std::string &command, const Json &config, const Json &results,
                  const CsvTable &table)
{
  Json meta{{"command", command},
            {"version", pfd::library_version()},
            {"seed", g.seed},
            {"threads", g.threads},
            {"format", g.format},
            {"config", config}};
  std::string path = g.out;
  if (path.empty() && !default_dir().empty()) {
    path = (std::filesystem::path(default_dir()) / (command + "." + g.format)).string();
  }
  std::ofstream file;
  std::ostream *out = &std::cout;
  if (!path.empty() && path != "-") {
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
      std::filesystem::create_directories(parent, ec);
    }
    file.open(path);
    if (!file) {
      throw IoError("cannot write '" + path + "'");
    }
    out = &file;
  }
  if (g.format == "csv") {
    Json flat = meta;
    flat["config"] = config.dump();
    table.write(*out, flat);
  } else {
    *out << Json{{"meta", meta}, {"results", results}}.dump(2) << '\n';
  }
  out->flush();
  if (!*out) {
    throw IoError("failed writing '" + (path.empty() ? std::string("stdout") : path) + "'");
  }
}

// Commands -------------------------------------------------------------------------

struct BenchmarkArgs
{
  std::string profile;
  int k = 1;
  std::string objective = "residual";
};

void cmd_benchmark(const Globals &g, const BenchmarkArgs &a)
{
  const auto profile = pfd::parse_profile(a.profile);
  const auto obj = pfd::parse_objective(a.objective);
  const auto result = pfd::benchmark(profile, a.k, obj);
  Json results = pfd::to_json(result);
  results["profile"] = profile_json(profile);
  results["k"] = a.k;
  CsvTable table{{"value", "p", "q", "p_inclusive", "q_inclusive"}, {}};
  table.add_row({format_number(result.value), format_number(result.argmax_p), format_number(result.argmax_q),
                  result.p_inclusive ? "1" : "0", result.q_inclusive ? "1" : "0"});
  write_output(g, "benchmark", Json{{"profile", a.profile}, {"k", a.k}, {"objective", obj.name()}}, results, table);
}

struct MechEvalArgs
{
  std::string mechanism;
  std::string profile;
  std::string objective = "residual";
};

void cmd_mech_eval(const Globals &g, const MechEvalArgs &a)
{
  const auto profile = pfd::parse_profile(a.profile);
  const auto obj = pfd::parse_objective(a.objective);
  const auto mech = pfd::parse_mechanism(a.mechanism);
  pfd::EvalOptions options;
  options.rsol_samples = samples_or(g, options.rsol_samples);
  options.seed = g.seed;
  const auto outcome = pfd::evaluate(mech, profile, options);
  const double value = pfd::objective_value(outcome, profile, obj);
  Json results{{"mechanism", pfd::mechanism_name(mech)},
               {"profile", profile_json(profile)},
               {"outcome", pfd::to_json(outcome)},
               {"objective_value", number_json(value)}};
  CsvTable table{{"agent", "value", "alloc", "payment"}, {}};
  for (std::size_t i = 0; i < profile.size(); ++i) {
    table.add_row({std::to_string(i + 1), format_number(profile[i]), format_number(outcome.alloc[i]),
                   format_number(outcome.payment[i])});
  }
  table.add_row({"objective", "", "", format_number(value)});
  write_output(g, "mech-eval",
               Json{{"mechanism", pfd::to_json(mech)},
                    {"profile", a.profile},
                    {"objective", obj.name()},
                    {"rsol_samples", options.rsol_samples}},
               results, table);
}

struct RatioSweepArgs
{
  std::string mechanism;
  int k = 1;
  std::string objective = "residual";
  double lo = 0.0;
  double hi = 4.0;
  std::size_t points = 200;
  std::size_t random = 0;
  std::size_t n_min = 2;
  std::size_t n_max = 10;
};

void cmd_ratio_sweep(const Globals &g, const RatioSweepArgs &a)
{
  const auto mech = pfd::parse_mechanism(a.mechanism);
  const auto obj = pfd::parse_objective(a.objective);
  std::vector<pfd::ValuationProfile> grid;
  std::string grid_spec;
  if (a.random > 0) {
    grid = pfd::random_profiles(a.random, a.n_min, a.n_max, 1e-2, 1e2, g.seed);
    grid_spec = std::to_string(a.random) + " log-uniform profiles, n in [" + std::to_string(a.n_min) + ", " +
                std::to_string(a.n_max) + "]";
  } else {
    grid = pfd::pair_grid(a.lo, a.hi, a.points);
    grid_spec = std::to_string(a.points) + "x" + std::to_string(a.points) + " over [" + format_number(a.lo) +
                ", " + format_number(a.hi) + "]^2";
  }
  pfd::EvalOptions options;
  options.rsol_samples = samples_or(g, options.rsol_samples);
  options.seed = g.seed;
  const auto report = pfd::worst_case_ratio_grid(mech, a.k, obj, grid, grid_spec, options);

  std::size_t width = 0;
  for (const auto &cell : report.cells) {
    width = std::max(width, cell.profile.size());
  }
  CsvTable table;
  for (std::size_t i = 0; i < width; ++i) {
    table.header.push_back("v" + std::to_string(i + 1));
  }
  for (const char *name : {"mech_value", "benchmark", "ratio"}) {
    table.header.emplace_back(name);
  }
  Json cells = Json::array();
  for (const auto &cell : report.cells) {
    auto row = profile_row(cell.profile, width);
    row.push_back(format_number(cell.mechanism));
    row.push_back(format_number(cell.benchmark));
    row.push_back(format_number(cell.ratio));
    table.add_row(std::move(row));
    cells.push_back(Json{{"profile", profile_json(cell.profile)},
                         {"mech_value", number_json(cell.mechanism)},
                         {"benchmark", number_json(cell.benchmark)},
                         {"ratio", number_json(cell.ratio)}});
  }
  std::vector<std::string> summary(width + 3);
  summary[0] = "worst";
  summary.back() = format_number(report.worst_ratio);
  table.add_row(std::move(summary));
  Json results{{"worst_ratio", number_json(report.worst_ratio)},
               {"argmax_profile", profile_json(report.argmax_profile)},
               {"grid", report.grid_spec},
               {"cells", cells}};
  write_output(g, "ratio-sweep",
               Json{{"mechanism", pfd::to_json(mech)},
                    {"k", a.k},
                    {"objective", obj.name()},
                    {"lo", a.lo},
                    {"hi", a.hi},
                    {"points", a.points},
                    {"random", a.random},
                    {"n_min", a.n_min},
                    {"n_max", a.n_max},
                    {"rsol_samples", options.rsol_samples}},
               results, table);
}

struct AdoptionArgs
{
  std::string mechanism;
  std::string distribution;
  std::size_t n = 2;
  int k = 1;
  std::string objective = "residual";
};

void cmd_adoption(const Globals &g, const AdoptionArgs &a)
{
  const auto mech = pfd::parse_mechanism(a.mechanism);
  const auto dist = pfd::parse_distribution(a.distribution);
  const auto obj = pfd::parse_objective(a.objective);
  const std::size_t samples = samples_or(g, 100'000);
  const auto report = pfd::adoption_advantage(mech, dist, a.n, a.k, obj, samples, g.seed);
  Json results{{"benchmark", pfd::to_json(report.benchmark)},
               {"mechanism", pfd::to_json(report.mechanism)},
               {"advantage", number_json(report.advantage)}};
  CsvTable table{{"quantity", "mean", "stderr", "samples"}, {}};
  table.add_row({"benchmark", format_number(report.benchmark.mean), format_number(report.benchmark.std_error),
                 std::to_string(report.benchmark.samples)});
  table.add_row({"mechanism", format_number(report.mechanism.mean), format_number(report.mechanism.std_error),
                 std::to_string(report.mechanism.samples)});
  table.add_row({"advantage", format_number(report.advantage), "", ""});
  write_output(g, "adoption",
               Json{{"mechanism", pfd::to_json(mech)},
                    {"distribution", pfd::to_json(dist)},
                    {"n", a.n},
                    {"k", a.k},
                    {"objective", obj.name()},
                    {"samples", samples}},
               results, table);
}

struct RsolArgs
{
  std::string n_list = "2,3,4,8,16,32,64";
  std::string k_list = "1,2";
  std::string families = "ones_then_zeros,geometric,uniform_grid,all_equal,random";
  std::size_t trials = 10;
  std::string steps;
  int k = 1;
};

void cmd_rsol(const Globals &g, const RsolArgs &a)
{
  if (!a.steps.empty()) {
    const auto profile = pfd::parse_profile(a.steps);
    const auto check = pfd::rsol_step_checks(profile, a.k);
    Json results{{"profile", profile_json(profile)},
                 {"balanced_partitions", check.balanced_partitions},
                 {"conditional_sample_value", number_json(check.conditional_sample_value)},
                 {"truncated_optimum", number_json(check.truncated_optimum)},
                 {"worst_market_to_sample", number_json(check.worst_market_to_sample)},
                 {"step1", check.step1},
                 {"step2", check.step2}};
    CsvTable table{{"balanced_partitions", "conditional_sample_value", "truncated_optimum",
                    "worst_market_to_sample", "step1", "step2"},
                   {}};
    table.add_row({std::to_string(check.balanced_partitions), format_number(check.conditional_sample_value),
                   format_number(check.truncated_optimum), format_number(check.worst_market_to_sample),
                   check.step1 ? "1" : "0", check.step2 ? "1" : "0"});
    write_output(g, "rsol", Json{{"steps", a.steps}, {"k", a.k}}, results, table);
    return;
  }
  std::vector<pfd::ProfileFamily> families;
  for (const auto &name : split_list(a.families)) {
    families.push_back(pfd::parse_family(name));
  }
  const std::size_t rsol_samples = samples_or(g, 4096);
  const auto report = pfd::rsol_ratio_sweep(integer_list<std::size_t>(a.n_list), integer_list<int>(a.k_list),
                                            families, a.trials, g.seed, rsol_samples);
  CsvTable table{{"family", "n", "k", "profile", "benchmark", "rsol", "platform", "ratio", "rsol_ratio", "exact"},
                 {}};
  Json cells = Json::array();
  for (const auto &cell : report.cells) {
    table.add_row({cell.family, std::to_string(cell.n), std::to_string(cell.k), pfd::format_profile(cell.profile),
                   format_number(cell.benchmark), format_number(cell.rsol), format_number(cell.platform),
                   format_number(cell.ratio), format_number(cell.rsol_ratio), cell.exact ? "1" : "0"});
    cells.push_back(Json{{"family", cell.family},
                         {"n", cell.n},
                         {"k", cell.k},
                         {"profile", profile_json(cell.profile)},
                         {"benchmark", number_json(cell.benchmark)},
                         {"rsol", number_json(cell.rsol)},
                         {"platform", number_json(cell.platform)},
                         {"ratio", number_json(cell.ratio)},
                         {"rsol_ratio", number_json(cell.rsol_ratio)},
                         {"exact", cell.exact}});
  }
  Json results{{"worst_ratio", number_json(report.worst_ratio)},
               {"argmax_profile", profile_json(report.argmax_profile)},
               {"within_216", report.worst_ratio <= 216.0},
               {"cells", cells}};
  write_output(g, "rsol",
               Json{{"n_list", a.n_list},
                    {"k_list", a.k_list},
                    {"families", a.families},
                    {"trials", a.trials},
                    {"rsol_samples", rsol_samples}},
               results, table);
}

struct MonopolyArgs
{
  std::string h = "e,10,100";
  std::size_t points = 20;
  std::string distribution;
};

void cmd_monopoly(const Globals &g, const MonopolyArgs &a)
{
  if (!a.distribution.empty()) {
    const auto dist = pfd::parse_distribution(a.distribution);
    const auto m = pfd::monopoly_price(dist);
    CsvTable table{{"price", "revenue"}, {}};
    table.add_row({format_number(m.price), format_number(m.revenue)});
    write_output(g, "monopoly", Json{{"distribution", pfd::to_json(dist)}},
                 Json{{"price", number_json(m.price)}, {"revenue", number_json(m.revenue)}}, table);
    return;
  }
  if (a.points < 2) {
    throw pfd::DomainError("monopoly needs at least two points");
  }
  const std::size_t samples = samples_or(g, 1'000'000);
  CsvTable table{{"h", "kind", "x", "mc_revenue", "stderr", "expected"}, {}};
  Json rows = Json::array();
  const auto hs = number_list(a.h);
  for (std::size_t hi = 0; hi < hs.size(); ++hi) {
    const double h = hs[hi];
    const auto dist = pfd::MixedDistribution::equal_revenue(h);
    std::vector<double> xs(a.points);
    for (std::size_t i = 0; i < a.points; ++i) {
      xs[i] = std::pow(h, static_cast<double>(i) / static_cast<double>(a.points - 1));
    }
    const auto posting = pfd::mc_columns(samples, pfd::RngStream::substream(g.seed, 2 * hi).bits(), a.points,
                                         [&](pfd::RngStream &rng, double *out) {
                                           const double price = pfd::sample_posting_price(h, rng);
                                           for (std::size_t i = 0; i < xs.size(); ++i) {
                                             out[i] = price <= xs[i] ? price : 0.0;
                                           }
                                         });
    const auto revenue = pfd::mc_columns(samples, pfd::RngStream::substream(g.seed, 2 * hi + 1).bits(), a.points,
                                         [&](pfd::RngStream &rng, double *out) {
                                           const double v = dist.sample(rng);
                                           for (std::size_t i = 0; i < xs.size(); ++i) {
                                             out[i] = v >= xs[i] ? xs[i] : 0.0;
                                           }
                                         });
    for (std::size_t i = 0; i < a.points; ++i) {
      const double expected_posting = pfd::expected_posting_revenue(xs[i], h);
      const double expected_revenue = xs[i] * (1.0 - dist.cdf_left(xs[i]));
      table.add_row({format_number(h), "posting", format_number(xs[i]), format_number(posting[i].mean),
                     format_number(posting[i].std_error), format_number(expected_posting)});
      table.add_row({format_number(h), "equal_revenue", format_number(xs[i]), format_number(revenue[i].mean),
                     format_number(revenue[i].std_error), format_number(expected_revenue)});
      rows.push_back(Json{{"h", number_json(h)},
                          {"value", number_json(xs[i])},
                          {"posting", pfd::to_json(posting[i])},
                          {"posting_expected", number_json(expected_posting)},
                          {"equal_revenue", pfd::to_json(revenue[i])},
                          {"equal_revenue_expected", number_json(expected_revenue)}});
    }
    table.add_row({format_number(h), "mean_value", "", "", "", format_number(dist.mean())});
  }
  write_output(g, "monopoly", Json{{"h_list", a.h}, {"points", a.points}, {"samples", samples}},
               Json{{"rows", rows}}, table);
}

struct BalancedArgs
{
  std::string n = "10,100,1000";
};

void cmd_balanced(const Globals &g, const BalancedArgs &a)
{
  const std::size_t trials = samples_or(g, 1'000'000);
  const auto root = pfd::ruin_root();
  CsvTable table{{"n", "probability", "stderr", "exact"}, {}};
  Json rows = Json::array();
  for (std::size_t n : integer_list<std::size_t>(a.n)) {
    const auto est = pfd::balanced_probability(n, trials, pfd::RngStream::substream(g.seed, n).bits());
    const double exact = pfd::balanced_probability_exact(n);
    table.add_row({std::to_string(n), format_number(est.mean), format_number(est.std_error), format_number(exact)});
    rows.push_back(Json{{"n", n}, {"estimate", pfd::to_json(est)}, {"exact", number_json(exact)}});
  }
  Json results{{"ruin_root", number_json(root.root)},
               {"cube", number_json(root.cube)},
               {"bound", number_json(root.bound)},
               {"rows", rows}};
  write_output(g, "balanced", Json{{"n", a.n}, {"trials", trials}}, results, table);
}

struct LowerBoundArgs
{
  int beta = 2;
  std::size_t n = 55;
};

void cmd_lowerbound(const Globals &g, const LowerBoundArgs &a)
{
  const std::size_t trials = samples_or(g, 100'000);
  const auto report = pfd::lb_standard_auctions(a.beta, a.n, trials, g.seed);
  CsvTable table{{"kind", "parameter", "mean", "stderr"}, {}};
  Json special = Json::array();
  for (std::size_t j = 0; j < report.special_lottery.size(); ++j) {
    const auto &e = report.special_lottery[j];
    table.add_row({"special_lottery", std::to_string(j), format_number(e.mean), format_number(e.std_error)});
    special.push_back(pfd::to_json(e));
  }
  Json randomized = Json::array();
  for (std::size_t i = 0; i < report.price_grid.size(); ++i) {
    const auto &e = report.randomized[i];
    table.add_row({"randomized", format_number(report.price_grid[i]), format_number(e.mean),
                   format_number(e.std_error)});
    randomized.push_back(Json{{"price", number_json(report.price_grid[i])}, {"estimate", pfd::to_json(e)}});
  }
  Json results{{"special_lottery", special},
               {"randomized", randomized},
               {"best_special", number_json(report.best_special)},
               {"best_randomized", number_json(report.best_randomized)},
               {"best_randomized_price", number_json(report.best_randomized_price)},
               {"separation", number_json(report.separation)},
               {"claim_a", report.best_special >= a.beta / 4.0}};
  write_output(g, "lowerbound", Json{{"beta", a.beta}, {"n", a.n}, {"samples", trials}}, results, table);
}

struct ProfitArgs
{
  std::vector<std::string> distributions{"uniform:0:1", "exponential:1", "power_law:2:1", "thin_tail"};
  std::string n = "2,5";
};

void cmd_profit_checks(const Globals &g, const ProfitArgs &a)
{
  const std::size_t samples = samples_or(g, 100'000);
  CsvTable table{{"distribution", "check", "left", "right", "holds"}, {}};
  Json rows = Json::array();
  const auto ns = integer_list<std::size_t>(a.n);
  std::uint64_t stream = 0;
  for (const auto &text : a.distributions) {
    const auto dist = pfd::parse_distribution(text);
    const bool triangle = pfd::inscribed_triangle_check(dist);
    table.add_row({text, "inscribed_triangle", "", "", triangle ? "1" : "0"});
    rows.push_back(Json{{"distribution", text}, {"check", "inscribed_triangle"}, {"holds", triangle}});

    const auto vm = pfd::vickrey2_vs_monopoly(dist, samples, pfd::RngStream::substream(g.seed, stream++).bits());
    table.add_row({text, "vickrey2_vs_monopoly", format_number(vm.vickrey.mean), format_number(vm.monopoly),
                   vm.holds ? "1" : "0"});
    rows.push_back(Json{{"distribution", text},
                        {"check", "vickrey2_vs_monopoly"},
                        {"vickrey", pfd::to_json(vm.vickrey)},
                        {"vickrey_exact", number_json(vm.vickrey_exact)},
                        {"monopoly", number_json(vm.monopoly)},
                        {"holds", vm.holds}});
    for (std::size_t n : ns) {
      const auto cmp =
          pfd::bm2_vs_myerson_profit(dist, n, samples, pfd::RngStream::substream(g.seed, stream++).bits());
      const std::string check = "bm2_vs_myerson n=" + std::to_string(n);
      table.add_row({text, check, format_number(cmp.bm2.mean), format_number(cmp.myerson.mean),
                     cmp.holds ? "1" : "0"});
      rows.push_back(Json{{"distribution", text},
                          {"check", "bm2_vs_myerson"},
                          {"n", n},
                          {"bm2", pfd::to_json(cmp.bm2)},
                          {"myerson", pfd::to_json(cmp.myerson)},
                          {"holds", cmp.holds}});
    }
  }
  write_output(g, "profit-checks", Json{{"distributions", a.distributions}, {"n", a.n}, {"samples", samples}},
               Json{{"rows", rows}}, table);
}

struct IroningArgs
{
  std::string distribution;
  std::string objective = "residual";
  std::size_t grid_cells = std::size_t{1} << 14;
};

void cmd_ironing_dump(const Globals &g, const IroningArgs &a)
{
  const auto dist = pfd::parse_distribution(a.distribution);
  const auto obj = pfd::parse_objective(a.objective);
  const auto fn = pfd::iron(dist, obj, pfd::IroningOptions{a.grid_cells});
  CsvTable table{{"q_lo", "q_hi", "v_lo", "v_hi", "slope", "unironed"}, {}};
  for (std::size_t j = 0; j < fn.slopes().size(); ++j) {
    table.add_row({format_number(fn.quantile_breakpoints()[j]), format_number(fn.quantile_breakpoints()[j + 1]),
                   format_number(fn.value_breakpoints()[j]), format_number(fn.value_breakpoints()[j + 1]),
                   format_number(fn.slopes()[j]), fn.unironed()[j] ? "1" : "0"});
  }
  Json results = pfd::to_json(fn);
  results["integral"] = number_json(fn.integral());
  write_output(g, "ironing-dump",
               Json{{"distribution", pfd::to_json(dist)}, {"objective", obj.name()}, {"grid_cells", a.grid_cells}},
               results, table);
}

struct ReproduceArgs
{
  std::vector<std::string> only;
  std::string out_dir;
};

int cmd_reproduce(const Globals &g, const ReproduceArgs &a)
{
  std::string dir = a.out_dir;
  if (dir.empty()) {
    dir = default_dir().empty() ? std::string("pd_output") : default_dir();
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / "manifest.json";
  std::ofstream file(path);
  if (!file) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  const auto results = pfd::run_acceptance(a.only);
  Json criteria = Json::array();
  std::vector<std::string> failed;
  for (const auto &r : results) {
    Json measured = Json::object();
    for (const auto &[name, value] : r.measured) {
      measured[name] = number_json(value);
    }
    criteria.push_back(Json{{"id", r.id},
                            {"section", r.section},
                            {"title", r.title},
                            {"seed", r.seed},
                            {"pass", r.pass},
                            {"seconds", r.seconds},
                            {"measured", measured},
                            {"failures", r.failures}});
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << ' ' << r.section << '\n';
    if (!r.pass) {
      failed.push_back(r.section);
    }
  }
  Json manifest{{"meta",
                 {{"command", "reproduce"},
                  {"version", pfd::library_version()},
                  {"threads", g.threads},
                  {"config", {{"only", a.only}, {"out_dir", dir}}}}},
                {"criteria", criteria},
                {"all_pass", failed.empty()}};
  file << manifest.dump(2) << '\n';
  file.flush();
  if (!file) {
    throw IoError("failed writing '" + path.string() + "'");
  }
  if (!failed.empty()) {
    std::cerr << "failed:";
    for (const auto &f : failed) {
      std::cerr << ' ' << f;
    }
    std::cerr << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Prior-free platform design toolkit"};
  app.set_version_flag("--version", pfd::library_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte Carlo samples (0 = command default)");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "Output file ('-' for stdout; default $PD_OUTPUT_DIR/<command>.<format>)");

  BenchmarkArgs bench;
  auto *c_bench = app.add_subcommand("benchmark", "Best two-level lottery on a profile");
  c_bench->add_option("--profile", bench.profile, "Comma-separated values")->required();
  c_bench->add_option("--k", bench.k, "Units")->capture_default_str();
  c_bench->add_option("--objective", bench.objective, "residual, profit, surplus or alpha,beta")
      ->capture_default_str();

  MechEvalArgs eval;
  auto *c_eval = app.add_subcommand("mech-eval", "Expected outcome of a mechanism on a profile");
  c_eval->add_option("--mechanism", eval.mechanism, "Mechanism JSON or shorthand")->required();
  c_eval->add_option("--profile", eval.profile, "Comma-separated values")->required();
  c_eval->add_option("--objective", eval.objective)->capture_default_str();

  RatioSweepArgs sweep;
  auto *c_sweep = app.add_subcommand("ratio-sweep", "Benchmark / mechanism ratio over a profile grid");
  c_sweep->add_option("--mechanism", sweep.mechanism, "Mechanism JSON or shorthand")->required();
  c_sweep->add_option("--k", sweep.k)->capture_default_str();
  c_sweep->add_option("--objective", sweep.objective)->capture_default_str();
  c_sweep->add_option("--lo", sweep.lo)->capture_default_str();
  c_sweep->add_option("--hi", sweep.hi)->capture_default_str();
  c_sweep->add_option("--points", sweep.points, "Points per axis of the pair grid")->capture_default_str();
  c_sweep->add_option("--random", sweep.random, "Use this many random profiles instead of the pair grid");
  c_sweep->add_option("--n-min", sweep.n_min)->capture_default_str();
  c_sweep->add_option("--n-max", sweep.n_max)->capture_default_str();

  AdoptionArgs adopt;
  auto *c_adopt = app.add_subcommand("adoption", "E[benchmark] / E[mechanism] under a distribution");
  c_adopt->add_option("--mechanism", adopt.mechanism)->required();
  c_adopt->add_option("--distribution", adopt.distribution, "Distribution JSON or shorthand")->required();
  c_adopt->add_option("--n", adopt.n)->capture_default_str();
  c_adopt->add_option("--k", adopt.k)->capture_default_str();
  c_adopt->add_option("--objective", adopt.objective)->capture_default_str();

  RsolArgs rsol;
  auto *c_rsol = app.add_subcommand("rsol", "RSOL platform ratio sweep or proof-step checks");
  c_rsol->add_option("--n-list", rsol.n_list)->capture_default_str();
  c_rsol->add_option("--k-list", rsol.k_list)->capture_default_str();
  c_rsol->add_option("--families", rsol.families)->capture_default_str();
  c_rsol->add_option("--trials", rsol.trials, "Random profiles per (n, k)")->capture_default_str();
  c_rsol->add_option("--steps", rsol.steps, "Check both proof steps on this profile instead");
  c_rsol->add_option("--k", rsol.k, "Units for --steps")->capture_default_str();

  MonopolyArgs mono;
  auto *c_mono = app.add_subcommand("monopoly", "Random price posting and equal-revenue game value");
  c_mono->add_option("--h-list", mono.h, "Comma-separated upper supports ('e' allowed)")->capture_default_str();
  c_mono->add_option("--points", mono.points)->capture_default_str();
  c_mono->add_option("--distribution", mono.distribution, "Report the monopoly price of this distribution instead");

  BalancedArgs bal;
  auto *c_bal = app.add_subcommand("balanced", "Balanced sampling probability");
  c_bal->add_option("--n", bal.n, "Comma-separated agent counts")->capture_default_str();

  LowerBoundArgs lb;
  auto *c_lb = app.add_subcommand("lowerbound", "Standard lotteries on the lower-bound family");
  c_lb->add_option("--beta", lb.beta)->capture_default_str();
  c_lb->add_option("--n", lb.n)->capture_default_str();

  ProfitArgs profit;
  auto *c_profit = app.add_subcommand("profit-checks", "Profit benchmark comparisons");
  c_profit->add_option("--distribution", profit.distributions, "Repeatable")->capture_default_str();
  c_profit->add_option("--n", profit.n)->capture_default_str();

  IroningArgs ironing;
  auto *c_iron = app.add_subcommand("ironing-dump", "Ironed virtual value intervals");
  c_iron->add_option("--distribution", ironing.distribution)->required();
  c_iron->add_option("--objective", ironing.objective)->capture_default_str();
  c_iron->add_option("--grid-cells", ironing.grid_cells)->capture_default_str();

  ReproduceArgs repro;
  auto *c_repro = app.add_subcommand("reproduce", "Run the acceptance suite and write a manifest");
  c_repro->add_option("--only", repro.only, "Section name or number (repeatable)");
  c_repro->add_option("--out-dir", repro.out_dir, "Manifest directory (default $PD_OUTPUT_DIR or pd_output)");

  CLI11_PARSE(app, argc, argv);
  pfd::set_worker_threads(g.threads);

  try {
    if (c_bench->parsed()) {
      cmd_benchmark(g, bench);
    } else if (c_eval->parsed()) {
      cmd_mech_eval(g, eval);
    } else if (c_sweep->parsed()) {
      cmd_ratio_sweep(g, sweep);
    } else if (c_adopt->parsed()) {
      cmd_adoption(g, adopt);
    } else if (c_rsol->parsed()) {
      cmd_rsol(g, rsol);
    } else if (c_mono->parsed()) {
      cmd_monopoly(g, mono);
    } else if (c_bal->parsed()) {
      cmd_balanced(g, bal);
    } else if (c_lb->parsed()) {
      cmd_lowerbound(g, lb);
    } else if (c_profit->parsed()) {
      cmd_profit_checks(g, profit);
    } else if (c_iron->parsed()) {
      cmd_ironing_dump(g, ironing);
    } else if (c_repro->parsed()) {
      return cmd_reproduce(g, repro);
    }
  } catch (const IoError &e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const pfd::DomainError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const pfd::ConstructionError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
