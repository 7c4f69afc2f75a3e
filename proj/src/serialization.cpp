#include "pfd/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "pfd/errors.hpp"

namespace pfd {

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string> split(const std::string &text, char sep)
{
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string &text)
{
  if (text == "inf") {
    return kInfinity;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    throw ConstructionError("cannot parse number '" + text + "'");
  }
  if (used != text.size()) {
    throw ConstructionError("cannot parse number '" + text + "'");
  }
  return value;
}

std::vector<double> to_doubles(const std::string &text)
{
  std::vector<double> out;
  for (const auto &part : split(text, ',')) {
    out.push_back(to_double(part));
  }
  return out;
}

const char *shape_name(PieceShape shape)
{
  switch (shape) {
  case PieceShape::exponential:
    return "exponential";
  case PieceShape::pareto:
    return "pareto";
  case PieceShape::linear:
    return "linear";
  }
  return "exponential";
}

PieceShape shape_from_name(const std::string &name)
{
  if (name == "exponential") {
    return PieceShape::exponential;
  }
  if (name == "pareto") {
    return PieceShape::pareto;
  }
  if (name == "linear") {
    return PieceShape::linear;
  }
  throw ConstructionError("unknown piece shape '" + name + "'");
}

int int_field(const Json &j, const char *key, int fallback)
{
  return j.contains(key) ? j.at(key).get<int>() : fallback;
}

}  // namespace

std::string library_version() { return PFD_VERSION; }

std::string format_number(double x)
{
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

Json number_json(double x)
{
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  if (std::isnan(x)) {
    return "nan";
  }
  return x;
}

double number_from_json(const Json &j)
{
  if (j.is_number()) {
    return j.get<double>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") {
      return kInfinity;
    }
    if (s == "-inf") {
      return -kInfinity;
    }
  }
  throw ConstructionError("expected a number, got " + j.dump());
}

Json to_json(const MixedDistribution &dist)
{
  Json pieces = Json::array();
  for (const auto &p : dist.pieces()) {
    Json item{{"start", p.start}, {"rate", p.rate}};
    if (p.shape != PieceShape::exponential) {
      item["shape"] = shape_name(p.shape);
    }
    pieces.push_back(item);
  }
  Json atoms = Json::array();
  for (const auto &a : dist.atoms()) {
    atoms.push_back({{"value", a.value}, {"mass", a.mass}});
  }
  Json out{{"pieces", pieces}, {"atoms", atoms}};
  if (std::isfinite(dist.upper_support())) {
    out["upper_support"] = dist.upper_support();
  }
  return out;
}

MixedDistribution distribution_from_json(const Json &j)
{
  if (!j.is_object()) {
    throw ConstructionError("distribution JSON must be an object");
  }
  std::vector<Piece> pieces;
  if (j.contains("pieces")) {
    for (const auto &p : j.at("pieces")) {
      Piece piece;
      piece.start = number_from_json(p.at("start"));
      piece.rate = number_from_json(p.at("rate"));
      if (p.contains("shape")) {
        piece.shape = shape_from_name(p.at("shape").get<std::string>());
      }
      pieces.push_back(piece);
    }
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    for (const auto &a : j.at("atoms")) {
      atoms.push_back({number_from_json(a.at("value")), number_from_json(a.at("mass"))});
    }
  }
  const double upper = j.contains("upper_support") ? number_from_json(j.at("upper_support")) : kInfinity;
  return MixedDistribution(std::move(pieces), std::move(atoms), upper);
}

MixedDistribution parse_distribution(const std::string &text)
{
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception &e) {
      throw ConstructionError(std::string("invalid distribution JSON: ") + e.what());
    }
    return distribution_from_json(j);
  }
  const auto parts = split(text, ':');
  if (parts.empty()) {
    throw ConstructionError("empty distribution");
  }
  const std::string &name = parts[0];
  auto arg = [&](std::size_t i) {
    if (i >= parts.size()) {
      throw ConstructionError("distribution '" + text + "' is missing parameters");
    }
    return to_double(parts[i]);
  };
  if (name == "exponential") {
    return MixedDistribution::exponential(parts.size() > 1 ? arg(1) : 1.0);
  }
  if (name == "uniform") {
    return MixedDistribution::uniform(arg(1), arg(2));
  }
  if (name == "power_law") {
    return MixedDistribution::power_law(arg(1), parts.size() > 2 ? arg(2) : 1.0);
  }
  if (name == "equal_revenue") {
    return MixedDistribution::equal_revenue(arg(1));
  }
  if (name == "point_mass") {
    return MixedDistribution::point_mass(arg(1));
  }
  if (name == "lb") {
    const auto beta = static_cast<int>(arg(1));
    const auto j = static_cast<int>(arg(2));
    return build_from_virtual_values(lb_family_levels(beta, j));
  }
  if (name == "levels") {
    if (parts.size() != 3) {
      throw ConstructionError("levels distribution needs breakpoints and levels");
    }
    PiecewiseConstantFn fn{to_doubles(parts[1]), to_doubles(parts[2])};
    return build_from_virtual_values(fn);
  }
  if (name == "thin_tail") {
    return thin_tail_distribution();
  }
  throw ConstructionError("unknown distribution '" + text + "'");
}

Json to_json(const PiecewiseConstantFn &fn) { return Json{{"breakpoints", fn.breakpoints}, {"levels", fn.levels}}; }

PiecewiseConstantFn piecewise_from_json(const Json &j)
{
  PiecewiseConstantFn fn;
  for (const auto &b : j.at("breakpoints")) {
    fn.breakpoints.push_back(number_from_json(b));
  }
  for (const auto &l : j.at("levels")) {
    fn.levels.push_back(number_from_json(l));
  }
  fn.validate();
  return fn;
}

Json to_json(const IronedVirtualFunction &fn)
{
  Json values = Json::array();
  for (double v : fn.value_breakpoints()) {
    values.push_back(number_json(v));
  }
  return Json{{"breakpoints", fn.quantile_breakpoints()},
              {"value_breakpoints", values},
              {"slopes", fn.slopes()},
              {"exact", fn.exact()},
              {"unironed", fn.unironed()},
              {"objective", to_json(fn.objective())}};
}

Json to_json(const Objective &obj) { return Json{{"alpha", obj.alpha}, {"beta", obj.beta}, {"name", obj.name()}}; }

Json to_json(const MechanismSpec &spec)
{
  return std::visit(
      overloaded{
          [](const LotterySpec &m) { return Json{{"type", "lottery"}, {"k", m.k}}; },
          [](const OneLevelLotterySpec &m) {
            return Json{{"type", "one_level_lottery"}, {"p", number_json(m.p)}, {"k", m.k}};
          },
          [](const TwoLevelLotterySpec &m) {
            return Json{{"type", "two_level_lottery"}, {"p", number_json(m.p)}, {"q", number_json(m.q)}, {"k", m.k}};
          },
          [](const VickreySpec &m) { return Json{{"type", "vickrey"}, {"k", m.k}}; },
          [](const RatioAuctionSpec &m) { return Json{{"type", "ratio_auction"}, {"r", m.r}, {"b", m.b}}; },
          [](const IronedMaximizerSpec &m) {
            Json out{{"type", "ironed_maximizer"}, {"k", m.k}};
            if (m.ironed) {
              out["distribution"] = to_json(m.ironed->distribution());
              out["objective"] = m.ironed->objective().name();
            }
            return out;
          },
          [](const RsolSpec &m) { return Json{{"type", "rsol"}, {"k", m.k}}; },
          [](const MixtureSpec &m) {
            Json components = Json::array();
            for (const auto &c : m.components) {
              components.push_back({{"weight", c.weight}, {"mechanism", to_json(c.mechanism)}});
            }
            return Json{{"type", "mixture"}, {"components", components}};
          },
          [](const RandomPricePostingSpec &m) { return Json{{"type", "random_price_posting"}, {"h", m.h}}; },
      },
      spec);
}

MechanismSpec mechanism_from_json(const Json &j)
{
  if (!j.is_object() || !j.contains("type")) {
    throw ConstructionError("mechanism JSON needs a \"type\" field");
  }
  const auto type = j.at("type").get<std::string>();
  MechanismSpec spec;
  if (type == "lottery") {
    spec = LotterySpec{int_field(j, "k", 1)};
  } else if (type == "one_level_lottery") {
    spec = OneLevelLotterySpec{number_from_json(j.at("p")), int_field(j, "k", 1)};
  } else if (type == "two_level_lottery") {
    spec = TwoLevelLotterySpec{number_from_json(j.at("p")), number_from_json(j.at("q")), int_field(j, "k", 1)};
  } else if (type == "vickrey") {
    spec = VickreySpec{int_field(j, "k", 1)};
  } else if (type == "ratio_auction") {
    spec = RatioAuctionSpec{j.contains("r") ? number_from_json(j.at("r")) : 2.0,
                            j.contains("b") ? number_from_json(j.at("b")) : 0.75};
  } else if (type == "ironed_maximizer") {
    const MixedDistribution dist = j.at("distribution").is_string()
                                       ? parse_distribution(j.at("distribution").get<std::string>())
                                       : distribution_from_json(j.at("distribution"));
    const Objective obj = j.contains("objective") ? parse_objective(j.at("objective").get<std::string>())
                                                  : Objective::residual_surplus();
    spec = IronedMaximizerSpec{std::make_shared<const IronedVirtualFunction>(iron(dist, obj)), int_field(j, "k", 1)};
  } else if (type == "rsol") {
    spec = RsolSpec{int_field(j, "k", 1)};
  } else if (type == "mixture") {
    MixtureSpec mix;
    for (const auto &c : j.at("components")) {
      mix.components.push_back({number_from_json(c.at("weight")), mechanism_from_json(c.at("mechanism"))});
    }
    spec = std::move(mix);
  } else if (type == "random_price_posting") {
    spec = RandomPricePostingSpec{number_from_json(j.at("h"))};
  } else if (type == "thm_worst") {
    spec = thm_worst_platform(int_field(j, "k", 1));
  } else {
    throw ConstructionError("unknown mechanism type '" + type + "'");
  }
  validate(spec);
  return spec;
}

MechanismSpec parse_mechanism(const std::string &text)
{
  const auto first = text.find_first_not_of(" \t\n");
  if (first == std::string::npos || text[first] != '{') {
    const auto parts = split(text, ':');
    if (parts.empty()) {
      throw ConstructionError("empty mechanism");
    }
    static const std::map<std::string, std::vector<std::string>> fields{
        {"lottery", {"k"}},          {"one_level_lottery", {"p", "k"}}, {"two_level_lottery", {"p", "q", "k"}},
        {"vickrey", {"k"}},          {"ratio_auction", {"r", "b"}},     {"rsol", {"k"}},
        {"thm_worst", {"k"}},        {"random_price_posting", {"h"}},
    };
    const auto it = fields.find(parts.front());
    if (it == fields.end() || parts.size() - 1 > it->second.size()) {
      throw ConstructionError("cannot parse mechanism '" + text + "'");
    }
    Json j{{"type", parts.front()}};
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const double x = to_double(parts[i]);
      if (it->second[i - 1] == "k") {
        j["k"] = static_cast<int>(x);
        if (static_cast<double>(static_cast<int>(x)) != x) {
          throw ConstructionError("unit count must be an integer");
        }
      } else {
        j[it->second[i - 1]] = number_json(x);
      }
    }
    if (parts.front() == "random_price_posting" && parts.size() == 1) {
      j["h"] = 10.0;
    }
    return mechanism_from_json(j);
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception &e) {
    throw ConstructionError(std::string("invalid mechanism JSON: ") + e.what());
  }
  return mechanism_from_json(j);
}

Json to_json(const BenchmarkResult &result)
{
  return Json{{"value", number_json(result.value)},
              {"p", number_json(result.argmax_p)},
              {"q", number_json(result.argmax_q)},
              {"p_inclusive", result.p_inclusive},
              {"q_inclusive", result.q_inclusive},
              {"objective", to_json(result.objective)}};
}

Json to_json(const ExpectedOutcome &outcome)
{
  return Json{{"alloc", outcome.alloc}, {"payment", outcome.payment}, {"units", outcome.units}};
}

Json to_json(const Estimate &estimate)
{
  return Json{{"mean", number_json(estimate.mean)},
              {"stderr", number_json(estimate.std_error)},
              {"samples", estimate.samples},
              {"seed", estimate.seed}};
}

Json to_json(const ValuationProfile &profile) { return Json(profile.values()); }

void CsvTable::add_row(std::vector<std::string> row)
{
  if (!header.empty() && row.size() != header.size()) {
    throw DomainError("CSV row width does not match the header");
  }
  rows.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string &cell)
{
  if (cell.find_first_of(",\"\n") == std::string::npos) {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

void write_row(std::ostream &out, const std::vector<std::string> &row)
{
  for (std::size_t i = 0; i < row.size(); ++i) {
    out << (i ? "," : "") << csv_escape(row[i]);
  }
  out << '\n';
}

}  // namespace

void CsvTable::write(std::ostream &out, const Json &metadata) const
{
  for (const auto &[key, value] : metadata.items()) {
    out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  write_row(out, header);
  for (const auto &row : rows) {
    write_row(out, row);
  }
}

}  // namespace pfd
