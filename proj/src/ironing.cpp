#include "pfd/ironing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfd/errors.hpp"

namespace pfd {

void Objective::validate() const
{
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("objective coefficients must be finite");
  }
  if (alpha == 0.0 && beta == 0.0) {
    throw DomainError("objective (0, 0) is trivial");
  }
}

std::string Objective::name() const
{
  if (*this == residual_surplus()) {
    return "residual";
  }
  if (*this == profit()) {
    return "profit";
  }
  if (*this == surplus()) {
    return "surplus";
  }
  std::ostringstream out;
  out.precision(12);
  out << alpha << "," << beta;
  return out.str();
}

Objective parse_objective(const std::string &text)
{
  if (text == "residual" || text == "residual_surplus") {
    return Objective::residual_surplus();
  }
  if (text == "profit" || text == "revenue") {
    return Objective::profit();
  }
  if (text == "surplus") {
    return Objective::surplus();
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw DomainError("unknown objective '" + text + "'");
  }
  Objective obj;
  try {
    std::size_t used = 0;
    obj.alpha = std::stod(text.substr(0, comma), &used);
    obj.beta = std::stod(text.substr(comma + 1), &used);
  } catch (const std::exception &) {
    throw DomainError("cannot parse objective '" + text + "'");
  }
  obj.validate();
  return obj;
}

double virtual_value(const MixedDistribution &dist, const Objective &obj, double v)
{
  if (dist.has_atoms()) {
    throw DomainError("virtual values need a distribution without atoms");
  }
  const double inv_hazard = dist.inverse_hazard(v);
  return (obj.alpha + obj.beta) * v - obj.beta * inv_hazard;
}

namespace {

double cross(const Point2 &o, const Point2 &a, const Point2 &b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Indices of the lower hull vertices.
std::vector<std::size_t> lower_hull_indices(std::span<const Point2> pts)
{
  std::vector<std::size_t> hull;
  hull.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (hull.size() >= 2 && cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[i]) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

double slope(const Point2 &a, const Point2 &b) { return (b.y - a.y) / (b.x - a.x); }

double cumulative_at(const MixedDistribution &dist, const Objective &obj, double v, double s)
{
  const double integral = dist.survival_integral(v, 1);
  if (!std::isfinite(integral)) {
    throw DomainError("ironing needs a distribution with finite mean");
  }
  // integral of u f(u) over [min, v] = min - v S(v) + integral of S
  const double tail = std::isinf(v) ? 0.0 : v * s;
  const double partial_mean = dist.support_min() - tail + integral;
  return (obj.alpha + obj.beta) * partial_mean - obj.beta * integral;
}

struct Node
{
  double q;
  double v;
  double h;
};

}  // namespace

std::vector<Point2> lower_convex_hull(std::span<const Point2> points)
{
  if (points.size() < 2) {
    throw DomainError("convex hull needs at least two points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].x > points[i - 1].x)) {
      throw DomainError("convex hull input must have strictly increasing x");
    }
  }
  std::vector<Point2> out;
  for (std::size_t i : lower_hull_indices(points)) {
    out.push_back(points[i]);
  }
  return out;
}

double cumulative_virtual_value(const MixedDistribution &dist, const Objective &obj, double v)
{
  if (dist.has_atoms()) {
    throw DomainError("virtual values need a distribution without atoms");
  }
  return cumulative_at(dist, obj, v, dist.survival(v));
}

IronedVirtualFunction::IronedVirtualFunction(MixedDistribution dist, Objective obj,
                                             std::vector<double> quantile_breakpoints,
                                             std::vector<double> value_breakpoints,
                                             std::vector<double> slopes, bool exact,
                                             std::vector<bool> unironed)
  : dist_(std::move(dist)),
    obj_(obj),
    quantile_breakpoints_(std::move(quantile_breakpoints)),
    value_breakpoints_(std::move(value_breakpoints)),
    slopes_(std::move(slopes)),
    exact_(exact),
    unironed_(std::move(unironed))
{
  if (unironed_.empty()) {
    unironed_.assign(slopes_.size(), false);
  }
  if (unironed_.size() != slopes_.size()) {
    throw ConstructionError("one unironed flag per interval expected");
  }
  if (quantile_breakpoints_.size() < 2 || slopes_.size() + 1 != quantile_breakpoints_.size() ||
      value_breakpoints_.size() != quantile_breakpoints_.size()) {
    throw ConstructionError("ironed function needs m + 1 breakpoints for m slopes");
  }
  if (quantile_breakpoints_.front() != 0.0 || quantile_breakpoints_.back() != 1.0) {
    throw ConstructionError("quantile breakpoints must span [0, 1]");
  }
  for (std::size_t j = 1; j < quantile_breakpoints_.size(); ++j) {
    if (!(quantile_breakpoints_[j] > quantile_breakpoints_[j - 1])) {
      throw ConstructionError("quantile breakpoints must be strictly increasing");
    }
  }
  for (std::size_t j = 1; j < slopes_.size(); ++j) {
    if (slopes_[j] < slopes_[j - 1]) {
      throw ConstructionError("ironed slopes must be non-decreasing");
    }
  }
}

std::size_t IronedVirtualFunction::interval_at(double q) const
{
  const auto it = std::upper_bound(quantile_breakpoints_.begin(), quantile_breakpoints_.end(), q);
  std::ptrdiff_t j = (it - quantile_breakpoints_.begin()) - 1;
  j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(slopes_.size()) - 1);
  return static_cast<std::size_t>(j);
}

double IronedVirtualFunction::clamp_level(std::size_t j, double level) const
{
  const double lo = j > 0 ? slopes_[j - 1] : -kInfinity;
  const double hi = j + 1 < slopes_.size() ? slopes_[j + 1] : kInfinity;
  return std::clamp(level, lo, hi);
}

double IronedVirtualFunction::level_in(std::size_t j, double v) const
{
  if (!unironed_[j]) {
    return slopes_[j];
  }
  const double lo = value_breakpoints_[j];
  const double hi = value_breakpoints_[j + 1];
  double x = std::clamp(v, lo, hi);
  if (std::isinf(x)) {
    return clamp_level(j, slopes_[j]);
  }
  if (!dist_.in_continuous_support(x) || dist_.pdf(x) <= 0.0) {
    return clamp_level(j, slopes_[j]);
  }
  return clamp_level(j, virtual_value(dist_, obj_, x));
}

double IronedVirtualFunction::at_quantile(double q) const
{
  const std::size_t j = interval_at(q);
  if (!unironed_[j]) {
    return slopes_[j];
  }
  return level_in(j, dist_.quantile(std::clamp(q, 0.0, 1.0)));
}

double IronedVirtualFunction::operator()(double v) const
{
  const std::size_t j = interval_at(dist_.cdf(v));
  return unironed_[j] ? level_in(j, v) : slopes_[j];
}

template <class Pred>
double IronedVirtualFunction::first_value(Pred reaches) const
{
  for (std::size_t j = 0; j < slopes_.size(); ++j) {
    if (!unironed_[j]) {
      if (reaches(slopes_[j])) {
        return value_breakpoints_[j];
      }
      continue;
    }
    double lo = value_breakpoints_[j];
    double hi = value_breakpoints_[j + 1];
    if (reaches(level_in(j, lo))) {
      return lo;
    }
    if (std::isinf(hi) || !reaches(level_in(j, std::nextafter(hi, lo)))) {
      continue;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (reaches(level_in(j, mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  return kInfinity;
}

double IronedVirtualFunction::threshold_at_least(double level) const
{
  return first_value([level](double g) { return g >= level; });
}

double IronedVirtualFunction::threshold_above(double level) const
{
  return first_value([level](double g) { return g > level; });
}

double IronedVirtualFunction::hull_at(double q) const
{
  double g = 0.0;
  for (std::size_t j = 0; j < slopes_.size(); ++j) {
    const double lo = quantile_breakpoints_[j];
    const double hi = quantile_breakpoints_[j + 1];
    if (q <= hi) {
      const double x = std::max(q, lo);
      const double chord = slopes_[j] * (x - lo);
      if (unironed_[j] && x > lo && x < hi) {
        const double rise = cumulative_virtual_value(dist_, obj_, dist_.quantile(x)) -
                            cumulative_virtual_value(dist_, obj_, value_breakpoints_[j]);
        return g + std::min(chord, rise);
      }
      return g + chord;
    }
    g += slopes_[j] * (hi - lo);
  }
  return g;
}

double IronedVirtualFunction::integral() const { return hull_at(1.0); }

IronedVirtualFunction iron(const MixedDistribution &dist, const Objective &obj, IroningOptions options)
{
  obj.validate();
  if (dist.has_atoms()) {
    throw DomainError("ironing is undefined for distributions with atoms");
  }
  // Residual-surplus-type objectives make h piecewise constant on exponential
  // pieces, so H is linear between piece boundaries.
  const bool exact = (obj.alpha + obj.beta == 0.0) && dist.is_piecewise_exponential();

  std::vector<Node> nodes;
  auto add_value_node = [&](double v) {
    const double s = dist.survival(v);
    nodes.push_back(Node{std::isinf(v) ? 1.0 : 1.0 - s, v, cumulative_at(dist, obj, v, s)});
  };

  add_value_node(dist.support_min());
  for (double b : dist.interior_boundaries()) {
    add_value_node(b);
  }
  if (!exact) {
    const std::size_t cells = std::max<std::size_t>(options.grid_cells, 1);
    for (std::size_t i = 1; i < cells; ++i) {
      const double q = static_cast<double>(i) / static_cast<double>(cells);
      const double v = dist.quantile(q);
      nodes.push_back(Node{q, v, cumulative_at(dist, obj, v, 1.0 - q)});
    }
  }
  {
    const double top = dist.upper_support();
    nodes.push_back(Node{1.0, top, cumulative_at(dist, obj, top, 0.0)});
  }

  std::stable_sort(nodes.begin(), nodes.end(), [](const Node &a, const Node &b) { return a.q < b.q; });
  std::vector<Node> unique_nodes;
  for (const Node &n : nodes) {
    if (unique_nodes.empty() || n.q > unique_nodes.back().q + 1e-15) {
      unique_nodes.push_back(n);
    } else if (n.q == 1.0) {
      unique_nodes.back() = n;
    }
  }
  unique_nodes.front().q = 0.0;
  unique_nodes.back().q = 1.0;

  std::vector<Point2> pts;
  pts.reserve(unique_nodes.size());
  for (const Node &n : unique_nodes) {
    pts.push_back(Point2{n.q, n.h});
  }
  std::vector<std::size_t> hull = lower_hull_indices(pts);

  // Rounding in the cross products can leave a slope a few ulps below its
  // predecessor; merge such edges so g is monotone exactly.
  std::vector<std::size_t> clean;
  for (std::size_t idx : hull) {
    clean.push_back(idx);
    while (clean.size() >= 3) {
      const std::size_t a = clean[clean.size() - 3];
      const std::size_t b = clean[clean.size() - 2];
      const std::size_t c = clean.back();
      if (slope(pts[b], pts[c]) < slope(pts[a], pts[b])) {
        clean.erase(clean.end() - 2);
      } else {
        break;
      }
    }
  }

  std::vector<double> qs;
  std::vector<double> vs;
  std::vector<double> slopes;
  std::vector<bool> unironed;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    qs.push_back(unique_nodes[clean[i]].q);
    vs.push_back(unique_nodes[clean[i]].v);
    if (i > 0) {
      slopes.push_back(slope(pts[clean[i - 1]], pts[clean[i]]));
      unironed.push_back(!exact && clean[i] == clean[i - 1] + 1);
    }
  }
  return IronedVirtualFunction(dist, obj, std::move(qs), std::move(vs), std::move(slopes), exact,
                               std::move(unironed));
}

}  // namespace pfd
