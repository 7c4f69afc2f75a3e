#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pfd/distributions.hpp"

namespace pfd {

/// Linear objective sum_i alpha v_i x_i + beta p_i.
struct Objective
{
  double alpha = 1.0;  // valuation coefficient
  double beta = -1.0;  // payment coefficient

  static constexpr Objective residual_surplus() { return {1.0, -1.0}; }
  static constexpr Objective profit() { return {0.0, 1.0}; }
  static constexpr Objective surplus() { return {1.0, 0.0}; }

  void validate() const;
  std::string name() const;
  bool operator==(const Objective &) const = default;
};

/// Parses "residual", "profit", "surplus" or an explicit "alpha,beta" pair.
Objective parse_objective(const std::string &text);

/// General virtual value (alpha + beta) v - beta (1 - F(v)) / f(v).
double virtual_value(const MixedDistribution &dist, const Objective &obj, double v);

struct Point2
{
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2 &) const = default;
};

/// Lower convex hull of points with strictly increasing x (monotone chain).
/// Interior collinear points are dropped; both endpoints are always kept.
std::vector<Point2> lower_convex_hull(std::span<const Point2> points);

struct IroningOptions
{
  std::size_t grid_cells = std::size_t{1} << 14;
};

/// Monotone function g on quantile space, the derivative of the convex hull G
/// of H(q) = integral of the virtual value over [0, q]. Interval j is
/// [q_j, q_{j+1}) (right-continuous), the last one closed at 1. Ironed
/// intervals carry the chord slope; intervals where the hull follows H between
/// adjacent grid nodes evaluate the virtual value itself, clamped between the
/// neighbouring slopes.
class IronedVirtualFunction
{
public:
  IronedVirtualFunction(MixedDistribution dist, Objective obj, std::vector<double> quantile_breakpoints,
                        std::vector<double> value_breakpoints, std::vector<double> slopes, bool exact,
                        std::vector<bool> unironed = {});

  /// g(q)
  double at_quantile(double q) const;
  /// g(F(v))
  double operator()(double v) const;

  /// inf { v : g(F(v)) >= level }, +inf when no interval reaches the level.
  double threshold_at_least(double level) const;
  /// inf { v : g(F(v)) > level }, +inf when no interval exceeds the level.
  double threshold_above(double level) const;

  /// G(1) = integral of g over [0, 1].
  double integral() const;
  /// G at the given quantile.
  double hull_at(double q) const;

  const std::vector<double> &quantile_breakpoints() const { return quantile_breakpoints_; }
  const std::vector<double> &value_breakpoints() const { return value_breakpoints_; }
  /// Chord slope of each interval.
  const std::vector<double> &slopes() const { return slopes_; }
  const std::vector<bool> &unironed() const { return unironed_; }
  const MixedDistribution &distribution() const { return dist_; }
  const Objective &objective() const { return obj_; }
  /// True when the hull was taken over the exact breakpoints of H.
  bool exact() const { return exact_; }

private:
  MixedDistribution dist_;
  Objective obj_;
  std::vector<double> quantile_breakpoints_;
  std::vector<double> value_breakpoints_;
  std::vector<double> slopes_;
  bool exact_ = false;
  std::vector<bool> unironed_;

  std::size_t interval_at(double q) const;
  double clamp_level(std::size_t j, double level) const;
  double level_in(std::size_t j, double v) const;
  template <class Pred>
  double first_value(Pred reaches) const;
};

/// H(F(v)) evaluated in closed form: the integral of the virtual value over
/// quantiles [0, F(v)]. v may be +inf.
double cumulative_virtual_value(const MixedDistribution &dist, const Objective &obj, double v);

IronedVirtualFunction iron(const MixedDistribution &dist, const Objective &obj, IroningOptions options = {});

inline double ironed_value(const IronedVirtualFunction &fn, double v) { return fn(v); }

}  // namespace pfd
