#pragma once

#include <limits>
#include <vector>

#include "pfd/rng.hpp"

namespace pfd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// How the survival function evolves across one continuous piece.
enum class PieceShape
{
  exponential,  // constant hazard rate: S(v) = S(t) exp(-rate (v - t))
  pareto,       // hazard rate/v:        S(v) = S(t) (t / v)^rate, t > 0
  linear,       // constant density:     S(v) = S(t) - rate (v - t)
};

struct Piece
{
  double start = 0.0;
  double rate = 1.0;
  PieceShape shape = PieceShape::exponential;
};

struct Atom
{
  double value = 0.0;
  double mass = 0.0;
};

/// One-dimensional value distribution on [0, inf): a continuous part made of
/// pieces with closed-form survival functions, plus optional point masses.
///
/// The survival function S(v) = P(V > v) starts at 1 at the support minimum,
/// is multiplied through each piece and drops by the atom mass at each atom.
/// With a finite upper support the mass remaining just below it must equal the
/// atom placed there (or be zero).
///
/// Instances are immutable once built and safe to share between threads.
class MixedDistribution
{
public:
  MixedDistribution(std::vector<Piece> pieces, std::vector<Atom> atoms,
                    double upper_support = kInfinity);

  static MixedDistribution exponential(double mean);
  static MixedDistribution uniform(double lo, double hi);
  /// F(z) = 1 - (lo / z)^c on [lo, inf).
  static MixedDistribution power_law(double c, double lo);
  /// F(z) = 1 - 1/z on [1, h) with a point mass of 1/h at h.
  static MixedDistribution equal_revenue(double h);
  static MixedDistribution point_mass(double value);

  double cdf(double v) const;
  /// P(V < v); differs from cdf only at atoms.
  double cdf_left(double v) const;
  double survival(double v) const;
  /// Density of the continuous part, right-continuous; at the upper support
  /// the left limit is returned. Zero off the support.
  double pdf(double v) const;
  /// (1 - F(v)) / f(v) evaluated in closed form on the piece containing v.
  /// Throws DomainError at atoms, off the support or where f vanishes.
  double inverse_hazard(double v) const;
  /// inf { v : F(v) >= q }.
  double quantile(double q) const;
  double sample(RngStream &rng) const;

  double mean() const;
  /// E[min(V1, V2)] for two independent draws.
  double expected_min_of_two() const;
  /// Integral of S(u)^power over [support_min, v], power in {1, 2}.
  double survival_integral(double v, int power = 1) const;

  double support_min() const { return support_min_; }
  double upper_support() const { return upper_support_; }
  bool has_atoms() const { return !atoms_.empty(); }
  /// True when every piece is exponential and there are no atoms.
  bool is_piecewise_exponential() const;
  /// Starts of the pieces after the first one.
  std::vector<double> interior_boundaries() const;
  /// True when v lies in [support_min, upper_support] and is not an atom.
  bool in_continuous_support(double v) const;

  const std::vector<Piece> &pieces() const { return pieces_; }
  const std::vector<Atom> &atoms() const { return atoms_; }

private:
  enum class SegmentShape
  {
    flat,
    exponential,
    pareto,
    linear
  };

  struct Segment
  {
    double lo = 0.0;
    double hi = kInfinity;
    SegmentShape shape = SegmentShape::flat;
    double rate = 0.0;
    double s_before = 1.0;  // S(lo-), before the atom at lo
    double s_lo = 1.0;      // S(lo), after the atom at lo
    double s_hi = 1.0;      // S(hi-)
    double integral[2] = {0.0, 0.0};  // integral of S and S^2 over the segment
  };

  void build_segments();
  std::size_t segment_index(double v) const;
  static double segment_survival(const Segment &seg, double v);
  static double segment_integral(const Segment &seg, double x, int power);
  static double segment_inverse(const Segment &seg, double s);

  std::vector<Piece> pieces_;
  std::vector<Atom> atoms_;
  double upper_support_ = kInfinity;
  double support_min_ = 0.0;
  std::vector<Segment> segments_;
};

/// Non-negative step function on [0, inf): levels[j] on
/// [breakpoints[j], breakpoints[j + 1]), the last interval unbounded.
struct PiecewiseConstantFn
{
  std::vector<double> breakpoints;  // breakpoints[0] == 0, strictly increasing
  std::vector<double> levels;

  void validate() const;
  double operator()(double z) const;
};

/// Distribution whose residual-surplus virtual value (1 - F) / f equals the
/// given step function: on [t_j, t_{j+1}) the survival decays exponentially
/// with mean levels[j].
MixedDistribution build_from_virtual_values(const PiecewiseConstantFn &levels);

/// The step functions behind lb_family: level beta on [j beta, j beta + beta),
/// level 1 elsewhere.
PiecewiseConstantFn lb_family_levels(int beta, int j);

/// The beta distributions F_{j,beta}, j = 0 .. beta - 1.
std::vector<MixedDistribution> lb_family(int beta);

}  // namespace pfd
