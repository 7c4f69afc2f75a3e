#include "pfd/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfd/errors.hpp"

namespace pfd {

namespace {

constexpr double kMassSlack = 1e-9;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

MixedDistribution::MixedDistribution(std::vector<Piece> pieces, std::vector<Atom> atoms,
                                     double upper_support)
  : pieces_(std::move(pieces)), atoms_(std::move(atoms)), upper_support_(upper_support)
{
  build_segments();
}

void MixedDistribution::build_segments()
{
  if (pieces_.empty() && atoms_.empty()) {
    throw ConstructionError("distribution needs at least one piece or atom");
  }
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const Piece &p = pieces_[j];
    if (!finite_nonneg(p.start)) {
      throw ConstructionError("piece start must be finite and non-negative");
    }
    if (!(std::isfinite(p.rate) && p.rate > 0.0)) {
      throw ConstructionError("piece rate must be finite and positive");
    }
    if (p.shape == PieceShape::pareto && !(p.start > 0.0)) {
      throw ConstructionError("pareto piece must start at a positive value");
    }
    if (j > 0 && !(p.start > pieces_[j - 1].start)) {
      throw ConstructionError("piece starts must be strictly increasing");
    }
  }

  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom &a, const Atom &b) { return a.value < b.value; });
  double atom_total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom &a = atoms_[i];
    if (!finite_nonneg(a.value)) {
      throw ConstructionError("atom value must be finite and non-negative");
    }
    if (!(a.mass > 0.0 && a.mass <= 1.0)) {
      throw ConstructionError("atom mass must lie in (0, 1]");
    }
    if (i > 0 && a.value == atoms_[i - 1].value) {
      throw ConstructionError("duplicate atom value");
    }
    atom_total += a.mass;
  }
  if (atom_total > 1.0 + kMassSlack) {
    throw ConstructionError("total atom mass exceeds 1");
  }

  if (pieces_.empty()) {
    support_min_ = atoms_.front().value;
    if (std::isinf(upper_support_)) {
      upper_support_ = atoms_.back().value;
    }
  } else {
    support_min_ = pieces_.front().start;
    if (!atoms_.empty() && atoms_.front().value < support_min_) {
      throw ConstructionError("atom below the first piece start");
    }
  }
  if (!(upper_support_ >= support_min_) || std::isnan(upper_support_)) {
    throw ConstructionError("upper support below the support minimum");
  }
  if (!atoms_.empty() && atoms_.back().value > upper_support_) {
    throw ConstructionError("atom above the upper support");
  }
  if (!pieces_.empty() && !(pieces_.back().start < upper_support_)) {
    throw ConstructionError("piece starts at or above the upper support");
  }

  std::vector<double> cuts;
  for (const Piece &p : pieces_) {
    cuts.push_back(p.start);
  }
  for (const Atom &a : atoms_) {
    if (a.value < upper_support_) {
      cuts.push_back(a.value);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  segments_.clear();
  double s = 1.0;
  std::size_t atom_pos = 0;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    Segment seg;
    seg.lo = cuts[i];
    seg.hi = (i + 1 < cuts.size()) ? cuts[i + 1] : upper_support_;
    const auto piece = std::find_if(pieces_.rbegin(), pieces_.rend(),
                                    [&](const Piece &p) { return p.start <= seg.lo; });
    if (piece == pieces_.rend()) {
      seg.shape = SegmentShape::flat;
    } else {
      switch (piece->shape) {
      case PieceShape::exponential: seg.shape = SegmentShape::exponential; break;
      case PieceShape::pareto: seg.shape = SegmentShape::pareto; break;
      case PieceShape::linear: seg.shape = SegmentShape::linear; break;
      }
      seg.rate = piece->rate;
    }
    seg.s_before = s;
    if (atom_pos < atoms_.size() && atoms_[atom_pos].value == seg.lo) {
      s -= atoms_[atom_pos].mass;
      ++atom_pos;
    }
    if (s < -kMassSlack) {
      throw ConstructionError("survival function becomes negative");
    }
    s = std::max(s, 0.0);
    seg.s_lo = s;
    seg.s_hi = segment_survival(seg, seg.hi);
    if (seg.shape == SegmentShape::linear && s - seg.rate * (seg.hi - seg.lo) < -kMassSlack) {
      throw ConstructionError("linear piece density exceeds the remaining mass");
    }
    seg.integral[0] = segment_integral(seg, seg.hi, 1);
    seg.integral[1] = segment_integral(seg, seg.hi, 2);
    s = seg.s_hi;
    segments_.push_back(seg);
  }

  if (std::isfinite(upper_support_)) {
    if (atom_pos < atoms_.size() && atoms_[atom_pos].value == upper_support_) {
      s -= atoms_[atom_pos].mass;
    }
    if (std::abs(s) > kMassSlack) {
      throw ConstructionError("mass below the upper support does not match the atom there (residual " +
                              std::to_string(s) + ")");
    }
  } else {
    const Segment &last = segments_.back();
    const bool decays = last.shape == SegmentShape::exponential || last.shape == SegmentShape::pareto ||
                        (last.shape == SegmentShape::flat && last.s_lo == 0.0);
    if (!decays) {
      throw ConstructionError("unbounded support needs an exponential or pareto tail");
    }
  }
}

MixedDistribution MixedDistribution::exponential(double mean)
{
  if (!(std::isfinite(mean) && mean > 0.0)) {
    throw ConstructionError("exponential mean must be positive");
  }
  return MixedDistribution({Piece{0.0, 1.0 / mean, PieceShape::exponential}}, {});
}

MixedDistribution MixedDistribution::uniform(double lo, double hi)
{
  if (!(finite_nonneg(lo) && std::isfinite(hi) && lo < hi)) {
    throw ConstructionError("uniform needs 0 <= lo < hi");
  }
  return MixedDistribution({Piece{lo, 1.0 / (hi - lo), PieceShape::linear}}, {}, hi);
}

MixedDistribution MixedDistribution::power_law(double c, double lo)
{
  if (!(std::isfinite(c) && c > 0.0 && std::isfinite(lo) && lo > 0.0)) {
    throw ConstructionError("power law needs c > 0 and lo > 0");
  }
  return MixedDistribution({Piece{lo, c, PieceShape::pareto}}, {});
}

MixedDistribution MixedDistribution::equal_revenue(double h)
{
  if (!(std::isfinite(h) && h > 1.0)) {
    throw ConstructionError("equal revenue needs h > 1");
  }
  return MixedDistribution({Piece{1.0, 1.0, PieceShape::pareto}}, {Atom{h, 1.0 / h}}, h);
}

MixedDistribution MixedDistribution::point_mass(double value)
{
  return MixedDistribution({}, {Atom{value, 1.0}});
}

double MixedDistribution::segment_survival(const Segment &seg, double v)
{
  const double dz = v - seg.lo;
  switch (seg.shape) {
  case SegmentShape::flat: return seg.s_lo;
  case SegmentShape::exponential: return std::isinf(v) ? 0.0 : seg.s_lo * std::exp(-seg.rate * dz);
  case SegmentShape::pareto: return std::isinf(v) ? 0.0 : seg.s_lo * std::pow(seg.lo / v, seg.rate);
  case SegmentShape::linear: return std::max(0.0, seg.s_lo - seg.rate * dz);
  }
  return 0.0;
}

double MixedDistribution::segment_integral(const Segment &seg, double x, int power)
{
  const double m = power;
  const double base = std::pow(seg.s_lo, m);
  switch (seg.shape) {
  case SegmentShape::flat:
    if (base == 0.0) {
      return 0.0;
    }
    return base * (x - seg.lo);
  case SegmentShape::exponential: {
    const double k = m * seg.rate;
    if (std::isinf(x)) {
      return base / k;
    }
    return base * -std::expm1(-k * (x - seg.lo)) / k;
  }
  case SegmentShape::pareto: {
    const double e = m * seg.rate - 1.0;
    if (std::abs(e) < 1e-12) {
      return std::isinf(x) ? kInfinity : base * seg.lo * std::log(x / seg.lo);
    }
    if (std::isinf(x)) {
      return e > 0.0 ? base * seg.lo / e : kInfinity;
    }
    return base * seg.lo * -std::expm1(e * std::log(seg.lo / x)) / e;
  }
  case SegmentShape::linear: {
    const double a = seg.s_lo;
    const double b = std::max(0.0, seg.s_lo - seg.rate * (x - seg.lo));
    return (std::pow(a, m + 1.0) - std::pow(b, m + 1.0)) / (seg.rate * (m + 1.0));
  }
  }
  return 0.0;
}

double MixedDistribution::segment_inverse(const Segment &seg, double s)
{
  double v = seg.lo;
  switch (seg.shape) {
  case SegmentShape::flat: v = seg.lo; break;
  case SegmentShape::exponential: v = seg.lo + std::log(seg.s_lo / s) / seg.rate; break;
  case SegmentShape::pareto: v = seg.lo * std::pow(seg.s_lo / s, 1.0 / seg.rate); break;
  case SegmentShape::linear: v = seg.lo + (seg.s_lo - s) / seg.rate; break;
  }
  return std::clamp(v, seg.lo, seg.hi);
}

std::size_t MixedDistribution::segment_index(double v) const
{
  const auto it = std::upper_bound(segments_.begin(), segments_.end(), v,
                                   [](double x, const Segment &seg) { return x < seg.lo; });
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - segments_.begin()) - 1));
}

double MixedDistribution::survival(double v) const
{
  if (v < support_min_) {
    return 1.0;
  }
  if (v >= upper_support_ || segments_.empty()) {
    return 0.0;
  }
  return segment_survival(segments_[segment_index(v)], v);
}

double MixedDistribution::cdf(double v) const { return 1.0 - survival(v); }

double MixedDistribution::cdf_left(double v) const
{
  if (v <= support_min_) {
    return 0.0;
  }
  if (v > upper_support_) {
    return 1.0;
  }
  if (segments_.empty()) {
    return 0.0;
  }
  // segment with lo < v <= hi
  const auto it = std::lower_bound(segments_.begin(), segments_.end(), v,
                                   [](const Segment &seg, double x) { return seg.lo < x; });
  const Segment &seg = *(it - 1);
  return 1.0 - segment_survival(seg, v);
}

double MixedDistribution::pdf(double v) const
{
  if (v < support_min_ || v > upper_support_ || segments_.empty()) {
    return 0.0;
  }
  const Segment &seg = (v == upper_support_) ? segments_.back() : segments_[segment_index(v)];
  const double s = segment_survival(seg, v);
  switch (seg.shape) {
  case SegmentShape::flat: return 0.0;
  case SegmentShape::exponential: return seg.rate * s;
  case SegmentShape::pareto: return seg.rate * s / v;
  case SegmentShape::linear: return seg.rate;
  }
  return 0.0;
}

bool MixedDistribution::in_continuous_support(double v) const
{
  if (!(v >= support_min_ && v <= upper_support_) || segments_.empty()) {
    return false;
  }
  for (const Atom &a : atoms_) {
    if (a.value == v) {
      return false;
    }
  }
  const Segment &seg = (v == upper_support_) ? segments_.back() : segments_[segment_index(v)];
  return seg.shape != SegmentShape::flat;
}

double MixedDistribution::inverse_hazard(double v) const
{
  if (!in_continuous_support(v)) {
    throw DomainError("value " + std::to_string(v) + " is not in the continuous support");
  }
  const Segment &seg = (v == upper_support_) ? segments_.back() : segments_[segment_index(v)];
  switch (seg.shape) {
  case SegmentShape::exponential: return 1.0 / seg.rate;
  case SegmentShape::pareto: return v / seg.rate;
  case SegmentShape::linear: return segment_survival(seg, v) / seg.rate;
  case SegmentShape::flat: break;
  }
  throw DomainError("density vanishes at " + std::to_string(v));
}

double MixedDistribution::quantile(double q) const
{
  if (!(q > 0.0)) {
    return support_min_;
  }
  if (q >= 1.0) {
    return upper_support_;
  }
  const double s = 1.0 - q;
  for (const Segment &seg : segments_) {
    if (s >= seg.s_lo) {
      return seg.lo;
    }
    if (s >= seg.s_hi) {
      return segment_inverse(seg, s);
    }
  }
  return upper_support_;
}

double MixedDistribution::sample(RngStream &rng) const { return quantile(rng.uniform()); }

double MixedDistribution::survival_integral(double v, int power) const
{
  if (power != 1 && power != 2) {
    throw DomainError("survival_integral supports powers 1 and 2");
  }
  double total = 0.0;
  for (const Segment &seg : segments_) {
    if (v <= seg.lo) {
      break;
    }
    if (v >= seg.hi) {
      total += seg.integral[power - 1];
    } else {
      total += segment_integral(seg, v, power);
      break;
    }
  }
  return total;
}

double MixedDistribution::mean() const { return support_min_ + survival_integral(kInfinity, 1); }

double MixedDistribution::expected_min_of_two() const
{
  return support_min_ + survival_integral(kInfinity, 2);
}

bool MixedDistribution::is_piecewise_exponential() const
{
  return atoms_.empty() && std::all_of(pieces_.begin(), pieces_.end(), [](const Piece &p) {
           return p.shape == PieceShape::exponential;
         });
}

std::vector<double> MixedDistribution::interior_boundaries() const
{
  std::vector<double> out;
  for (std::size_t j = 1; j < pieces_.size(); ++j) {
    out.push_back(pieces_[j].start);
  }
  return out;
}

void PiecewiseConstantFn::validate() const
{
  if (breakpoints.empty() || breakpoints.size() != levels.size()) {
    throw ConstructionError("piecewise constant function needs one level per breakpoint");
  }
  if (breakpoints.front() != 0.0) {
    throw ConstructionError("first breakpoint must be 0");
  }
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (!finite_nonneg(levels[j])) {
      throw ConstructionError("levels must be finite and non-negative");
    }
    if (!std::isfinite(breakpoints[j]) || (j > 0 && !(breakpoints[j] > breakpoints[j - 1]))) {
      throw ConstructionError("breakpoints must be finite and strictly increasing");
    }
  }
}

double PiecewiseConstantFn::operator()(double z) const
{
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), z);
  const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - breakpoints.begin()) - 1));
  return levels[j];
}

MixedDistribution build_from_virtual_values(const PiecewiseConstantFn &levels)
{
  levels.validate();
  std::vector<Piece> pieces;
  pieces.reserve(levels.levels.size());
  for (std::size_t j = 0; j < levels.levels.size(); ++j) {
    if (!(levels.levels[j] > 0.0)) {
      throw ConstructionError("virtual value levels must be strictly positive");
    }
    // S(t_j + z) = S(t_j) exp(-z / c_j)
    pieces.push_back(Piece{levels.breakpoints[j], 1.0 / levels.levels[j], PieceShape::exponential});
  }
  return MixedDistribution(std::move(pieces), {});
}

PiecewiseConstantFn lb_family_levels(int beta, int j)
{
  if (beta < 2) {
    throw DomainError("lower-bound family needs beta >= 2");
  }
  if (j < 0 || j >= beta) {
    throw DomainError("family index out of range");
  }
  const double b = beta;
  if (j == 0) {
    return PiecewiseConstantFn{{0.0, b}, {b, 1.0}};
  }
  return PiecewiseConstantFn{{0.0, j * b, j * b + b}, {1.0, b, 1.0}};
}

std::vector<MixedDistribution> lb_family(int beta)
{
  if (beta < 2) {
    throw DomainError("lower-bound family needs beta >= 2");
  }
  std::vector<MixedDistribution> family;
  family.reserve(static_cast<std::size_t>(beta));
  for (int j = 0; j < beta; ++j) {
    family.push_back(build_from_virtual_values(lb_family_levels(beta, j)));
  }
  return family;
}

}  // namespace pfd
