#include "mds/hyperbolic.hpp"

#include "mds/causal.hpp"
#include "mds/detail/roots.hpp"
#include "mds/duality.hpp"
#include "mds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace mds {

namespace {

constexpr int kSphereProbes = 64;
/// Geometric probes towards the arc ends stop at len / 2^26, above the point tolerance.
constexpr int kEndProbes = 26;
constexpr double kArcRootWidth = 1e-15;

CirclePoint from_chart(double s) { return CirclePoint(2.0 * std::atan(s)); }

/// Fixed points of the linear-fractional map g on the circle (two for hyperbolic g).
std::array<CirclePoint, 2> fixed_points(const Eigen::Matrix2d& g) {
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  // c s^2 + (d - a) s - b = 0
  if (c == 0.0) {
    if (d == a) throw DomainError("fixed points: map is parabolic or the identity");
    return {from_chart(b / (d - a)), CirclePoint(kPi)};
  }
  const double disc = (d - a) * (d - a) + 4.0 * b * c;
  if (!(disc > 0.0)) throw DomainError("fixed points: map is not hyperbolic");
  const double r = std::sqrt(disc);
  // stable quadratic roots
  const double qv = -0.5 * ((d - a) + std::copysign(r, d - a));
  const double s1 = qv / c;
  const double s2 = qv != 0.0 ? -b / qv : -(d - a) / c - s1;
  return {from_chart(s1), from_chart(s2)};
}

/// A point y with (y, s(y)) harmonic to (x, x'), on the ccw arc from x to x'.
CirclePoint invariant_sphere_point(const MoebiusStructure& m0, const Eigen::Matrix2d& s, CirclePoint x,
                                   CirclePoint xp) {
  const Tolerances tol;
  const Arc arc(x, xp), other(xp, x);
  const Event e(x, xp);
  const double len = arc.length();
  const auto g = [&](double off) {
    const CirclePoint y = arc.at(off);
    return other.offset_of(apply_linear_fractional(s, y)) - other.offset_of(harmonic_conjugate(m0, e, y, tol));
  };
  // probe offsets: uniform in the middle, geometric towards both ends
  std::vector<double> offs;
  for (int k = kEndProbes; k >= 1; --k) offs.push_back(len * std::ldexp(1.0, -k));
  for (int k = 1; k < kSphereProbes; ++k) offs.push_back(len * k / kSphereProbes);
  for (int k = 1; k <= kEndProbes; ++k) offs.push_back(len * (1.0 - std::ldexp(1.0, -k)));
  double prev_off = offs.front(), prev = g(prev_off);
  for (std::size_t k = 1; k < offs.size(); ++k) {
    const double off = offs[k];
    if (!(off > prev_off)) continue;
    const double cur = g(off);
    if ((prev > 0.0) != (cur > 0.0) || cur == 0.0) {
      return arc.at(detail::bracketed_root(g, prev_off, off, prev, cur, kArcRootWidth, tol.max_iterations,
                                           "invariant sphere"));
    }
    prev_off = off;
    prev = cur;
  }
  throw ConvergenceError("invariant sphere: no sign change along the arc");
}

bool strictly_between(double v, double lo, double hi) { return std::min(lo, hi) < v && v < std::max(lo, hi); }

} // namespace

UhpPoint::UhpPoint(double re, double im) : re_(re), im_(im) {
  if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im)) {
    std::ostringstream os;
    os << "upper half-plane point needs im > 0, got (" << re << ", " << im << ")";
    throw DomainError(os.str());
  }
}

double chart_value(CirclePoint p) {
  if (std::abs(p.theta() - kPi) < 1e-15) throw ChartSingularity("chart value of the point at infinity");
  return std::tan(0.5 * p.theta());
}

BoundaryPoint boundary_point(CirclePoint p, double eps) {
  if (std::abs(p.theta() - kPi) <= eps) return BoundaryPoint::infinity();
  return BoundaryPoint::at(std::tan(0.5 * p.theta()));
}

UhpGeodesic::UhpGeodesic(BoundaryPoint p, BoundaryPoint q) : p_(p), q_(q) {
  if ((p.infinite && q.infinite) || (!p.infinite && !q.infinite && p.value == q.value)) {
    throw DegeneracyError("geodesic endpoints coincide");
  }
}

double uhp_distance(const UhpPoint& p, const UhpPoint& q) {
  // 2 asinh(...) equals arccosh(1 + |p - q|^2 / (2 im_p im_q)) without cancellation near 0
  const double dx = p.re() - q.re(), dy = p.im() - q.im();
  return 2.0 * std::asinh(std::sqrt((dx * dx + dy * dy) / (4.0 * p.im() * q.im())));
}

bool geodesics_cross(const UhpGeodesic& g, const UhpGeodesic& h) {
  const bool g_vertical = g.p().infinite || g.q().infinite;
  const bool h_vertical = h.p().infinite || h.q().infinite;
  if (g_vertical && h_vertical) return false;
  if (g_vertical || h_vertical) {
    const UhpGeodesic& v = g_vertical ? g : h;
    const UhpGeodesic& c = g_vertical ? h : g;
    const double foot = v.p().infinite ? v.q().value : v.p().value;
    return strictly_between(foot, c.p().value, c.q().value);
  }
  const bool p_in = strictly_between(h.p().value, g.p().value, g.q().value);
  const bool q_in = strictly_between(h.q().value, g.p().value, g.q().value);
  const bool touch = h.p().value == g.p().value || h.p().value == g.q().value || h.q().value == g.p().value ||
                     h.q().value == g.q().value;
  return !touch && p_in != q_in;
}

UhpPoint geodesic_intersection(const UhpGeodesic& g, const UhpGeodesic& h) {
  if (!geodesics_cross(g, h)) {
    throw DomainError("geodesics do not intersect");
  }
  const bool g_vertical = g.p().infinite || g.q().infinite;
  const bool h_vertical = h.p().infinite || h.q().infinite;
  if (g_vertical || h_vertical) {
    const UhpGeodesic& v = g_vertical ? g : h;
    const UhpGeodesic& c = g_vertical ? h : g;
    const double foot = v.p().infinite ? v.q().value : v.p().value;
    const double center = 0.5 * (c.p().value + c.q().value), radius = 0.5 * std::abs(c.q().value - c.p().value);
    const double dx = foot - center;
    return UhpPoint(foot, std::sqrt((radius - dx) * (radius + dx)));
  }
  const double c1 = 0.5 * (g.p().value + g.q().value), r1 = 0.5 * std::abs(g.q().value - g.p().value);
  const double c2 = 0.5 * (h.p().value + h.q().value), r2 = 0.5 * std::abs(h.q().value - h.p().value);
  const double x = 0.5 * (c1 + c2) + 0.5 * (r1 - r2) * (r1 + r2) / (c2 - c1);
  const double dx = x - c1;
  return UhpPoint(x, std::sqrt((r1 - dx) * (r1 + dx)));
}

double involution_distance(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2) {
  const Eigen::Matrix2d n1 = s1 / std::sqrt(std::abs(s1.determinant()));
  const Eigen::Matrix2d n2 = s2 / std::sqrt(std::abs(s2.determinant()));
  if ((n1 - n2).cwiseAbs().maxCoeff() < 1e-14 || (n1 + n2).cwiseAbs().maxCoeff() < 1e-14) {
    return 0.0;
  }
  const auto fp = fixed_points(s1 * s2);
  const MoebiusStructure m0 = MoebiusStructure::canonical();
  const CirclePoint y = invariant_sphere_point(m0, s1, fp[0], fp[1]);
  const CirclePoint yp = invariant_sphere_point(m0, s2, fp[0], fp[1]);
  const CirclePoint x = fp[0], xp = fp[1];
  // <x, y, y', x'> = |xy'| |yx'| / (|xy| |y'x'|)
  return std::abs(m0.log_pair_product(x, yp, y, xp) - m0.log_pair_product(x, y, yp, xp));
}

double involution_distance(double t) {
  if (t < 0.0) throw DomainError("involution distance needs t >= 0");
  Eigen::Matrix2d s, sp;
  s << 0.0, 1.0, -1.0, 0.0;
  sp << 0.0, std::exp(2.0 * t), -std::exp(-2.0 * t), 0.0;
  return involution_distance(s, sp);
}

H2Check functional_equals_h2_check(const StrongPair& p, const DabPoint& d) {
  const MoebiusStructure m0 = MoebiusStructure::canonical();
  H2Check out;
  out.f = f_ab(m0, p, d).f;

  // rotate the middle of the widest gap to pi so that every chart value is moderate
  std::array<double, 6> th{p.o().theta(), p.o_prime().theta(), p.omega().theta(), p.omega_prime().theta(),
                           d.x.theta(), d.x_prime.theta()};
  std::array<double, 6> sorted = th;
  std::sort(sorted.begin(), sorted.end());
  double widest = kTwoPi - sorted.back() + sorted.front(), mid = sorted.back() + 0.5 * widest;
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    if (sorted[k + 1] - sorted[k] > widest) {
      widest = sorted[k + 1] - sorted[k];
      mid = sorted[k] + 0.5 * widest;
    }
  }
  const auto chart = [&](double theta) { return BoundaryPoint::at(chart_value(CirclePoint(theta + kPi - mid))); };
  const UhpGeodesic a(chart(th[0]), chart(th[1])), b(chart(th[2]), chart(th[3])), line(chart(th[4]), chart(th[5]));
  out.h2 = uhp_distance(geodesic_intersection(line, a), geodesic_intersection(line, b));
  out.residual = std::abs(out.f - out.h2);
  return out;
}

SampleOutcome h2_trial(std::uint64_t seed, std::uint64_t index, double threshold, const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto p = draw_strong_pair(rng, tol.min_gap, out.rejected);
  if (!p) return out;
  const CirclePoint x = rng.point_in(p->arc_a(), tol.min_gap), xp = rng.point_in(p->arc_b(), tol.min_gap);
  const MoebiusStructure m0 = MoebiusStructure::canonical();
  const H2Check c = functional_equals_h2_check(*p, dab_point(m0, *p, x, xp, tol));
  out.tested = true;
  out.value = c.residual;
  out.violation = !(c.residual < threshold);
  out.witness = {p->o().theta(), p->o_prime().theta(), p->omega().theta(), p->omega_prime().theta(), x.theta(),
                 xp.theta()};
  out.metrics = {c.f, c.h2};
  return out;
}

} // namespace mds
