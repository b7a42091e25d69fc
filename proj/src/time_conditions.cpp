#include "mds/time_conditions.hpp"

#include "mds/detail/roots.hpp"
#include "mds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mds {

namespace {

constexpr int kGridSize = 64;
constexpr int kMaxSweeps = 200;
constexpr double kSweepTolerance = 1e-8;
constexpr double kLineTolerance = 1e-9;
constexpr double kArcRootWidth = 1e-15;
/// Offsets closer than this to an arc end are not resolvable in double precision.
constexpr double kMinOffset = 1e-14;
/// Harmonicity residual above which a triple is clearly not on one timelike line.
constexpr double kCollinearResidual = 1e-3;

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

Arc arc_between(CirclePoint p, CirclePoint q, CirclePoint avoid, double eps) {
  const Arc arc(p, q);
  return arc.contains_open(avoid, eps) ? arc.complement() : arc;
}

/// ln(|px| / |qx|).
double log_ratio(const MoebiusStructure& m, CirclePoint p, CirclePoint q, CirclePoint x) {
  return std::log(m.distance(p, x)) - std::log(m.distance(q, x));
}

/// The point x of `arc` with ln(|px| / |qx|) = s, where p and q are the ends of the arc.
CirclePoint solve_log_ratio_on_arc(const MoebiusStructure& m, const Arc& arc, CirclePoint p, CirclePoint q,
                                   double s, const Tolerances& tol) {
  const double len = arc.length();
  // orient so that g increases with the offset: -inf at p, +inf at q
  const double dir = same_point(arc.start(), p, tol.point) ? 1.0 : -1.0;
  const auto g = [&](double off) { return dir * (log_ratio(m, p, q, arc.at(off)) - s); };
  double lo = 0.5 * len, hi = 0.5 * len;
  double flo = g(lo), fhi = flo;
  if (flo > 0.0) {
    while (flo > 0.0) {
      hi = lo;
      fhi = flo;
      lo *= 0.5;
      if (lo < kMinOffset) throw DomainError("coordinate out of reach on the arc");
      flo = g(lo);
    }
  } else {
    double gap = 0.5 * len;
    while (fhi < 0.0) {
      lo = hi;
      flo = fhi;
      gap *= 0.5;
      if (gap < kMinOffset) throw DomainError("coordinate out of reach on the arc");
      hi = len - gap;
      fhi = g(hi);
    }
  }
  return arc.at(detail::bracketed_root(g, lo, hi, flo, fhi, kArcRootWidth, tol.max_iterations, "coordinate"));
}

CirclePoint x_from_s(const MoebiusStructure& m, const StrongPair& p, double s, const Tolerances& tol) {
  return solve_log_ratio_on_arc(m, p.arc_a(), p.o(), p.o_prime(), s, tol);
}

CirclePoint x_prime_from_s(const MoebiusStructure& m, const StrongPair& p, double s, const Tolerances& tol) {
  return solve_log_ratio_on_arc(m, p.arc_b(), p.omega_prime(), p.omega(), -s, tol);
}

/// Golden-section minimum of phi on [lo, hi].
template <class Phi> double golden_section(Phi&& phi, double lo, double hi, double width) {
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = phi(c), fd = phi(d);
  while (hi - lo > width) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = phi(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = phi(d);
    }
  }
  return fc < fd ? c : d;
}

/// Line minimization around `center`; the bracket grows while the minimum sits at its edge.
template <class Phi> double line_minimum(Phi&& phi, double center, double half_width) {
  double w = half_width;
  for (int k = 0; k < 60; ++k) {
    const double v = golden_section(phi, center - w, center + w, kLineTolerance);
    if (std::abs(v - center) < 0.95 * w) return v;
    center = v;
    w *= 4.0;
  }
  throw ConvergenceError("line minimization: minimum not bracketed");
}

Tuple4 pick(const Tuple7& q, std::array<int, 4> idx) {
  return {q[static_cast<std::size_t>(idx[0])], q[static_cast<std::size_t>(idx[1])],
          q[static_cast<std::size_t>(idx[2])], q[static_cast<std::size_t>(idx[3])]};
}

} // namespace

StrongPair::StrongPair(CirclePoint o, CirclePoint o_prime, CirclePoint omega, CirclePoint omega_prime, double eps)
    : o_(o), o_prime_(o_prime), omega_(omega), omega_prime_(omega_prime),
      arc_a_(arc_between(o, o_prime, omega, eps)), arc_b_(arc_between(omega_prime, omega, o, eps)) {
  const std::array<CirclePoint, 4> pts{o, o_prime, omega, omega_prime};
  require_nondegenerate(pts, eps);
  if (causal_class(a(), b(), eps) != CausalClass::StrongCausal || !separates(o, omega_prime, o_prime, omega, eps)) {
    throw DomainError("strong pair needs (o, omega') separating (o', omega) with a, b strong causal");
  }
}

DabPoint dab_point(const MoebiusStructure& m, const StrongPair& p, CirclePoint x, CirclePoint x_prime,
                   const Tolerances& tol) {
  if (!p.arc_a().contains_open(x, tol.point) || !p.arc_b().contains_open(x_prime, tol.point)) {
    std::ostringstream os;
    os << "event (" << x.theta() << ", " << x_prime.theta() << ") is not strictly between e and e'";
    throw DomainError(os.str());
  }
  return DabPoint{x, x_prime, log_ratio(m, p.o(), p.o_prime(), x), log_ratio(m, p.omega(), p.omega_prime(), x_prime)};
}

DabPoint dab_from_coordinates(const MoebiusStructure& m, const StrongPair& p, double s, double s_prime,
                              const Tolerances& tol) {
  return DabPoint{x_from_s(m, p, s, tol), x_prime_from_s(m, p, s_prime, tol), s, s_prime};
}

FValue f_ab(const MoebiusStructure& m, const StrongPair& p, const DabPoint& d) {
  const Tolerances tol;
  if (!p.arc_a().contains_open(d.x, tol.point) || !p.arc_b().contains_open(d.x_prime, tol.point)) {
    throw DomainError("f_ab: d is not in D_ab");
  }
  const Event line = d.event();
  FValue v;
  v.t_plus = time_along(m, line, p.o(), p.omega());
  v.t_minus = time_along(m, line, p.o_prime(), p.omega_prime());
  v.f = 0.5 * (v.t_plus + v.t_minus);
  return v;
}

VpResult minimize_f_ab(const MoebiusStructure& m, const StrongPair& p, const Tolerances& tol) {
  const double len_a = p.arc_a().length(), len_b = p.arc_b().length();
  std::array<CirclePoint, kGridSize> xs, ys;
  std::array<double, kGridSize> ss, sps;
  for (int i = 0; i < kGridSize; ++i) {
    const double frac = (i + 0.5) / kGridSize;
    const auto k = static_cast<std::size_t>(i);
    xs[k] = p.arc_a().at(frac * len_a);
    ys[k] = p.arc_b().at(frac * len_b);
    ss[k] = log_ratio(m, p.o(), p.o_prime(), xs[k]);
    sps[k] = log_ratio(m, p.omega(), p.omega_prime(), ys[k]);
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double f = f_ab(m, p, DabPoint{xs[i], ys[j], ss[i], sps[j]}).f;
      if (f < best) {
        best = f;
        bi = i;
        bj = j;
      }
    }
  }
  const auto spacing = [](const std::array<double, kGridSize>& v, std::size_t i) {
    const double left = i > 0 ? std::abs(v[i] - v[i - 1]) : 0.0;
    const double right = i + 1 < v.size() ? std::abs(v[i + 1] - v[i]) : 0.0;
    return std::max(left, right);
  };

  CirclePoint x = xs[bi], xp = ys[bj];
  double s = ss[bi], sp = sps[bj];
  double ws = spacing(ss, bi), wsp = spacing(sps, bj);
  const auto value = [&](CirclePoint a, CirclePoint b) {
    return 0.5 * (time_along(m, Event(a, b), p.o(), p.omega()) + time_along(m, Event(a, b), p.o_prime(), p.omega_prime()));
  };
  const auto along_s = [&](double v) {
    try {
      return value(x_from_s(m, p, v, tol), xp);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const auto along_sp = [&](double v) {
    try {
      return value(x, x_prime_from_s(m, p, v, tol));
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  VpResult out;
  double f_prev = value(x, xp);
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double s_new = line_minimum(along_s, s, ws);
    x = x_from_s(m, p, s_new, tol);
    const double sp_new = line_minimum(along_sp, sp, wsp);
    xp = x_prime_from_s(m, p, sp_new, tol);
    const double move = std::hypot(s_new - s, sp_new - sp);
    ws = std::max(4.0 * std::abs(s_new - s), 1e-6);
    wsp = std::max(4.0 * std::abs(sp_new - sp), 1e-6);
    s = s_new;
    sp = sp_new;
    // near the minimum F is flat to rounding; stop once a sweep no longer lowers it
    const double f_new = value(x, xp);
    const bool stalled = f_prev - f_new <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, f_new);
    f_prev = f_new;
    if (move < kSweepTolerance || stalled) break;
  }
  if (sweep == kMaxSweeps) {
    std::ostringstream os;
    os << "minimize_f_ab: no convergence after " << kMaxSweeps << " sweeps at (s, s') = (" << s << ", " << sp << ")";
    throw ConvergenceError(os.str());
  }
  out.sweeps = sweep + 1;
  out.argmin = DabPoint{x, xp, s, sp};
  out.f_min = f_ab(m, p, out.argmin).f;

  const Event perp = common_perpendicular(m, p.a(), p.b(), tol);
  const bool first_on_a = p.arc_a().contains_open(perp.first(), tol.point);
  out.d0 = dab_point(m, p, first_on_a ? perp.first() : perp.second(), first_on_a ? perp.second() : perp.first(), tol);
  out.f_d0 = f_ab(m, p, out.d0).f;
  out.vp_residual = std::hypot(out.argmin.s - out.d0.s, out.argmin.s_prime - out.d0.s_prime);
  return out;
}

AxiomIValue axiom_I_residual(const MoebiusStructure& m, const Tuple7& q) {
  require_nondegenerate(q, Tolerances{}.point);
  if (!is_cyclically_ordered(q)) {
    throw DomainError("axiom (I) needs a cyclically ordered 7-tuple");
  }
  const double c345 = cr1(m, pick(q, {0, 1, 5, 6}));
  const double c123 = cr1(m, pick(q, {3, 4, 5, 6}));
  const Event uv(q[5], q[2]);
  AxiomIValue v;
  v.residual = c345 - c123;
  v.delta = c345 / c123;
  v.harmonic_residual = std::max(std::abs(harmonicity_residual(m, uv, Event(q[0], q[4]))),
                                 std::abs(harmonicity_residual(m, uv, Event(q[1], q[3]))));
  return v;
}

Tuple7 axiom_I_tuple(const MoebiusStructure& m, CirclePoint u, CirclePoint x, CirclePoint o, CirclePoint omega,
                     CirclePoint v, const Tolerances& tol) {
  const std::array<CirclePoint, 5> free{u, x, o, omega, v};
  if (!is_cyclically_ordered(free)) {
    throw DomainError("axiom (I) construction needs u, x, o, omega, v in ccw order");
  }
  const Event uv(u, v, tol.point);
  const CirclePoint o_prime = harmonic_conjugate(m, uv, o, tol);
  const CirclePoint omega_prime = harmonic_conjugate(m, uv, omega, tol);
  return {o, omega, v, omega_prime, o_prime, u, x};
}

double delta_xyz(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint p) {
  const double dyp = m.distance(y, p);
  return dyp * dyp / (m.distance(x, p) * m.distance(z, p));
}

AxiomCValue axiom_C_residual(const MoebiusStructure& m, const Tuple6& q) {
  require_nondegenerate(q, Tolerances{}.point);
  if (!is_cyclically_ordered(q)) {
    throw DomainError("axiom (C) needs a cyclically ordered 6-tuple");
  }
  const CirclePoint o_prime = q[0], x = q[1], y = q[2], z = q[3], o = q[4], omega = q[5];
  AxiomCValue v;
  v.residual = cr1(m, Tuple4{y, z, o, omega}) - cr1(m, Tuple4{x, y, o, omega});
  v.delta_o = delta_xyz(m, x, y, z, o);
  v.delta_o_prime = delta_xyz(m, x, y, z, o_prime);
  v.delta_omega = delta_xyz(m, x, y, z, omega);
  return v;
}

Tuple6 axiom_C_tuple(const MoebiusStructure& m, CirclePoint o_prime, CirclePoint x, CirclePoint z, CirclePoint o,
                     CirclePoint omega, const Tolerances& tol) {
  const std::array<CirclePoint, 5> free{o_prime, x, z, o, omega};
  if (!is_cyclically_ordered(free)) {
    throw DomainError("axiom (C) construction needs o', x, z, o, omega in ccw order");
  }
  const Arc arc(x, z);
  const double len = arc.length();
  // ln delta(o) - ln delta(o') as a function of y; opposite signs at the two ends
  const auto g = [&](double off) {
    const CirclePoint y = arc.at(off);
    return std::log(delta_xyz(m, x, y, z, o)) - std::log(delta_xyz(m, x, y, z, o_prime));
  };
  const double lxo = std::log(m.distance(x, o)), lzo = std::log(m.distance(z, o));
  const double lxp = std::log(m.distance(x, o_prime)), lzp = std::log(m.distance(z, o_prime));
  const double g_lo = (lxo - lzo) - (lxp - lzp);
  const double g_hi = -g_lo;
  if (!(std::abs(g_lo) > 0.0)) {
    throw DegeneracyError("axiom (C) construction: constraint is flat at the ends");
  }
  const double off = detail::bracketed_root(g, 0.0, len, g_lo, g_hi, kArcRootWidth, tol.max_iterations, "axiom (C) y");
  return {o_prime, x, arc.at(off), z, o, omega};
}

EpsilonValue epsilon_neighborhood(const MoebiusStructure& m, const Tuple7& q, const Tolerances& tol) {
  require_nondegenerate(q, tol.point);
  if (!is_cyclically_ordered(q)) {
    throw DomainError("epsilon neighbourhood needs a cyclically ordered 7-tuple");
  }
  static const MoebiusStructure m0 = MoebiusStructure::canonical();
  const CirclePoint o = q[0], omega = q[1], omega_prime = q[3], u = q[5], x = q[6];
  const double oo = metric_inversion(m0, u, o, omega);
  const double xo = metric_inversion(m0, u, x, omega_prime);
  EpsilonValue v;
  v.epsilon = oo * oo / (4.0 * xo * xo);
  const std::array<Tuple4, 4> sub{pick(q, {0, 2, 4, 5}), pick(q, {1, 2, 3, 5}), pick(q, {0, 1, 5, 6}),
                                  pick(q, {3, 4, 5, 6})};
  v.deviation[0] = std::abs(cr2(m, sub[0]) - cr2(m0, sub[0]));
  v.deviation[1] = std::abs(cr2(m, sub[1]) - cr2(m0, sub[1]));
  v.deviation[2] = std::abs(cr1(m, sub[2]) - cr1(m0, sub[2]));
  v.deviation[3] = std::abs(cr1(m, sub[3]) - cr1(m0, sub[3]));
  v.member = *std::max_element(v.deviation.begin(), v.deviation.end()) < v.epsilon;
  return v;
}

std::optional<StrongPair> draw_strong_pair(SampleRng& rng, double gap, int& rejected) {
  const auto t = draw_sorted_tuple<4>(rng, gap, rejected);
  if (!t) return std::nullopt;
  // ccw order o, o', omega', omega
  return StrongPair((*t)[0], (*t)[1], (*t)[3], (*t)[2]);
}

SampleOutcome wti_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index, const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto t = draw_sorted_tuple<5>(rng, tol.min_gap, out.rejected);
  if (!t) return out;
  const auto& s = *t;
  const bool light_with_c = rng.uniform(0.0, 1.0) < 0.5;
  const Event b(s[1], s[3]);
  const Event a = light_with_c ? Event(s[4], s[0]) : Event(s[1], s[2]);
  const Event c = light_with_c ? Event(s[2], s[3]) : Event(s[4], s[0]);
  const double tac = time_between(m, a, c, tol);
  const double tab = time_between(m, a, b, tol), tbc = time_between(m, b, c, tol);
  out.tested = true;
  out.value = tac - tab - tbc;
  out.violation = !(out.value > tol.relative * std::max(1.0, tac));
  out.witness = angles_of(s);
  out.metrics = {light_with_c ? 1.0 : 0.0};
  return out;
}

SampleOutcome ti_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index, double tau,
                       const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const bool collinear = index % 10 == 0;
  std::optional<Event> a, b, c;
  if (collinear) {
    const auto t = draw_sorted_tuple<5>(rng, tol.min_gap, out.rejected);
    if (!t) return out;
    const auto& s = *t;
    const Event d(s[0], s[4]);
    std::array<CirclePoint, 6> pts{};
    std::array<Event, 3> ev{Event(s[0], s[4]), Event(s[0], s[4]), Event(s[0], s[4])};
    for (std::size_t k = 0; k < 3; ++k) {
      ev[k] = timelike_point(m, d, s[k + 1], tol);
      pts[2 * k] = ev[k].first();
      pts[2 * k + 1] = ev[k].second();
    }
    if (!nondegenerate(pts, tol.min_gap)) {
      ++out.rejected;
      return out;
    }
    a = ev[0];
    b = ev[1];
    c = ev[2];
    out.witness = angles_of(s);
  } else {
    const auto t = draw_sorted_tuple<6>(rng, tol.min_gap, out.rejected);
    if (!t) return out;
    const auto& s = *t;
    a = Event(s[0], s[1]);
    b = Event(s[2], s[5]);
    c = Event(s[3], s[4]);
    out.witness = angles_of(s);
  }
  const double tac = time_between(m, *a, *c, tol);
  const double gap = tac - time_between(m, *a, *b, tol) - time_between(m, *b, *c, tol);
  const double scale = tau * std::max(1.0, tac);
  // distance from collinearity: b against the common perpendicular of a and c
  const double off_line = std::abs(harmonicity_residual(m, *b, common_perpendicular(m, *a, *c, tol)));
  const bool equality = std::abs(gap) < scale;
  out.tested = true;
  out.value = gap;
  if (collinear) {
    out.violation = !equality;
  } else {
    // the gap is quadratic in the distance from the line, so only clearly
    // non-collinear equalities count
    out.violation = gap <= -scale || (equality && off_line > kCollinearResidual);
  }
  out.metrics = {collinear ? 1.0 : 0.0, equality ? 1.0 : 0.0, off_line};
  return out;
}

SampleOutcome lqi_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index, const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto p = draw_strong_pair(rng, tol.min_gap, out.rejected);
  if (!p) return out;
  const Event perp = common_perpendicular(m, p->a(), p->b(), tol);
  const CirclePoint x0_prime = p->arc_b().contains_open(perp.first(), tol.point) ? perp.first() : perp.second();
  const CirclePoint x_prime = rng.point_in(p->arc_b(), tol.min_gap);
  out.witness = {p->o().theta(), p->o_prime().theta(), p->omega().theta(), p->omega_prime().theta(), x_prime.theta()};
  if (angular_distance(x_prime, x0_prime) < tol.min_gap) {
    ++out.rejected;
    return out;
  }
  const CirclePoint x = harmonic_conjugate(m, p->a(), x_prime, tol);
  const DabPoint d = dab_point(m, *p, x, x_prime, tol);
  const DabPoint d0 = dab_point(m, *p, perp.other(x0_prime, tol.point), x0_prime, tol);
  const double f0 = f_ab(m, *p, d0).f;
  out.tested = true;
  out.value = f_ab(m, *p, d).f - f0;
  out.violation = !(out.value > tol.relative * std::max(1.0, f0));
  out.metrics = {f0};
  return out;
}

SampleOutcome vp_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index, double threshold,
                       const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto p = draw_strong_pair(rng, tol.min_gap, out.rejected);
  if (!p) return out;
  out.tested = true;
  out.witness = {p->o().theta(), p->o_prime().theta(), p->omega().theta(), p->omega_prime().theta()};
  try {
    const VpResult r = minimize_f_ab(m, *p, tol);
    out.value = r.vp_residual;
    out.violation = !(r.vp_residual < threshold);
    out.metrics = {r.f_min, r.f_d0, static_cast<double>(r.sweeps)};
  } catch (const ConvergenceError&) {
    out.value = std::numeric_limits<double>::infinity();
    out.violation = true;
  }
  return out;
}

SampleOutcome axiom_I_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto t = draw_sorted_tuple<5>(rng, tol.min_gap, out.rejected);
  if (!t) return out;
  const auto& s = *t;
  const Tuple7 q = axiom_I_tuple(m, s[0], s[1], s[2], s[3], s[4], tol);
  out.witness = angles_of(q);
  if (!nondegenerate(q, tol.min_gap)) {
    ++out.rejected;
    return out;
  }
  const AxiomIValue v = axiom_I_residual(m, q);
  out.tested = true;
  out.value = v.residual;
  out.violation = !(v.residual > 0.0);
  out.metrics = {v.delta, v.harmonic_residual};
  return out;
}

SampleOutcome axiom_C_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol) {
  SampleRng rng(seed, index);
  SampleOutcome out;
  const auto t = draw_sorted_tuple<5>(rng, tol.min_gap, out.rejected);
  if (!t) return out;
  const auto& s = *t;
  const Tuple6 q = axiom_C_tuple(m, s[0], s[1], s[2], s[3], s[4], tol);
  out.witness = angles_of(q);
  if (!nondegenerate(q, tol.min_gap)) {
    ++out.rejected;
    return out;
  }
  const AxiomCValue v = axiom_C_residual(m, q);
  out.tested = true;
  out.value = v.residual;
  out.violation = !(v.residual > 0.0);
  out.metrics = {v.delta_o, v.delta_o_prime, v.delta_omega};
  return out;
}

SampleOutcome epsilon_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol) {
  SampleOutcome out = axiom_I_trial(m, seed, index, tol);
  if (!out.tested) return out;
  Tuple7 q;
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = CirclePoint(out.witness[k]);
  const EpsilonValue e = epsilon_neighborhood(m, q, tol);
  const double dev = *std::max_element(e.deviation.begin(), e.deviation.end());
  out.violation = e.member && !(out.value > 0.0);
  out.metrics = {e.member ? 1.0 : 0.0, e.epsilon, dev};
  return out;
}

} // namespace mds
