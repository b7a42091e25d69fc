#include "mds/causal.hpp"

#include "mds/detail/roots.hpp"
#include "mds/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace mds {

namespace {

constexpr double kArcRootWidth = 1e-15;
constexpr int kProbeCount = 8;

std::string describe(const Event& e) {
  std::ostringstream os;
  os << "(" << e.first().theta() << ", " << e.second().theta() << ")";
  return os.str();
}

/// The arc of e not containing p.
Arc arc_avoiding(const Event& e, CirclePoint p, double eps) {
  const Arc arc(e.first(), e.second());
  return arc.contains_open(p, eps) ? arc.complement() : arc;
}

} // namespace

Event::Event(CirclePoint a, CirclePoint b, double eps) {
  if (same_point(a, b, eps)) {
    std::ostringstream os;
    os << "event endpoints coincide at " << a.theta();
    throw DegeneracyError(os.str());
  }
  if (a.theta() <= b.theta()) {
    first_ = a;
    second_ = b;
  } else {
    first_ = b;
    second_ = a;
  }
}

CirclePoint Event::other(CirclePoint p, double eps) const {
  if (same_point(p, first_, eps)) return second_;
  if (same_point(p, second_, eps)) return first_;
  throw DomainError("point is not an endpoint of the event");
}

const char* to_string(CausalClass c) {
  switch (c) {
  case CausalClass::Separate: return "separate";
  case CausalClass::Lightlike: return "lightlike";
  case CausalClass::StrongCausal: return "strong-causal";
  }
  return "?";
}

const char* to_string(Order o) {
  switch (o) {
  case Order::Less: return "<";
  case Order::Equal: return "=";
  case Order::Greater: return ">";
  case Order::Incomparable: return "incomparable";
  }
  return "?";
}

CausalClass causal_class(const Event& a, const Event& b, double eps) {
  if (a.same_as(b, eps)) {
    throw IdenticalEventError("identical events " + describe(a));
  }
  const int shared = static_cast<int>(a.contains(b.first(), eps)) + static_cast<int>(a.contains(b.second(), eps));
  if (shared == 1) {
    return CausalClass::Lightlike;
  }
  return separates(a.first(), a.second(), b.first(), b.second(), eps) ? CausalClass::Separate
                                                                       : CausalClass::StrongCausal;
}

double harmonicity_residual(const MoebiusStructure& m, const Event& a, const Event& b) {
  const CirclePoint x = a.first(), y = a.second(), z = b.first(), u = b.second();
  const std::array<CirclePoint, 4> pts{x, y, z, u};
  require_nondegenerate(pts, Tolerances{}.point);
  return m.log_pair_product(x, z, y, u) - m.log_pair_product(x, u, y, z);
}

CirclePoint harmonic_conjugate(const MoebiusStructure& m, const Event& e, CirclePoint x, const Tolerances& tol) {
  if (e.contains(x, tol.point)) {
    throw DegeneracyError("harmonic conjugate of an endpoint of " + describe(e));
  }
  // y runs over the arc (z, u) of e avoiding x; the residual falls from +inf at z to -inf at u
  const Arc arc = arc_avoiding(e, x, tol.point);
  const CirclePoint z = arc.start(), u = arc.end();
  const double len = arc.length();
  const double lxz = std::log(m.distance(x, z));
  const double lxu = std::log(m.distance(x, u));
  const auto residual = [&](double s) {
    const CirclePoint y = arc.at(s);
    return (lxz + std::log(m.distance(y, u))) - (lxu + std::log(m.distance(y, z)));
  };

  std::array<double, kProbeCount + 1> r{};
  for (int k = 1; k < kProbeCount; ++k) {
    r[static_cast<std::size_t>(k)] = residual(len * k / kProbeCount);
  }
  for (int k = 2; k < kProbeCount; ++k) {
    if (!(r[static_cast<std::size_t>(k)] < r[static_cast<std::size_t>(k - 1)])) {
      std::ostringstream os;
      os << m.descriptor() << ": harmonicity residual not monotone along " << describe(e) << " for x = "
         << x.theta();
      throw StructureViolation(os.str());
    }
  }

  double lo = 0.0, hi = 0.0, flo = 0.0, fhi = 0.0;
  int k = 1;
  while (k < kProbeCount && r[static_cast<std::size_t>(k)] > 0.0) ++k;
  if (k == 1) {
    // root between z and the first probe: shrink towards z until positive
    hi = len / kProbeCount;
    fhi = r[1];
    lo = 0.5 * hi;
    flo = residual(lo);
    while (flo <= 0.0) {
      hi = lo;
      fhi = flo;
      lo *= 0.5;
      if (lo < tol.point * 1e-3) {
        throw DegeneracyError("harmonic conjugate collapses onto an endpoint of " + describe(e));
      }
      flo = residual(lo);
    }
  } else if (k == kProbeCount) {
    lo = len * (kProbeCount - 1) / kProbeCount;
    flo = r[kProbeCount - 1];
    double gap = len - lo;
    hi = len - 0.5 * gap;
    fhi = residual(hi);
    while (fhi >= 0.0) {
      lo = hi;
      flo = fhi;
      gap *= 0.5;
      if (gap < tol.point * 1e-3) {
        throw DegeneracyError("harmonic conjugate collapses onto an endpoint of " + describe(e));
      }
      hi = len - 0.5 * gap;
      fhi = residual(hi);
    }
  } else {
    lo = len * (k - 1) / kProbeCount;
    hi = len * k / kProbeCount;
    flo = r[static_cast<std::size_t>(k - 1)];
    fhi = r[static_cast<std::size_t>(k)];
  }
  const double s =
      detail::bracketed_root(residual, lo, hi, flo, fhi, kArcRootWidth, tol.max_iterations, "harmonic conjugate");
  return arc.at(s);
}

Event timelike_point(const MoebiusStructure& m, const Event& e, CirclePoint x, const Tolerances& tol) {
  return Event(x, harmonic_conjugate(m, e, x, tol), tol.point);
}

Perpendicular solve_common_perpendicular(const MoebiusStructure& m, const Event& a, const Event& b,
                                         const Tolerances& tol) {
  const CausalClass c = causal_class(a, b, tol.point);
  if (c != CausalClass::StrongCausal) {
    throw CausalClassError(std::string("common perpendicular needs strong causal events, got ") + to_string(c));
  }
  // x runs over the arc of a avoiding b; g(x) = position of rho_a(rho_b(x)) minus x
  const Arc arc = arc_avoiding(a, b.first(), tol.point);
  const double len = arc.length();
  const auto g = [&](double s) {
    const CirclePoint x = arc.at(s);
    const CirclePoint w = harmonic_conjugate(m, b, x, tol);
    const CirclePoint v = harmonic_conjugate(m, a, w, tol);
    double off = arc.offset_of(v);
    // v sits strictly inside the arc; offsets just past the end wrap around
    if (off > len + 0.5 * (kTwoPi - len)) off -= kTwoPi;
    return off - s;
  };
  const double s = detail::bracketed_root(g, 0.0, len, g(0.0), g(len), kArcRootWidth, tol.max_iterations,
                                          "common perpendicular");
  const CirclePoint x = arc.at(s);
  const Event line(x, harmonic_conjugate(m, b, x, tol), tol.point);
  return Perpendicular{line, harmonicity_residual(m, a, line), harmonicity_residual(m, b, line)};
}

Event common_perpendicular(const MoebiusStructure& m, const Event& a, const Event& b, const Tolerances& tol) {
  return solve_common_perpendicular(m, a, b, tol).line;
}

double time_along(const MoebiusStructure& m, const Event& e, CirclePoint p, CirclePoint q) {
  const CirclePoint x = e.first(), y = e.second();
  const std::array<CirclePoint, 4> pts{x, y, p, q};
  const Tolerances tol;
  require_nondegenerate(std::span<const CirclePoint>(pts.data(), 3), tol.point);
  if (e.contains(q, tol.point)) {
    throw DegeneracyError("time_along: point on the line's ends");
  }
  // ln R(q) - ln R(p) with R(w) = |xw| / |yw|
  return std::abs(m.log_pair_product(x, q, y, p) - m.log_pair_product(x, p, y, q));
}

TimeEvaluation evaluate_time(const MoebiusStructure& m, const Event& a, const Event& b, const Tolerances& tol) {
  TimeEvaluation out;
  if (a.same_as(b, tol.point)) {
    return out;
  }
  const CausalClass c = causal_class(a, b, tol.point);
  if (c == CausalClass::Separate) {
    throw CausalClassError("time is undefined for separate events");
  }
  if (c == CausalClass::Lightlike) {
    return out;
  }
  const Perpendicular p = solve_common_perpendicular(m, a, b, tol);
  const std::array<double, 4> forms{
      time_along(m, p.line, a.first(), b.first()), time_along(m, p.line, a.first(), b.second()),
      time_along(m, p.line, a.second(), b.first()), time_along(m, p.line, a.second(), b.second())};
  out.time = forms[0];
  out.discrepancy = *std::max_element(forms.begin(), forms.end()) - *std::min_element(forms.begin(), forms.end());
  out.perpendicular = p.line;
  return out;
}

double time_between(const MoebiusStructure& m, const Event& a, const Event& b, const Tolerances& tol) {
  return evaluate_time(m, a, b, tol).time;
}

namespace {

bool inside_closed(const Arc& arc, const Event& a, double eps) {
  return arc.contains_closed(a.first(), eps) && arc.contains_closed(a.second(), eps) &&
         (arc.contains_open(a.first(), eps) || arc.contains_open(a.second(), eps));
}

/// The arc of a lying inside `side` (a must be inside the closed side).
Arc arc_within(const Event& a, const Arc& side, double eps) {
  const Arc arc(a.first(), a.second());
  const CirclePoint mid = arc.at(0.5 * arc.length());
  return side.contains_open(mid, eps) ? arc : arc.complement();
}

bool less_equal(const OrientedLine& line, const Event& a, const Event& b, double eps) {
  const Arc fut = line.future(), past = line.past();
  const bool a_fut = inside_closed(fut, a, eps), a_past = inside_closed(past, a, eps);
  const bool b_fut = inside_closed(fut, b, eps), b_past = inside_closed(past, b, eps);
  if (a_past && b_fut) return true;
  if (a_fut && b_fut) return inside_closed(arc_within(a, fut, eps), b, eps) || a.same_as(b, eps);
  if (a_past && b_past) return inside_closed(arc_within(b, past, eps), a, eps) || a.same_as(b, eps);
  return false;
}

} // namespace

int side_of(const OrientedLine& line, const Event& a, double eps) {
  if (inside_closed(line.future(), a, eps)) return 1;
  if (inside_closed(line.past(), a, eps)) return -1;
  return 0;
}

Order order_compare(const OrientedLine& line, const Event& a, const Event& b, double eps) {
  if (a.same_as(b, eps)) {
    return Order::Equal;
  }
  if (less_equal(line, a, b, eps)) return Order::Less;
  if (less_equal(line, b, a, eps)) return Order::Greater;
  return Order::Incomparable;
}

} // namespace mds
