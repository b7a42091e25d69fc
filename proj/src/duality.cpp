#include "mds/duality.hpp"

#include "mds/detail/roots.hpp"
#include "mds/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace mds {

CausalClass TimedSpaceOracle::causal_class(const Event& a, const Event& b) const {
  return mds::causal_class(a, b, Tolerances{}.point);
}

double TimedSpaceOracle::line_time(const Event& e, CirclePoint p, CirclePoint q) const {
  return time(timelike_point(e, p), timelike_point(e, q));
}

StructureOracle::StructureOracle(MoebiusStructure m, Tolerances tol, LineTimeMode mode)
    : m_(std::move(m)), tol_(tol), mode_(mode) {}

double StructureOracle::time(const Event& a, const Event& b) const { return time_between(m_, a, b, tol_); }

Event StructureOracle::timelike_point(const Event& e, CirclePoint x) const {
  return mds::timelike_point(m_, e, x, tol_);
}

double StructureOracle::line_time(const Event& e, CirclePoint p, CirclePoint q) const {
  if (mode_ == LineTimeMode::Direct) {
    return time_along(m_, e, p, q);
  }
  return TimedSpaceOracle::line_time(e, p, q);
}

StructureOracle forward_map(const MoebiusStructure& m, const SamplerConfig& check) {
  const bool grid = m.is_tabulated();
  const CheckSummary s = grid ? check_grid_monotonicity(m, check.tol) : check_monotonicity(m, check);
  if (!s.passed()) {
    std::ostringstream os;
    os << m.descriptor() << " is not monotone: " << s.violations << " of " << s.tested
       << " separating tuples fail; witness (x, y, z, u) =";
    for (double w : s.first_witness) os << " " << w;
    throw StructureViolation(os.str());
  }
  return StructureOracle(m, check.tol, grid ? LineTimeMode::Direct : LineTimeMode::Perpendicular);
}

CorruptedLineOracle::CorruptedLineOracle(const TimedSpaceOracle& base, Event line, double delta)
    : base_(base), line_(line), delta_(delta) {}

bool CorruptedLineOracle::on_line(const Event& a) const {
  try {
    return base_.timelike_point(line_, a.first()).same_as(a, 1e-8);
  } catch (const DegeneracyError&) {
    return false;
  }
}

double CorruptedLineOracle::time(const Event& a, const Event& b) const {
  const double t = base_.time(a, b);
  if (!a.same_as(b, Tolerances{}.point) && on_line(a) && on_line(b)) {
    return t + delta_;
  }
  return t;
}

double CorruptedLineOracle::line_time(const Event& e, CirclePoint p, CirclePoint q) const {
  const double t = base_.line_time(e, p, q);
  return e.same_as(line_, Tolerances{}.point) ? t + delta_ : t;
}

TimeLabels time_labels(const TimedSpaceOracle& t, const Tuple4& c) {
  TimeLabels out{};
  for (std::size_t k = 0; k < 4; ++k) {
    out[k] = t.line_time(Event(c[k], c[(k + 1) % 4]), c[(k + 2) % 4], c[(k + 3) % 4]);
  }
  return out;
}

namespace {

bool labels_agree(double s, double t, double tol) {
  return std::abs(s - t) <= tol * std::max({1.0, std::abs(s), std::abs(t)});
}

} // namespace

CrossRatioTriple submoebius_from_timed(const TimedSpaceOracle& t, const Tuple4& q, double consistency,
                                       const Tolerances& tol) {
  const auto co = canonical_cyclic_order<4>(q, tol.point);
  const TimeLabels lab = time_labels(t, co.word);
  if (!labels_agree(lab[0], lab[2], consistency) || !labels_agree(lab[1], lab[3], consistency)) {
    std::ostringstream os;
    os << "opposite time labels disagree: (" << lab[0] << ", " << lab[2] << ") and (" << lab[1] << ", "
       << lab[3] << ")";
    throw OracleInconsistency(os.str());
  }
  // base tuple (c0, c1, c3, c2) has cyclic order x y u z, where the triple is
  // (-t_xy, t_yu, t_xy - t_yu)
  const CrossRatioTriple base(-lab[0], lab[1], lab[0] - lab[1]);
  static constexpr std::array<int, 4> position_in_base{0, 1, 3, 2};
  std::array<int, 4> sigma{};
  for (std::size_t j = 0; j < 4; ++j) {
    sigma[static_cast<std::size_t>(co.index[j])] = position_in_base[j];
  }
  return Permutation4(sigma).cross_ratio_action() * base;
}

SubMoebiusMap submoebius_map(const TimedSpaceOracle& t, double consistency) {
  return [&t, consistency](const Tuple4& q) { return submoebius_from_timed(t, q, consistency); };
}

SubMoebiusMap structure_map(const MoebiusStructure& m) {
  return [m](const Tuple4& q) { return cross_ratio_triple(m, q); };
}

Codifferential codifferential(const SubMoebiusMap& m, const Tuple5& q) {
  Codifferential d;
  for (std::size_t i = 0; i < 5; ++i) {
    Tuple4 sub;
    std::size_t k = 0;
    for (std::size_t j = 0; j < 5; ++j) {
      if (j != i) sub[k++] = q[j];
    }
    d.row(static_cast<Eigen::Index>(i)) = m(sub).transpose();
  }
  return d;
}

ABResiduals codifferential_residuals(const Codifferential& d) {
  const auto a = [&](int i) { return d(i - 1, 0); };
  const auto b = [&](int i) { return d(i - 1, 1); };
  return {b(1) + b(4) - b(3) + a(1), b(2) + a(4) - b(1)};
}

ABResiduals codifferential_residuals(const SubMoebiusMap& m, const Tuple5& q) {
  return codifferential_residuals(codifferential(m, q));
}

double label_relation_residual(const TimedSpaceOracle& t, const Tuple5& c) {
  if (!is_cyclically_ordered(c)) {
    throw DomainError("label relations need a cyclically ordered 5-tuple");
  }
  const auto at = [&](int i) { return c[static_cast<std::size_t>(((i % 5) + 5) % 5)]; };
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double opposite_a = t.line_time(Event(at(i + 1), at(i + 2)), at(i + 3), at(i + 4));
    const double opposite_b = t.line_time(Event(at(i + 3), at(i + 4)), at(i + 1), at(i + 2));
    const Event line(at(i + 2), at(i + 3));
    const double whole = t.line_time(line, at(i + 4), at(i + 1));
    const double left = t.line_time(line, at(i + 4), at(i));
    const double right = t.line_time(line, at(i), at(i + 1));
    const double scale = std::max(1.0, whole);
    worst = std::max({worst, std::abs(opposite_a - opposite_b) / std::max(1.0, opposite_a),
                      std::abs(whole - left - right) / scale});
  }
  return worst;
}

double roundtrip_residual(const MoebiusStructure& m, const TimedSpaceOracle& t, const Tuple4& q,
                          const Tolerances& tol) {
  return (submoebius_from_timed(t, q, 1e-9, tol) - cross_ratio_triple(m, q, tol)).cwiseAbs().maxCoeff();
}

CirclePoint apply_linear_fractional(const Eigen::Matrix2d& g, CirclePoint p) {
  const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  const bool at_infinity = std::abs(p.theta() - kPi) < 1e-15;
  if (at_infinity) {
    return c == 0.0 ? CirclePoint(kPi) : CirclePoint(2.0 * std::atan(a / c));
  }
  const double s = std::tan(0.5 * p.theta());
  const double den = c * s + d;
  if (den == 0.0) {
    return CirclePoint(kPi);
  }
  return CirclePoint(2.0 * std::atan((a * s + b) / den));
}

Psl2Report psl2_pullback_check(const Eigen::Matrix2d& g, const MoebiusStructure& m, const SamplerConfig& cfg) {
  if (g.determinant() == 0.0) {
    throw ConfigError("linear-fractional map with zero determinant");
  }
  const auto gp = [&](CirclePoint p) { return apply_linear_fractional(g, p); };
  Psl2Report r;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    SampleRng rng(cfg.seed, i);
    int rejected = 0;
    const auto q = draw_sorted_tuple<4>(rng, cfg.tol.min_gap, rejected);
    if (!q) continue;
    const Tuple4 gq{gp((*q)[0]), gp((*q)[1]), gp((*q)[2]), gp((*q)[3])};
    if (!nondegenerate(gq, cfg.tol.min_gap)) continue;
    ++r.samples;
    r.max_triple_deviation = std::max(
        r.max_triple_deviation, (cross_ratio_triple(m, gq) - cross_ratio_triple(m, *q)).cwiseAbs().maxCoeff());
    // (q0, q2) is harmonic to (q1, conjugate of q1)
    const Event e((*q)[0], (*q)[2]);
    const CirclePoint y = harmonic_conjugate(m, e, (*q)[1], cfg.tol);
    const Event ge(gq[0], gq[2]);
    r.max_harmonic_residual =
        std::max(r.max_harmonic_residual, std::abs(harmonicity_residual(m, ge, Event(gq[1], gp(y)))));
    const double t0 = time_between(m, Event((*q)[0], (*q)[1]), Event((*q)[2], (*q)[3]), cfg.tol);
    const double t1 = time_between(m, Event(gq[0], gq[1]), Event(gq[2], gq[3]), cfg.tol);
    r.max_time_deviation = std::max(r.max_time_deviation, std::abs(t1 - t0));
  }
  return r;
}

double bracket(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint u) {
  return std::exp(m.log_pair_product(x, y, z, u) - m.log_pair_product(x, z, y, u));
}

PentagonResult pentagon_identity(const MoebiusStructure& m, std::uint64_t seed, const Tolerances& tol) {
  constexpr double kStep = 2.0 * kPi / 5.0;
  constexpr double kPerturbation = 0.01;
  constexpr double kFiniteDifference = 1e-6;
  constexpr double kDamping = 0.5;
  constexpr int kMaxIterations = 100;
  // symmetric canonical pentagon: odd points spaced by 72 degrees, even points
  // offset by phi with cos(phi) = 2 cos(72) - 1
  const double phi = std::acos(2.0 * std::cos(kStep) - 1.0);

  SampleRng rng(seed, 0);
  const double base = rng.uniform(0.0, kTwoPi);
  std::array<double, 10> guess{};
  for (int k = 0; k < 5; ++k) {
    guess[static_cast<std::size_t>(2 * k)] = base + kStep * k;
    guess[static_cast<std::size_t>(2 * k + 1)] = base + phi + kStep * k;
  }
  for (int i : {1, 2, 4, 6}) {
    guess[static_cast<std::size_t>(i)] += rng.uniform(-kPerturbation, kPerturbation);
  }

  PentagonResult r;
  auto& x = r.x;
  for (std::size_t i = 0; i < 10; ++i) x[i] = CirclePoint(guess[i]);
  x[3] = harmonic_conjugate(m, Event(x[0], x[1]), x[2], tol);
  x[5] = harmonic_conjugate(m, Event(x[2], x[3]), x[4], tol);
  x[7] = harmonic_conjugate(m, Event(x[4], x[5]), x[6], tol);

  const Event l7(x[6], x[7]), l1(x[0], x[1]);
  // residuals with fixed roles of the endpoints, so they stay smooth when the
  // unknowns cross angle zero
  const auto h = [&](CirclePoint p, CirclePoint q, CirclePoint z, CirclePoint u) {
    return m.log_pair_product(p, z, q, u) - m.log_pair_product(p, u, q, z);
  };
  const auto residuals = [&](const Eigen::Vector2d& v) {
    const CirclePoint p(v(0)), q(v(1));
    return Eigen::Vector2d(h(x[6], x[7], p, q), h(p, q, x[0], x[1]));
  };

  Eigen::Vector2d v(guess[8], guess[9]);
  Eigen::Vector2d f = residuals(v);
  int it = 0;
  for (; it < kMaxIterations && f.cwiseAbs().maxCoeff() > tol.root * 0.1; ++it) {
    Eigen::Matrix2d jac;
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector2d w = v;
      w(j) += kFiniteDifference;
      jac.col(j) = (residuals(w) - f) / kFiniteDifference;
    }
    Eigen::Vector2d step = jac.partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    // keep trial points near the current guess; the residuals blow up at the fixed points
    const double len = step.cwiseAbs().maxCoeff();
    if (len > 0.1) step *= 0.1 / len;
    double lambda = 1.0;
    Eigen::Vector2d next = v + step;
    Eigen::Vector2d fn = residuals(next);
    while (fn.norm() >= f.norm() && lambda > 1e-6) {
      lambda *= kDamping;
      next = v + lambda * step;
      fn = residuals(next);
    }
    if (fn.norm() >= f.norm()) {
      break;
    }
    v = next;
    f = fn;
  }
  r.iterations = it;
  r.closure_residual = f.cwiseAbs().maxCoeff();
  if (!(r.closure_residual < 1e-9)) {
    std::ostringstream os;
    os << "pentagon shooting failed after " << it << " iterations; residuals " << f(0) << ", " << f(1);
    throw ConvergenceError(os.str());
  }
  x[8] = CirclePoint(v(0));
  x[9] = CirclePoint(v(1));

  // expected cyclic order x1 x10 x3 x2 x5 x4 x7 x6 x9 x8
  const std::array<CirclePoint, 10> order{x[0], x[9], x[2], x[1], x[4], x[3], x[6], x[5], x[8], x[7]};
  if (!is_cyclically_ordered(order)) {
    throw ConvergenceError("pentagon shooting converged to points out of cyclic order");
  }

  const Event direct = common_perpendicular(m, l7, l1, tol);
  r.perpendicular_mismatch = std::max(angular_distance(direct.first(), Event(x[8], x[9]).first()),
                                      angular_distance(direct.second(), Event(x[8], x[9]).second()));

  const auto br = [&](int i, int j, int k, int l) {
    return bracket(m, x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)],
                   x[static_cast<std::size_t>(k - 1)], x[static_cast<std::size_t>(l - 1)]);
  };
  const std::array<double, 6> chain{br(1, 3, 4, 2), br(6, 3, 4, 5), br(6, 8, 7, 5),
                                    br(9, 8, 7, 10), br(9, 1, 2, 10), br(4, 1, 2, 3)};
  r.chain_deviation = *std::max_element(chain.begin(), chain.end()) - *std::min_element(chain.begin(), chain.end());
  r.residual = std::abs(chain[0] - 1.0);
  return r;
}

namespace {

/// Point w on the arc from `from` towards `to` with ln R(w) = target, R = |xw| / |yw|.
CirclePoint solve_log_ratio(const MoebiusStructure& m, const Event& line, const Arc& arc, double target,
                            const Tolerances& tol) {
  const CirclePoint x = line.first(), y = line.second();
  const auto f = [&](double s) {
    const CirclePoint w = arc.at(s);
    return std::log(m.distance(x, w)) - std::log(m.distance(y, w)) - target;
  };
  const double len = arc.length();
  double lo = len * 1e-9, hi = len * (1 - 1e-9);
  double flo = f(lo), fhi = f(hi);
  const double s = detail::bracketed_root(f, lo, hi, flo, fhi, 1e-15, tol.max_iterations, "time inversion");
  return arc.at(s);
}

double ratio(double residual, double threshold) { return std::abs(residual) / threshold; }

} // namespace

SampleOutcome axioms_trial(const StructureOracle& t, std::uint64_t seed, std::uint64_t index, double time_tol,
                           double angle_tol) {
  SampleOutcome out;
  SampleRng rng(seed, index);
  const MoebiusStructure& m = t.structure();
  const Tolerances& tol = t.tolerances();
  const auto drawn = draw_sorted_tuple<5>(rng, tol.min_gap, out.rejected);
  if (!drawn) return out;
  const auto& s = *drawn;
  out.tested = true;
  out.witness = angles_of(s);
  std::array<double, 12> r{};
  const auto trel = [&](double a, double b) { return ratio(a - b, time_tol * std::max({1.0, std::abs(a), std::abs(b)})); };

  const Event e(s[0], s[3]);
  const Event a = t.timelike_point(e, s[1]);
  const Event b = t.timelike_point(e, s[2]);
  const Event c = t.timelike_point(e, s[4]);

  // h1: the event through s1 on h_e contains s1 and is harmonic to e
  r[0] = std::max(a.contains(s[1], angle_tol) ? 0.0 : 2.0, ratio(harmonicity_residual(m, a, e), 1e-9));
  // h2: events on h_e separate e
  r[1] = (causal_class(a, e, tol.point) == CausalClass::Separate) ? 0.0 : 2.0;
  // h3: events on one line are causal
  r[2] = (causal_class(a, b, tol.point) != CausalClass::Separate &&
          causal_class(a, c, tol.point) != CausalClass::Separate)
             ? 0.0
             : 2.0;
  // h4: the event through the other endpoint of a is a again
  const CirclePoint a2 = a.other(s[1], tol.point);
  const Event back = t.timelike_point(e, a2);
  r[3] = ratio(std::max(angular_distance(back.first(), a.first()), angular_distance(back.second(), a.second())),
               angle_tol);
  // h5: e lies on h_a
  const Event dual = t.timelike_point(a, e.first());
  r[4] = ratio(std::max(angular_distance(dual.first(), e.first()), angular_distance(dual.second(), e.second())),
               angle_tol);
  // h6: the only line through a and b is h_e
  const Event perp = common_perpendicular(m, a, b, tol);
  r[5] = ratio(std::max(angular_distance(perp.first(), e.first()), angular_distance(perp.second(), e.second())),
               angle_tol);

  // t1: defined exactly for causal pairs
  bool t1_ok = true;
  try {
    (void)t.time(a, e);
    t1_ok = false;
  } catch (const CausalClassError&) {
  }
  const double tab = t.time(a, b);
  const double tba = t.time(b, a);
  t1_ok = t1_ok && std::isfinite(tab) && tab >= 0.0;
  r[6] = t1_ok ? 0.0 : 2.0;
  // t2: zero exactly on light lines
  const double light = t.time(Event(s[0], s[1]), Event(s[1], s[2]));
  r[7] = std::max(ratio(light, time_tol), tab > time_tol ? 0.0 : 2.0);
  // t3: symmetry
  r[8] = trel(tab, tba);
  // t4a: additivity along h_e, events sorted by ln R of their first point
  {
    std::array<Event, 3> ev{a, b, c};
    const auto key = [&](const Event& ev_) {
      return std::log(m.distance(e.first(), ev_.first())) - std::log(m.distance(e.second(), ev_.first()));
    };
    std::sort(ev.begin(), ev.end(), [&](const Event& p, const Event& q) { return key(p) < key(q); });
    const double t01 = t.time(ev[0], ev[1]), t12 = t.time(ev[1], ev[2]), t02 = t.time(ev[0], ev[2]);
    r[9] = trel(t01 + t12, t02);
  }
  // t4b: events at any prescribed time on both sides of a, here along h_e
  {
    const double target = rng.uniform(0.1, 3.0);
    const double base = std::log(m.distance(e.first(), s[1])) - std::log(m.distance(e.second(), s[1]));
    const Arc side(e.first(), e.second());   // s1 lies on this arc by construction
    const CirclePoint wp = solve_log_ratio(m, e, side, base + target, tol);
    const CirclePoint wm = solve_log_ratio(m, e, side, base - target, tol);
    const Event ep = t.timelike_point(e, wp), em = t.timelike_point(e, wm);
    const OrientedLine ol{a, true};
    const int sp = side_of(ol, ep, tol.point), sm = side_of(ol, em, tol.point);
    const bool sides_ok = sp != 0 && sp == -sm;
    r[9] = std::max({r[9], trel(t.time(a, ep), target), trel(t.time(a, em), target), sides_ok ? 0.0 : 2.0});
  }
  // t5: for strong causal e1 = (x, y), d = (z, u): t(z_e1, u_e1) = t(x_d, y_d)
  {
    const Event e1(s[0], s[1]), d(s[2], s[4]);
    const double lhs = t.time(t.timelike_point(e1, s[2]), t.timelike_point(e1, s[4]));
    const double rhs = t.time(t.timelike_point(d, s[0]), t.timelike_point(d, s[1]));
    r[10] = trel(lhs, rhs);
  }
  // t6: e = (x, y), d = (z, u) on h_e, a' = (x, z), b' = (x, u): t(y_a', u_a') = t(y_b', z_b')
  {
    const CirclePoint x = e.first(), y = e.second(), z = s[1], u = a2;
    const Event ap(x, z), bp(x, u);
    const double lhs = t.time(t.timelike_point(ap, y), t.timelike_point(ap, u));
    const double rhs = t.time(t.timelike_point(bp, y), t.timelike_point(bp, z));
    r[11] = trel(lhs, rhs);
  }

  out.metrics.assign(r.begin(), r.end());
  out.value = *std::max_element(r.begin(), r.end());
  out.violation = out.value > 1.0;
  return out;
}

namespace {

template <std::size_t N> Tuple<N> shuffled(Tuple<N> q, SampleRng& rng) {
  for (std::size_t i = N - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(i + 1)));
    std::swap(q[i], q[std::min(j, i)]);
  }
  return q;
}

/// k distinct grid indices, sorted, or nothing when the grid is too small.
template <std::size_t K>
std::optional<Tuple<K>> draw_grid_tuple(const DistanceGrid& g, SampleRng& rng) {
  const std::size_t n = g.angles.size();
  if (n < K) return std::nullopt;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < K; ++i) {
    const auto j = i + std::min(n - i - 1, static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(n - i))));
    std::swap(idx[i], idx[j]);
  }
  std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(K));
  Tuple<K> q;
  for (std::size_t i = 0; i < K; ++i) q[i] = CirclePoint(g.angles[idx[i]]);
  return q;
}

SampleOutcome roundtrip_on(const MoebiusStructure& m, const TimedSpaceOracle& t, const Tuple4& q, double threshold,
                           const Tolerances& tol) {
  SampleOutcome out;
  out.tested = true;
  out.witness = angles_of(q);
  out.value = roundtrip_residual(m, t, q, tol);
  out.violation = !(out.value < threshold);
  return out;
}

SampleOutcome ab_on(const TimedSpaceOracle& t, const Tuple5& sorted, const Tuple5& q, double threshold) {
  SampleOutcome out;
  out.tested = true;
  out.witness = angles_of(q);
  const auto ab = codifferential_residuals(submoebius_map(t), q);
  const double labels = label_relation_residual(t, sorted);
  out.metrics = {ab.a, ab.b, labels};
  out.value = std::max(std::abs(ab.a), std::abs(ab.b));
  out.violation = !(out.value < threshold) || !(labels < threshold);
  return out;
}

} // namespace

SampleOutcome roundtrip_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                              std::uint64_t index, double threshold, const Tolerances& tol) {
  SampleRng rng(seed, index);
  int rejected = 0;
  const auto q = draw_sorted_tuple<4>(rng, tol.min_gap, rejected);
  if (!q) {
    SampleOutcome out;
    out.rejected = rejected;
    return out;
  }
  auto out = roundtrip_on(m, t, shuffled(*q, rng), threshold, tol);
  out.rejected = rejected;
  return out;
}

SampleOutcome ab_trial(const TimedSpaceOracle& t, std::uint64_t seed, std::uint64_t index, double threshold,
                       const Tolerances& tol) {
  SampleRng rng(seed, index);
  int rejected = 0;
  const auto q = draw_sorted_tuple<5>(rng, tol.min_gap, rejected);
  if (!q) {
    SampleOutcome out;
    out.rejected = rejected;
    return out;
  }
  auto out = ab_on(t, *q, shuffled(*q, rng), threshold);
  out.rejected = rejected;
  return out;
}

SampleOutcome grid_roundtrip_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                                   std::uint64_t index, double threshold) {
  SampleRng rng(seed, index);
  const auto q = draw_grid_tuple<4>(*m.grid(), rng);
  if (!q) return {};
  return roundtrip_on(m, t, shuffled(*q, rng), threshold, Tolerances{});
}

SampleOutcome grid_ab_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                            std::uint64_t index, double threshold) {
  SampleRng rng(seed, index);
  const auto q = draw_grid_tuple<5>(*m.grid(), rng);
  if (!q) return {};
  return ab_on(t, *q, shuffled(*q, rng), threshold);
}

} // namespace mds
