#pragma once

#include "mds/causal.hpp"
#include "mds/moebius.hpp"
#include "mds/sampling.hpp"

#include <array>
#include <cstdint>

namespace mds {

/// Strong causal events a = (o, o'), b = (omega, omega') such that (o, omega')
/// separates (o', omega); around the circle the points read o, o', omega', omega
/// (in one of the two orientations).
class StrongPair {
public:
  /// Throws DomainError when the separation pattern does not hold.
  StrongPair(CirclePoint o, CirclePoint o_prime, CirclePoint omega, CirclePoint omega_prime,
             double eps = Tolerances{}.point);

  CirclePoint o() const { return o_; }
  CirclePoint o_prime() const { return o_prime_; }
  CirclePoint omega() const { return omega_; }
  CirclePoint omega_prime() const { return omega_prime_; }

  Event a() const { return Event(o_, o_prime_); }
  Event b() const { return Event(omega_, omega_prime_); }
  Event e() const { return Event(o_, omega_); }
  Event e_prime() const { return Event(o_prime_, omega_prime_); }

  /// Arc between o and o' avoiding b, and between omega' and omega avoiding a.
  const Arc& arc_a() const { return arc_a_; }
  const Arc& arc_b() const { return arc_b_; }

private:
  CirclePoint o_, o_prime_, omega_, omega_prime_;
  Arc arc_a_, arc_b_;
};

/// An event d = (x, x') strictly between (o, omega) and (o', omega'), with its
/// coordinates s = ln(|ox| / |o'x|) on h_a and s' = ln(|omega x'| / |omega' x'|) on h_b.
struct DabPoint {
  CirclePoint x;
  CirclePoint x_prime;
  double s = 0.0;
  double s_prime = 0.0;

  Event event() const { return Event(x, x_prime); }
};

/// Coordinates of (x, x'); DomainError when x or x' leaves its open arc.
DabPoint dab_point(const MoebiusStructure& m, const StrongPair& p, CirclePoint x, CirclePoint x_prime,
                   const Tolerances& tol = {});

/// The point with coordinates (s, s'), by root finding along both arcs.
DabPoint dab_from_coordinates(const MoebiusStructure& m, const StrongPair& p, double s, double s_prime,
                              const Tolerances& tol = {});

struct FValue {
  double t_plus = 0.0;    ///< t(o_d, omega_d)
  double t_minus = 0.0;   ///< t(o'_d, omega'_d)
  double f = 0.0;
};

FValue f_ab(const MoebiusStructure& m, const StrongPair& p, const DabPoint& d);

struct VpResult {
  DabPoint argmin;             ///< the numerical minimizer d*
  double f_min = 0.0;
  DabPoint d0;                 ///< common perpendicular of a and b
  double f_d0 = 0.0;           ///< equals t(a, b)
  double vp_residual = 0.0;    ///< |d* - d0| in (s, s')
  int sweeps = 0;
};

/// 64 x 64 grid over arc fractions, then coordinate-wise line minimization in
/// (s, s') until a sweep moves less than 1e-8 or stops lowering F. ConvergenceError after 200 sweeps.
VpResult minimize_f_ab(const MoebiusStructure& m, const StrongPair& p, const Tolerances& tol = {});

struct AxiomIValue {
  double residual = 0.0;   ///< cr1(q_345) - cr1(q_123)
  double delta = 0.0;      ///< cr1(q_345) / cr1(q_123)
  double harmonic_residual = 0.0;   ///< max harmonicity residual of q_247, q_157
};

/// q = (o, omega, v, omega', o', u, x) in cyclic order.
AxiomIValue axiom_I_residual(const MoebiusStructure& m, const Tuple7& q);

/// Builds q from u, x, o, omega, v (in this ccw order) with o' = rho_(u,v)(o) and
/// omega' = rho_(u,v)(omega).
Tuple7 axiom_I_tuple(const MoebiusStructure& m, CirclePoint u, CirclePoint x, CirclePoint o, CirclePoint omega,
                     CirclePoint v, const Tolerances& tol = {});

/// delta_{x,y,z}(p) = |yp|^2 / (|xp| |zp|).
double delta_xyz(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint p);

struct AxiomCValue {
  double residual = 0.0;   ///< cr1(q_12) - cr1(q_14)
  double delta_o = 0.0;
  double delta_o_prime = 0.0;
  double delta_omega = 0.0;
};

/// q = (o', x, y, z, o, omega) in cyclic order.
AxiomCValue axiom_C_residual(const MoebiusStructure& m, const Tuple6& q);

/// Solves y between x and z with delta(o) = delta(o'); the arguments are in ccw order.
Tuple6 axiom_C_tuple(const MoebiusStructure& m, CirclePoint o_prime, CirclePoint x, CirclePoint z,
                     CirclePoint o, CirclePoint omega, const Tolerances& tol = {});

struct EpsilonValue {
  double epsilon = 0.0;
  bool member = false;
  std::array<double, 4> deviation{};   ///< at q_247, q_157, q_345, q_123
};

/// Fine-topology neighbourhood of the canonical structure at a cyclic 7-tuple
/// q = (o, omega, v, omega', o', u, x).
EpsilonValue epsilon_neighborhood(const MoebiusStructure& m, const Tuple7& q, const Tolerances& tol = {});

/// Random strong pair; nullopt when no nondegenerate draw was found.
std::optional<StrongPair> draw_strong_pair(SampleRng& rng, double gap, int& rejected);

/// WTI on a < b < c with b lightlike to a or c. value = t(a,c) - t(a,b) - t(b,c).
SampleOutcome wti_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                        const Tolerances& tol = {});

/// TI on a < b < c; every tenth sample is collinear on a timelike line and must
/// have |gap| < tau. The others need gap > -tau, and |gap| < tau only when b is
/// nearly on the common perpendicular of a and c.
/// metrics = {collinear, |gap| < tau, harmonicity residual of b against that perpendicular}.
SampleOutcome ti_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index, double tau = 1e-9,
                       const Tolerances& tol = {});

/// LQI with d on h_a; value = F(d) - F(d0). Untested when d is within min_gap of d0.
SampleOutcome lqi_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                        const Tolerances& tol = {});

/// VP: value = vp_residual; metrics = {f_min, f_d0, sweeps}.
SampleOutcome vp_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                       double threshold = 1e-6, const Tolerances& tol = {});

/// Axiom (I) on a constructed tuple; metrics = {delta, harmonic residual}.
SampleOutcome axiom_I_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol = {});

/// Axiom (C) on a constructed tuple; metrics = {delta_o, delta_o', delta_omega}.
SampleOutcome axiom_C_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol = {});

/// Axiom (I) restricted to the canonical neighbourhood: metrics = {member, epsilon,
/// max deviation}. Violation when q is a member and the (I) residual is not positive.
SampleOutcome epsilon_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                            const Tolerances& tol = {});

} // namespace mds
