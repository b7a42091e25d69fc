#pragma once

#include "mds/circle.hpp"
#include "mds/moebius.hpp"

#include <optional>

namespace mds {

/// Unordered pair of distinct circle points, stored with first.theta() < second.theta().
class Event {
public:
  Event(CirclePoint a, CirclePoint b, double eps = Tolerances{}.point);

  CirclePoint first() const { return first_; }
  CirclePoint second() const { return second_; }

  bool contains(CirclePoint p, double eps) const {
    return same_point(p, first_, eps) || same_point(p, second_, eps);
  }
  /// Same unordered pair within eps.
  bool same_as(const Event& other, double eps) const {
    return contains(other.first_, eps) && contains(other.second_, eps);
  }
  /// The point of the event other than p (p must be an endpoint).
  CirclePoint other(CirclePoint p, double eps) const;

private:
  CirclePoint first_;
  CirclePoint second_;
};

enum class CausalClass { Separate, Lightlike, StrongCausal };

const char* to_string(CausalClass c);

/// Separate when the events separate each other, lightlike when they share
/// exactly one point, strong causal when disjoint and non-separating.
/// Identical events raise IdenticalEventError.
CausalClass causal_class(const Event& a, const Event& b, double eps = Tolerances{}.point);

/// ln(|xz||yu|) - ln(|xu||yz|) for a = (x, y), b = (z, u); zero iff a and b are harmonic.
double harmonicity_residual(const MoebiusStructure& m, const Event& a, const Event& b);

/// The point y with (x, y) harmonic to e; x must not be an endpoint of e.
/// Throws StructureViolation when the residual is not monotone along the arc.
CirclePoint harmonic_conjugate(const MoebiusStructure& m, const Event& e, CirclePoint x,
                               const Tolerances& tol = {});

/// The event (x, rho_e(x)) on the timelike line h_e.
Event timelike_point(const MoebiusStructure& m, const Event& e, CirclePoint x, const Tolerances& tol = {});

struct Perpendicular {
  Event line;
  double residual_a;   ///< harmonicity residual of (a, line)
  double residual_b;   ///< harmonicity residual of (b, line)
};

/// The unique event harmonic to both a and b; a and b must be strong causal.
Perpendicular solve_common_perpendicular(const MoebiusStructure& m, const Event& a, const Event& b,
                                         const Tolerances& tol = {});

Event common_perpendicular(const MoebiusStructure& m, const Event& a, const Event& b,
                           const Tolerances& tol = {});

/// Time between p_e and q_e on the timelike line h_e, where p, q are not endpoints of e.
double time_along(const MoebiusStructure& m, const Event& e, CirclePoint p, CirclePoint q);

struct TimeEvaluation {
  double time = 0.0;
  double discrepancy = 0.0;               ///< spread of the four endpoint choices
  std::optional<Event> perpendicular;     ///< set for strong causal pairs
};

/// Time between causal events: 0 for lightlike or identical, positive for strong
/// causal. Separate events raise CausalClassError.
TimeEvaluation evaluate_time(const MoebiusStructure& m, const Event& a, const Event& b,
                             const Tolerances& tol = {});

double time_between(const MoebiusStructure& m, const Event& a, const Event& b, const Tolerances& tol = {});

/// A timelike line h_e with a chosen future side.
struct OrientedLine {
  Event e;
  bool future_ccw = true;   ///< future arc runs ccw from e.first() to e.second()

  Arc future() const { return future_ccw ? Arc(e.first(), e.second()) : Arc(e.second(), e.first()); }
  Arc past() const { return future().complement(); }
};

/// +1 when a lies inside the closed future arc (and is not the line itself), -1 for
/// the past arc, 0 otherwise.
int side_of(const OrientedLine& line, const Event& a, double eps = Tolerances{}.point);

enum class Order { Less, Equal, Greater, Incomparable };

const char* to_string(Order o);

/// Partial order on events lying on one side of e. Events inside the past arc
/// come before events inside the future arc; within the future, nested events
/// are later; within the past, nested events are earlier.
Order order_compare(const OrientedLine& line, const Event& a, const Event& b,
                    double eps = Tolerances{}.point);

} // namespace mds
