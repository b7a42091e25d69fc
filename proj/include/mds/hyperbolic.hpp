#pragma once

#include "mds/circle.hpp"
#include "mds/sampling.hpp"
#include "mds/time_conditions.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cstdint>

namespace mds {

/// Point of the upper half-plane; DomainError unless im > 0.
class UhpPoint {
public:
  UhpPoint(double re, double im);

  double re() const { return re_; }
  double im() const { return im_; }

private:
  double re_;
  double im_;
};

/// Point of the extended real line, with an explicit marker for infinity.
struct BoundaryPoint {
  double value = 0.0;
  bool infinite = false;

  static BoundaryPoint at(double v) { return {v, false}; }
  static BoundaryPoint infinity() { return {0.0, true}; }
};

/// Chart value tan(theta / 2); ChartSingularity at theta = pi.
double chart_value(CirclePoint p);

/// Boundary point of p, infinite at theta = pi (within eps).
BoundaryPoint boundary_point(CirclePoint p, double eps = Tolerances{}.point);

/// Geodesic with two distinct boundary endpoints.
class UhpGeodesic {
public:
  UhpGeodesic(BoundaryPoint p, BoundaryPoint q);

  BoundaryPoint p() const { return p_; }
  BoundaryPoint q() const { return q_; }

private:
  BoundaryPoint p_;
  BoundaryPoint q_;
};

double uhp_distance(const UhpPoint& p, const UhpPoint& q);

/// Whether the endpoint pairs of g and h separate each other on the extended line.
bool geodesics_cross(const UhpGeodesic& g, const UhpGeodesic& h);

/// Intersection point; DomainError when the geodesics do not cross.
UhpPoint geodesic_intersection(const UhpGeodesic& g, const UhpGeodesic& h);

/// Distance between two fixed-point-free involutions s1, s2 acting linear-fractionally:
/// x, x' are the fixed points of s1 s2, y and y' lie on the spheres between x, x'
/// invariant under s1 and s2, and the result is |ln <x, y, y', x'>| in the canonical structure.
double involution_distance(const Eigen::Matrix2d& s1, const Eigen::Matrix2d& s2);

/// Distance between s(x) = -1/x and s'(x) = -e^{4t}/x.
double involution_distance(double t);

struct H2Check {
  double f = 0.0;          ///< F_ab(d) for the canonical structure
  double h2 = 0.0;         ///< distance between oo' and omega omega' along xx'
  double residual = 0.0;
};

/// F_ab(d) against the H^2 distance between oo' cap xx' and omega omega' cap xx'. The
/// configuration is rotated so that all six points stay away from the chart's infinity.
H2Check functional_equals_h2_check(const StrongPair& p, const DabPoint& d);

/// One random configuration of the check above; violation when residual >= threshold.
SampleOutcome h2_trial(std::uint64_t seed, std::uint64_t index, double threshold = 1e-9,
                       const Tolerances& tol = {});

} // namespace mds
