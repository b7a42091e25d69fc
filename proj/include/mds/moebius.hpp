#pragma once

#include "mds/circle.hpp"
#include "mds/sampling.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mds {

/// (a, b, c) = (ln cr1, ln cr2, ln cr3); always satisfies a + b + c = 0.
using CrossRatioTriple = Eigen::Vector3d;

/// Tolerance for the a + b + c = 0 constraint.
inline constexpr double kTripleSumTolerance = 1e-12;

bool in_l4(const CrossRatioTriple& v, double tol = kTripleSumTolerance);

/// Throws InvariantViolation when v is not in L4.
void require_l4(const CrossRatioTriple& v, double tol = kTripleSumTolerance);

/// M(pi q) computed from M(q).
CrossRatioTriple signed_permutation_action(const Permutation4& pi, const CrossRatioTriple& v);

/// Distance table on a finite set of angles.
struct DistanceGrid {
  std::vector<double> angles;      ///< ascending, in [0, 2pi)
  Eigen::MatrixXd distances;       ///< symmetric, zero diagonal, positive elsewhere

  /// Index of the grid angle within `eps` of p; throws DomainError otherwise.
  std::size_t index_of(CirclePoint p, double eps) const;
};

enum class Family { Canonical, Snowflake, Ellipse, Perturbed, Tabulated, Rescaled };

/// A semi-metric on the circle, representing its Moebius structure.
///
/// Only the cross-ratio triples are meaningful; the distance values themselves
/// depend on the chosen representative.
class MoebiusStructure {
public:
  using Distance = std::function<double(CirclePoint, CirclePoint)>;

  MoebiusStructure(Family family, std::string descriptor, Distance distance);

  static MoebiusStructure canonical();
  /// d^alpha for alpha > 0; cross-ratio triples scale by alpha, so monotonicity is inherited.
  static MoebiusStructure snowflake(const MoebiusStructure& base, double alpha);
  /// Euclidean distance of the embedding theta -> (a cos theta, b sin theta).
  static MoebiusStructure ellipse(double a, double b);
  /// Chordal distance times (1 + eta sin(theta_x) sin(theta_y)); needs |eta| < 1.
  static MoebiusStructure perturbed(double eta);
  /// Conformal rescaling lambda(x) lambda(y) d(x, y); the structure is unchanged.
  static MoebiusStructure rescaled(const MoebiusStructure& base, std::function<double(CirclePoint)> lambda,
                                   std::string descriptor);
  static MoebiusStructure tabulated(DistanceGrid grid, double eps = Tolerances{}.point);

  Family family() const { return family_; }
  const std::string& descriptor() const { return descriptor_; }
  bool is_tabulated() const { return grid_ != nullptr; }
  const DistanceGrid* grid() const { return grid_.get(); }

  /// Distance between two points; throws EvaluationError on non-finite values.
  double distance(CirclePoint x, CirclePoint y) const;
  double operator()(CirclePoint x, CirclePoint y) const { return distance(x, y); }

  /// ln(|xy| |zu|).
  double log_pair_product(CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint u) const;

private:
  Family family_;
  std::string descriptor_;
  Distance distance_;
  std::shared_ptr<const DistanceGrid> grid_;
};

/// M(q) for a nondegenerate 4-tuple.
CrossRatioTriple cross_ratio_triple(const MoebiusStructure& m, const Tuple4& q,
                                    const Tolerances& tol = {});

/// The three cross ratios themselves.
double cr1(const MoebiusStructure& m, const Tuple4& q);
double cr2(const MoebiusStructure& m, const Tuple4& q);
double cr3(const MoebiusStructure& m, const Tuple4& q);

/// Metric inversion d_omega(x, y) = d(x, y) / (d(x, omega) d(y, omega)).
double metric_inversion(const MoebiusStructure& m, CirclePoint omega, CirclePoint x, CirclePoint y);

/// Monotonicity test for one separating 4-tuple ordered as (x, z, y, u) around the
/// circle; returns |xy||zu| / max(|xz||yu|, |xu||yz|), which must exceed 1.
double monotonicity_ratio(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z,
                          CirclePoint u);

/// One monotonicity sample: four sorted random points p1 < p2 < p3 < p4 give the
/// separating tuple (x, y, z, u) = (p1, p3, p2, p4). Violation when the ratio is
/// not above 1 + tol.relative. Witness holds (x, y, z, u).
SampleOutcome monotonicity_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                                 const Tolerances& tol);

CheckSummary check_monotonicity(const MoebiusStructure& m, const SamplerConfig& cfg);

/// One outcome per 4-subset of the grid, in lexicographic index order.
std::vector<SampleOutcome> grid_monotonicity_outcomes(const MoebiusStructure& m, const Tolerances& tol = {});

/// Exhaustive monotonicity check over all separating 4-tuples of a grid.
CheckSummary check_grid_monotonicity(const MoebiusStructure& m, const Tolerances& tol = {});

} // namespace mds
