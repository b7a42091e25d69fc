#pragma once

#include "mds/causal.hpp"
#include "mds/moebius.hpp"
#include "mds/sampling.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <limits>
#include <vector>

namespace mds {

/// A timed causal space on the space of events of the circle.
class TimedSpaceOracle {
public:
  virtual ~TimedSpaceOracle() = default;

  /// The causal relation is combinatorial on the circle; oracles rarely override it.
  virtual CausalClass causal_class(const Event& a, const Event& b) const;
  /// Time between causal events; CausalClassError for separate events.
  virtual double time(const Event& a, const Event& b) const = 0;
  /// The unique event through x on the timelike line h_e.
  virtual Event timelike_point(const Event& e, CirclePoint x) const = 0;
  /// Time between p_e and q_e on h_e.
  virtual double line_time(const Event& e, CirclePoint p, CirclePoint q) const;
};

/// How a structure oracle evaluates times between events on a known line.
enum class LineTimeMode {
  Perpendicular,   ///< project both points, then solve for the common perpendicular
  Direct           ///< closed form along the known line (works on grids)
};

/// The timed space induced by a monotone Moebius structure.
class StructureOracle : public TimedSpaceOracle {
public:
  explicit StructureOracle(MoebiusStructure m, Tolerances tol = {},
                           LineTimeMode mode = LineTimeMode::Perpendicular);

  const MoebiusStructure& structure() const { return m_; }
  const Tolerances& tolerances() const { return tol_; }
  LineTimeMode mode() const { return mode_; }

  double time(const Event& a, const Event& b) const override;
  Event timelike_point(const Event& e, CirclePoint x) const override;
  double line_time(const Event& e, CirclePoint p, CirclePoint q) const override;

private:
  MoebiusStructure m_;
  Tolerances tol_;
  LineTimeMode mode_;
};

/// Checks monotonicity and returns the induced timed space. Tabulated structures
/// are checked exhaustively and answered in Direct mode. Throws StructureViolation
/// with a witness when M is not monotone.
StructureOracle forward_map(const MoebiusStructure& m, const SamplerConfig& check = {2000, 7, {}});

/// Wraps an oracle and adds `delta` to every time measured along one timelike line.
class CorruptedLineOracle : public TimedSpaceOracle {
public:
  CorruptedLineOracle(const TimedSpaceOracle& base, Event line, double delta);

  double time(const Event& a, const Event& b) const override;
  Event timelike_point(const Event& e, CirclePoint x) const override { return base_.timelike_point(e, x); }
  double line_time(const Event& e, CirclePoint p, CirclePoint q) const override;

private:
  bool on_line(const Event& a) const;

  const TimedSpaceOracle& base_;
  Event line_;
  double delta_;
};

/// Labels of a cyclically ordered 4-tuple c0 c1 c2 c3: t[k] is the time between the
/// projections of c_{k+2}, c_{k+3} on the line (c_k, c_{k+1}).
using TimeLabels = std::array<double, 4>;

TimeLabels time_labels(const TimedSpaceOracle& t, const Tuple4& cyclic);

/// The sub-Moebius structure of a timed space, evaluated at q. The opposite labels
/// must agree to `consistency` (relative); pass infinity to skip the check.
CrossRatioTriple submoebius_from_timed(const TimedSpaceOracle& t, const Tuple4& q, double consistency = 1e-9,
                                       const Tolerances& tol = {});

using SubMoebiusMap = std::function<CrossRatioTriple(const Tuple4&)>;

SubMoebiusMap submoebius_map(const TimedSpaceOracle& t, double consistency = 1e-9);
SubMoebiusMap structure_map(const MoebiusStructure& m);

/// Row i is M(q with entry i removed).
using Codifferential = Eigen::Matrix<double, 5, 3>;

Codifferential codifferential(const SubMoebiusMap& m, const Tuple5& q);

struct ABResiduals {
  double a;   ///< b1 + b4 - b3 + a1
  double b;   ///< b2 + a4 - b1
};

ABResiduals codifferential_residuals(const Codifferential& d);
ABResiduals codifferential_residuals(const SubMoebiusMap& m, const Tuple5& q);

/// Largest violation of the relations among the labels t^i of a cyclic 5-tuple:
/// opposite labels of each 4-subtuple agree, and the label on (i+2, i+3) in the
/// tuple without i is the sum of those in the tuples without i+1 and i+4.
double label_relation_residual(const TimedSpaceOracle& t, const Tuple5& cyclic);

/// max |M_hat(T)(q) - M(q)| for the oracle T of M.
double roundtrip_residual(const MoebiusStructure& m, const TimedSpaceOracle& t, const Tuple4& q,
                          const Tolerances& tol = {});

/// Linear-fractional map s -> (a s + b) / (c s + d) on the chart s = tan(theta / 2).
CirclePoint apply_linear_fractional(const Eigen::Matrix2d& g, CirclePoint p);

struct Psl2Report {
  double max_triple_deviation = 0.0;
  double max_harmonic_residual = 0.0;
  double max_time_deviation = 0.0;
  std::size_t samples = 0;
};

/// Checks that M is invariant under g: triples, harmonic pairs, and times of
/// strong causal pairs are preserved. Throws ConfigError when det g = 0.
Psl2Report psl2_pullback_check(const Eigen::Matrix2d& g, const MoebiusStructure& m, const SamplerConfig& cfg);

/// [x, y, z, u] = |xy||zu| / (|xz||yu|).
double bracket(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint u);

struct PentagonResult {
  std::array<CirclePoint, 10> x;       ///< x[0] is x_1
  double residual = 0.0;               ///< |[1,3,4,2] - 1|
  double chain_deviation = 0.0;        ///< spread of the bracket chain
  double closure_residual = 0.0;       ///< harmonicity residuals after shooting
  double perpendicular_mismatch = 0.0; ///< angle between shot (x9, x10) and the direct perpendicular
  int iterations = 0;
};

/// Builds ten points whose lines (x_i, x_{i+1}), i odd, meet consecutively at right
/// angles, by 2-D damped Newton shooting on (x9, x10), and evaluates [1,3,4,2].
/// Throws ConvergenceError with the last residuals when shooting fails.
PentagonResult pentagon_identity(const MoebiusStructure& m, std::uint64_t seed, const Tolerances& tol = {});

/// Axioms h1..h6 and t1..t6 on one random configuration of an oracle built from a
/// structure. metrics[k] is the residual of axiom k (h1..h6 then t1..t6) divided by
/// its threshold; the sample is a violation when any ratio exceeds 1.
SampleOutcome axioms_trial(const StructureOracle& t, std::uint64_t seed, std::uint64_t index,
                           double time_tol = 1e-9, double angle_tol = 1e-8);

inline constexpr std::array<const char*, 12> kAxiomNames{"h1", "h2", "h3", "h4", "h5", "h6",
                                                         "t1", "t2", "t3", "t4", "t5", "t6"};

/// Round trip on one random 4-tuple; value is the max deviation.
SampleOutcome roundtrip_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                              std::uint64_t index, double threshold = 1e-9, const Tolerances& tol = {});

/// Conditions (A)/(B) on one random 5-tuple of the sub-Moebius map of t.
SampleOutcome ab_trial(const TimedSpaceOracle& t, std::uint64_t seed, std::uint64_t index,
                       double threshold = 1e-9, const Tolerances& tol = {});

/// Grid variants for tabulated structures: random subsets of grid points.
/// Untested when the grid has too few points.
SampleOutcome grid_roundtrip_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                                   std::uint64_t index, double threshold = 1e-9);
SampleOutcome grid_ab_trial(const MoebiusStructure& m, const TimedSpaceOracle& t, std::uint64_t seed,
                            std::uint64_t index, double threshold = 1e-9);

} // namespace mds
