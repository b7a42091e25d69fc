#include "mds/moebius.hpp"

#include "mds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mds {

bool in_l4(const CrossRatioTriple& v, double tol) {
  return v.allFinite() && std::abs(v.sum()) < tol;
}

void require_l4(const CrossRatioTriple& v, double tol) {
  if (!in_l4(v, tol)) {
    std::ostringstream os;
    os << "triple (" << v(0) << ", " << v(1) << ", " << v(2) << ") has sum " << v.sum();
    throw InvariantViolation(os.str());
  }
}

CrossRatioTriple signed_permutation_action(const Permutation4& pi, const CrossRatioTriple& v) {
  require_l4(v);
  return pi.cross_ratio_action() * v;
}

std::size_t DistanceGrid::index_of(CirclePoint p, double eps) const {
  auto it = std::lower_bound(angles.begin(), angles.end(), p.theta());
  // candidates: the neighbours of the insertion point, plus wrap-around
  std::array<std::size_t, 4> cand{};
  std::size_t n = 0;
  const auto pos = static_cast<std::size_t>(it - angles.begin());
  if (pos < angles.size()) cand[n++] = pos;
  if (pos > 0) cand[n++] = pos - 1;
  if (!angles.empty()) {
    cand[n++] = 0;
    cand[n++] = angles.size() - 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (same_point(p, CirclePoint(angles[cand[k]]), eps)) {
      return cand[k];
    }
  }
  std::ostringstream os;
  os << "angle " << p.theta() << " is not a grid point";
  throw DomainError(os.str());
}

MoebiusStructure::MoebiusStructure(Family family, std::string descriptor, Distance distance)
    : family_(family), descriptor_(std::move(descriptor)), distance_(std::move(distance)) {}

MoebiusStructure MoebiusStructure::canonical() {
  return MoebiusStructure(Family::Canonical, "canonical", [](CirclePoint x, CirclePoint y) {
    return 2.0 * std::abs(std::sin(0.5 * (x.theta() - y.theta())));
  });
}

MoebiusStructure MoebiusStructure::snowflake(const MoebiusStructure& base, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("snowflake exponent must be positive");
  }
  std::ostringstream os;
  os << "snowflake:" << alpha;
  if (base.family() != Family::Canonical) {
    os << "(" << base.descriptor() << ")";
  }
  auto d = base.distance_;
  return MoebiusStructure(Family::Snowflake, os.str(),
                          [d, alpha](CirclePoint x, CirclePoint y) { return std::pow(d(x, y), alpha); });
}

MoebiusStructure MoebiusStructure::ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("ellipse semi-axes must be positive");
  }
  std::ostringstream os;
  os << "ellipse:" << a << "," << b;
  return MoebiusStructure(Family::Ellipse, os.str(), [a, b](CirclePoint x, CirclePoint y) {
    return std::hypot(a * (std::cos(x.theta()) - std::cos(y.theta())),
                      b * (std::sin(x.theta()) - std::sin(y.theta())));
  });
}

MoebiusStructure MoebiusStructure::perturbed(double eta) {
  if (!(std::abs(eta) < 1.0)) {
    throw ConfigError("perturbation amplitude must satisfy |eta| < 1");
  }
  std::ostringstream os;
  os << "perturbed:" << eta;
  return MoebiusStructure(Family::Perturbed, os.str(), [eta](CirclePoint x, CirclePoint y) {
    const double d0 = 2.0 * std::abs(std::sin(0.5 * (x.theta() - y.theta())));
    return d0 * (1.0 + eta * std::sin(x.theta()) * std::sin(y.theta()));
  });
}

MoebiusStructure MoebiusStructure::rescaled(const MoebiusStructure& base,
                                            std::function<double(CirclePoint)> lambda,
                                            std::string descriptor) {
  auto d = base.distance_;
  MoebiusStructure out(Family::Rescaled, std::move(descriptor),
                       [d, lambda](CirclePoint x, CirclePoint y) { return lambda(x) * lambda(y) * d(x, y); });
  out.grid_ = base.grid_;
  return out;
}

MoebiusStructure MoebiusStructure::tabulated(DistanceGrid grid, double eps) {
  auto g = std::make_shared<const DistanceGrid>(std::move(grid));
  std::ostringstream os;
  os << "tabulated:" << g->angles.size();
  MoebiusStructure out(Family::Tabulated, os.str(), [g, eps](CirclePoint x, CirclePoint y) {
    return g->distances(static_cast<Eigen::Index>(g->index_of(x, eps)),
                        static_cast<Eigen::Index>(g->index_of(y, eps)));
  });
  out.grid_ = std::move(g);
  return out;
}

double MoebiusStructure::distance(CirclePoint x, CirclePoint y) const {
  const double d = distance_(x, y);
  if (!std::isfinite(d) || d < 0.0) {
    std::ostringstream os;
    os << descriptor_ << ": invalid distance " << d << " between " << x.theta() << " and " << y.theta();
    throw EvaluationError(os.str());
  }
  return d;
}

namespace {

double positive_log(const MoebiusStructure& m, CirclePoint x, CirclePoint y) {
  const double d = m.distance(x, y);
  if (d <= 0.0) {
    std::ostringstream os;
    os << m.descriptor() << ": zero distance between distinct points " << x.theta() << " and " << y.theta();
    throw EvaluationError(os.str());
  }
  return std::log(d);
}

} // namespace

double MoebiusStructure::log_pair_product(CirclePoint x, CirclePoint y, CirclePoint z, CirclePoint u) const {
  return positive_log(*this, x, y) + positive_log(*this, z, u);
}

CrossRatioTriple cross_ratio_triple(const MoebiusStructure& m, const Tuple4& q, const Tolerances& tol) {
  require_nondegenerate(q, tol.point);
  const double l1 = m.log_pair_product(q[0], q[1], q[2], q[3]);
  const double l2 = m.log_pair_product(q[0], q[2], q[1], q[3]);
  const double l3 = m.log_pair_product(q[0], q[3], q[1], q[2]);
  const double a = l2 - l3;
  const double b = l3 - l1;
  return CrossRatioTriple(a, b, -a - b);
}

double cr1(const MoebiusStructure& m, const Tuple4& q) {
  return std::exp(m.log_pair_product(q[0], q[2], q[1], q[3]) - m.log_pair_product(q[0], q[3], q[1], q[2]));
}

double cr2(const MoebiusStructure& m, const Tuple4& q) {
  return std::exp(m.log_pair_product(q[0], q[3], q[1], q[2]) - m.log_pair_product(q[0], q[1], q[2], q[3]));
}

double cr3(const MoebiusStructure& m, const Tuple4& q) {
  return std::exp(m.log_pair_product(q[0], q[1], q[2], q[3]) - m.log_pair_product(q[1], q[3], q[0], q[2]));
}

double metric_inversion(const MoebiusStructure& m, CirclePoint omega, CirclePoint x, CirclePoint y) {
  const Tolerances tol;
  const std::array<CirclePoint, 3> pts{omega, x, y};
  require_nondegenerate(pts, tol.point);
  return m.distance(x, y) / (m.distance(x, omega) * m.distance(y, omega));
}

double monotonicity_ratio(const MoebiusStructure& m, CirclePoint x, CirclePoint y, CirclePoint z,
                          CirclePoint u) {
  const double lxy = m.log_pair_product(x, y, z, u);
  const double lxz = m.log_pair_product(x, z, y, u);
  const double lxu = m.log_pair_product(x, u, y, z);
  return std::exp(lxy - std::max(lxz, lxu));
}

SampleOutcome monotonicity_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                                 const Tolerances& tol) {
  SampleOutcome out;
  SampleRng rng(seed, index);
  const auto p = draw_sorted_tuple<4>(rng, tol.min_gap, out.rejected);
  if (!p) {
    return out;
  }
  const CirclePoint x = (*p)[0], z = (*p)[1], y = (*p)[2], u = (*p)[3];
  out.tested = true;
  out.value = monotonicity_ratio(m, x, y, z, u);
  out.violation = !(out.value > 1.0 + tol.relative);
  out.witness = {x.theta(), y.theta(), z.theta(), u.theta()};
  return out;
}

CheckSummary check_monotonicity(const MoebiusStructure& m, const SamplerConfig& cfg) {
  const auto outcomes = run_serial(cfg, [&](std::uint64_t seed, std::uint64_t i) {
    return monotonicity_trial(m, seed, i, cfg.tol);
  });
  return summarize(outcomes);
}

std::vector<SampleOutcome> grid_monotonicity_outcomes(const MoebiusStructure& m, const Tolerances& tol) {
  const DistanceGrid* g = m.grid();
  if (g == nullptr) {
    throw ConfigError("grid monotonicity needs a tabulated structure");
  }
  std::vector<SampleOutcome> outcomes;
  const std::size_t n = g->angles.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          const CirclePoint x(g->angles[i]), z(g->angles[j]), y(g->angles[k]), u(g->angles[l]);
          SampleOutcome o;
          o.tested = true;
          o.value = monotonicity_ratio(m, x, y, z, u);
          o.violation = !(o.value > 1.0 + tol.relative);
          o.witness = {x.theta(), y.theta(), z.theta(), u.theta()};
          outcomes.push_back(std::move(o));
        }
  return outcomes;
}

CheckSummary check_grid_monotonicity(const MoebiusStructure& m, const Tolerances& tol) {
  return summarize(grid_monotonicity_outcomes(m, tol));
}

} // namespace mds
