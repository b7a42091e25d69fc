#include "mds/harness.hpp"

#include "mds/duality.hpp"
#include "mds/errors.hpp"
#include "mds/hyperbolic.hpp"
#include "mds/time_conditions.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace mds {

namespace {

constexpr double kPentagonThreshold = 1e-6;
constexpr double kVpThreshold = 1e-6;
/// Angle tolerance of the h/t axiom assertions.
constexpr double kAxiomAngleTolerance = 1e-8;
/// Samples of the monotonicity gate run before checks that need a monotone structure.
constexpr std::size_t kGateSamples = 2000;
constexpr std::uint64_t kGateSeed = 7;

double parse_double(std::string_view text, const std::string& spec) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("structure '" + spec + "': '" + std::string(text) + "' is not a number");
  }
  return v;
}

using Trial = std::function<SampleOutcome(std::uint64_t index)>;

struct Plan {
  std::string value_name;
  std::vector<std::string> metric_names;
  std::size_t samples = 0;
  Trial trial;
};

/// Runs every index exactly once; outcomes are stored by index, so the result is
/// independent of the thread count. Exceptions are recorded as violations.
std::vector<SampleOutcome> run_indexed(std::size_t samples, unsigned threads, const Trial& trial) {
  std::vector<SampleOutcome> out(samples);
  const auto one = [&](std::size_t i) {
    try {
      out[i] = trial(static_cast<std::uint64_t>(i));
    } catch (const std::exception& e) {
      SampleOutcome o;
      o.tested = true;
      o.violation = true;
      o.value = std::numeric_limits<double>::quiet_NaN();
      o.error = e.what();
      out[i] = std::move(o);
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, samples));
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples; ++i) one(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < samples; i = next.fetch_add(1)) one(i);
    });
  }
  return out;
}

void aggregate(Report& r, const std::vector<SampleOutcome>& outcomes) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  r.samples = outcomes.size();
  r.min_value = r.max_value = nan;
  for (auto& m : r.metrics) m.min = m.max = nan;
  const auto widen = [](double& lo, double& hi, double v) {
    if (!std::isfinite(v)) return;
    lo = std::isnan(lo) ? v : std::min(lo, v);
    hi = std::isnan(hi) ? v : std::max(hi, v);
  };
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SampleOutcome& o = outcomes[i];
    r.skipped += static_cast<std::size_t>(o.rejected);
    if (!o.tested) {
      ++r.skipped;
      continue;
    }
    ++r.tested;
    widen(r.min_value, r.max_value, o.value);
    if (o.metrics.size() == r.metrics.size()) {
      for (std::size_t k = 0; k < o.metrics.size(); ++k) widen(r.metrics[k].min, r.metrics[k].max, o.metrics[k]);
    }
    if (!o.error.empty()) ++r.errors;
    if (o.violation) {
      ++r.violations;
      if (r.witnesses.size() < kMaxWitnesses) r.witnesses.push_back({i, o.value, o.witness, o.error});
    }
    r.rows.push_back({i, o.violation, o.value, o.metrics, o.witness});
  }
  r.empty_domain = r.tested == 0;
}

SampleOutcome pentagon_trial(const MoebiusStructure& m, std::uint64_t seed, std::uint64_t index,
                             const Tolerances& tol) {
  SampleOutcome out;
  out.tested = true;
  const PentagonResult p = pentagon_identity(m, seed + index, tol);
  out.value = p.residual;
  out.violation = !(p.residual < kPentagonThreshold);
  out.witness = angles_of(p.x);
  out.metrics = {p.chain_deviation, p.closure_residual, p.perpendicular_mismatch, static_cast<double>(p.iterations)};
  return out;
}

/// Smallest grid on which the check has anything to sample.
std::size_t grid_points_needed(std::string_view check) { return check == "conditions-AB" ? 5 : 4; }

} // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown report format '" + std::string(name) + "' (json or csv)");
}

std::size_t default_samples(std::string_view check) {
  if (check == "pentagon") return 1;
  if (check == "vp") return 1000;
  return 10000;
}

void ExperimentConfig::validate() const {
  if (std::find(kCheckNames.begin(), kCheckNames.end(), check) == kCheckNames.end()) {
    throw ConfigError("unknown check '" + check + "'");
  }
  if (samples && *samples == 0) throw ConfigError("sample count must be at least 1");
  if (threads == 0) throw ConfigError("thread count must be at least 1");
  const double values[] = {tol.point, tol.min_gap, tol.relative, tol.root, tol.root_arg};
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tolerances must be positive and finite");
  }
  if (tol.max_iterations <= 0) throw ConfigError("max_iterations must be positive");
}

std::size_t ExperimentConfig::sample_count() const { return samples.value_or(default_samples(check)); }

MoebiusStructure parse_structure(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  const bool has_args = colon != std::string::npos;
  if (family == "canonical" && !has_args) return MoebiusStructure::canonical();
  if (family == "snowflake" && has_args) {
    return MoebiusStructure::snowflake(MoebiusStructure::canonical(), parse_double(args, spec));
  }
  if (family == "perturbed" && has_args) return MoebiusStructure::perturbed(parse_double(args, spec));
  if (family == "ellipse" && has_args) {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("structure '" + spec + "': expected ellipse:A,B");
    return MoebiusStructure::ellipse(parse_double(std::string_view(args).substr(0, comma), spec),
                                     parse_double(std::string_view(args).substr(comma + 1), spec));
  }
  if (family == "tabulated" && has_args && !args.empty()) return load_tabulated_semimetric(args);
  throw ConfigError("unknown structure '" + spec +
                    "' (canonical, snowflake:ALPHA, ellipse:A,B, perturbed:ETA, tabulated:PATH)");
}

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const MoebiusStructure m = parse_structure(config.structure);
  const std::string& check = config.check;
  const Tolerances& tol = config.tol;
  const std::uint64_t seed = config.seed;

  Report r;
  r.check = check;
  r.structure = config.structure;
  r.seed = seed;
  r.tol = tol;

  const auto finish = [&](Plan plan) {
    r.value_name = plan.value_name;
    for (auto& name : plan.metric_names) r.metrics.push_back({std::move(name), 0.0, 0.0});
    aggregate(r, run_indexed(plan.samples, config.threads, plan.trial));
    if (r.empty_domain && r.note.empty()) r.note = "no sample could be tested";
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  };

  const DistanceGrid* grid = m.grid();
  if (grid != nullptr) {
    if (check != "monotone" && check != "duality-roundtrip" && check != "conditions-AB") {
      throw ConfigError("check '" + check +
                        "' needs off-grid points; tabulated structures support monotone, duality-roundtrip and "
                        "conditions-AB");
    }
    if (grid->angles.size() < grid_points_needed(check)) {
      std::ostringstream os;
      os << "insufficient grid: " << grid->angles.size() << " points, " << check << " needs "
         << grid_points_needed(check);
      r.note = os.str();
      return finish({check == "monotone" ? "ratio" : "max_deviation", {}, 0, {}});
    }
  }

  if (check == "monotone") {
    if (grid != nullptr) {
      // exhaustive over the grid: outcome i is the i-th 4-subset in lexicographic order
      const auto outcomes = grid_monotonicity_outcomes(m, tol);
      return finish({"ratio", {}, outcomes.size(), [&outcomes](std::uint64_t i) { return outcomes[i]; }});
    }
    return finish({"ratio", {}, config.sample_count(),
                   [&](std::uint64_t i) { return monotonicity_trial(m, seed, i, tol); }});
  }
  if (check == "h2-oracle" && m.family() != Family::Canonical) {
    throw ConfigError("h2-oracle compares against the hyperbolic plane and needs the canonical structure");
  }

  // every remaining check assumes a monotone structure
  std::optional<StructureOracle> oracle;
  try {
    oracle.emplace(forward_map(m, SamplerConfig{kGateSamples, kGateSeed, tol}));
  } catch (const StructureViolation& e) {
    r.violations = 1;
    r.note = e.what();
    r.value_name = "ratio";
    r.min_value = r.max_value = std::numeric_limits<double>::quiet_NaN();
    r.empty_domain = true;
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
  const StructureOracle& t = *oracle;
  const std::size_t n = config.sample_count();

  if (check == "axioms-ht") {
    std::vector<std::string> names(kAxiomNames.begin(), kAxiomNames.end());
    return finish({"max_ratio", names, n, [&](std::uint64_t i) {
                     return axioms_trial(t, seed, i, tol.relative, kAxiomAngleTolerance);
                   }});
  }
  if (check == "duality-roundtrip") {
    if (grid != nullptr) {
      return finish({"max_deviation", {}, n, [&](std::uint64_t i) {
                       return grid_roundtrip_trial(m, t, seed, i, tol.relative);
                     }});
    }
    return finish({"max_deviation", {}, n,
                   [&](std::uint64_t i) { return roundtrip_trial(m, t, seed, i, tol.relative, tol); }});
  }
  if (check == "conditions-AB") {
    const std::vector<std::string> names{"a_residual", "b_residual", "label_residual"};
    if (grid != nullptr) {
      return finish({"max_ab_residual", names, n,
                     [&](std::uint64_t i) { return grid_ab_trial(m, t, seed, i, tol.relative); }});
    }
    return finish({"max_ab_residual", names, n,
                   [&](std::uint64_t i) { return ab_trial(t, seed, i, tol.relative, tol); }});
  }
  if (check == "axiom-I") {
    return finish({"residual", {"delta", "harmonic_residual"}, n,
                   [&](std::uint64_t i) { return axiom_I_trial(m, seed, i, tol); }});
  }
  if (check == "axiom-C") {
    return finish({"residual", {"delta_o", "delta_o_prime", "delta_omega"}, n,
                   [&](std::uint64_t i) { return axiom_C_trial(m, seed, i, tol); }});
  }
  if (check == "ti") {
    return finish({"gap", {"collinear", "equality", "off_line_residual"}, n,
                   [&](std::uint64_t i) { return ti_trial(m, seed, i, tol.relative, tol); }});
  }
  if (check == "wti") {
    return finish({"margin", {"lightlike_with_c"}, n, [&](std::uint64_t i) { return wti_trial(m, seed, i, tol); }});
  }
  if (check == "lqi") {
    return finish({"f_minus_f0", {"f0"}, n, [&](std::uint64_t i) { return lqi_trial(m, seed, i, tol); }});
  }
  if (check == "vp") {
    return finish({"argmin_distance", {"f_min", "f_d0", "sweeps"}, n,
                   [&](std::uint64_t i) { return vp_trial(m, seed, i, kVpThreshold, tol); }});
  }
  if (check == "pentagon") {
    return finish({"residual", {"chain_deviation", "closure_residual", "perpendicular_mismatch", "iterations"}, n,
                   [&](std::uint64_t i) { return pentagon_trial(m, seed, i, tol); }});
  }
  if (check == "h2-oracle") {
    return finish({"residual", {"f", "h2"}, n, [&](std::uint64_t i) { return h2_trial(seed, i, tol.relative, tol); }});
  }
  // epsilon-nbhd
  return finish({"residual", {"member", "epsilon", "max_deviation"}, n,
                 [&](std::uint64_t i) { return epsilon_trial(m, seed, i, tol); }});
}

} // namespace mds
