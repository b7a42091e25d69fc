#pragma once

#include "mds/circle.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mds {

/// Mixes a 64-bit value; used to derive independent per-sample seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Random stream of one sample: seeded from (master seed, sample index) only, so
/// results do not depend on how samples are distributed over threads.
class SampleRng {
public:
  SampleRng(std::uint64_t master_seed, std::uint64_t index);

  double uniform(double lo, double hi);
  CirclePoint point();
  /// Uniform point strictly inside the arc, at least `margin` from both ends
  /// (or in the middle when the arc is too short).
  CirclePoint point_in(const Arc& arc, double margin);
  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

/// Draws N ccw-sorted points with pairwise gap >= min_gap; rejected draws are
/// counted in `rejected`. Returns nullopt after `attempts` failures.
template <std::size_t N>
std::optional<Tuple<N>> draw_sorted_tuple(SampleRng& rng, double min_gap, int& rejected, int attempts = 1000);

/// Outcome of a single sampled check.
struct SampleOutcome {
  bool tested = false;            ///< false when no valid configuration could be drawn
  int rejected = 0;               ///< number of degenerate draws discarded
  bool violation = false;
  double value = 0.0;             ///< check statistic (margin or residual)
  std::vector<double> witness;    ///< angles (or parameters) of the configuration
  std::vector<double> metrics;    ///< check-specific extra values
  std::string error;              ///< message of an exception raised by the trial
};

struct CheckSummary {
  std::size_t samples = 0;
  std::size_t tested = 0;
  std::size_t skipped = 0;        ///< rejected draws plus untested samples
  std::size_t violations = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  std::optional<std::size_t> first_violation;
  std::vector<double> first_witness;

  bool passed() const { return violations == 0; }
};

CheckSummary summarize(std::span<const SampleOutcome> outcomes);

struct SamplerConfig {
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  Tolerances tol{};
};

/// Runs trial(seed, i) for i in [0, samples) in order.
template <class Trial> std::vector<SampleOutcome> run_serial(const SamplerConfig& cfg, Trial&& trial) {
  std::vector<SampleOutcome> out(cfg.samples);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    out[i] = trial(cfg.seed, static_cast<std::uint64_t>(i));
  }
  return out;
}

std::vector<double> angles_of(std::span<const CirclePoint> points);

} // namespace mds
