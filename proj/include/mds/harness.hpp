#pragma once

#include "mds/circle.hpp"
#include "mds/moebius.hpp"
#include "mds/sampling.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mds {

inline constexpr std::array<const char*, 13> kCheckNames{
    "monotone", "axioms-ht", "axiom-I", "axiom-C", "duality-roundtrip", "conditions-AB", "ti",
    "wti",      "lqi",       "vp",      "pentagon", "h2-oracle",        "epsilon-nbhd"};

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(std::string_view name);

struct ExperimentConfig {
  std::string check;
  std::string structure = "canonical";
  std::optional<std::size_t> samples;   ///< per-check default when empty
  std::uint64_t seed = 1;
  Tolerances tol{};
  unsigned threads = 1;

  /// Throws ConfigError for an unknown check, non-positive tolerances or zero samples/threads.
  void validate() const;
  std::size_t sample_count() const;
};

/// 10000 samples, except pentagon (1 seed) and vp (1000 minimizations).
std::size_t default_samples(std::string_view check);

/// canonical | snowflake:ALPHA | ellipse:A,B | perturbed:ETA | tabulated:PATH.
/// Snowflakes are taken of the canonical structure. Throws ConfigError.
MoebiusStructure parse_structure(const std::string& spec);

/// Tabulated semi-metric: line 1 holds n, line 2 the n ascending angles in [0, 2pi),
/// then n rows of n distances. Blank lines and text after '#' are ignored.
/// IngestionError messages start with "line L:".
DistanceGrid parse_tabulated(std::istream& in);
MoebiusStructure load_tabulated_semimetric(const std::string& path);

struct MetricRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct Witness {
  std::size_t index = 0;
  double value = 0.0;
  std::vector<double> angles;
  std::string error;
};

/// One row per tested sample, kept for CSV output.
struct SampleRow {
  std::size_t index = 0;
  bool violation = false;
  double value = 0.0;
  std::vector<double> metrics;
  std::vector<double> witness;
};

struct Report {
  std::string check;
  std::string structure;
  std::uint64_t seed = 0;
  Tolerances tol{};
  std::size_t samples = 0;
  std::size_t tested = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  std::size_t errors = 0;        ///< trials that threw; each also counts as a violation
  bool empty_domain = false;     ///< nothing could be tested (for example an insufficient grid)
  std::string note;
  std::string value_name;
  double min_value = 0.0;
  double max_value = 0.0;
  std::vector<MetricRange> metrics;
  std::vector<Witness> witnesses;    ///< the first kMaxWitnesses violations by index
  std::vector<SampleRow> rows;
  double wall_time = 0.0;            ///< seconds

  bool passed() const { return violations == 0; }
};

inline constexpr std::size_t kMaxWitnesses = 10;

/// Runs the check. Samples are independent and merged by index, so the report does not
/// depend on the thread count. Config problems throw ConfigError or IngestionError; a
/// structure that fails the monotonicity gate yields a failed report.
Report run_experiment(const ExperimentConfig& config);

/// JSON with round-trip-safe doubles; non-finite values become null.
std::string report_json(const Report& r, bool include_wall_time = true);
/// Header plus one row per tested sample.
std::string report_csv(const Report& r);

/// Writes to `path`, or to stdout when path is empty or "-". ConfigError on I/O failure.
void emit_report(const Report& r, ReportFormat format, const std::string& path, bool include_wall_time = true);

} // namespace mds
