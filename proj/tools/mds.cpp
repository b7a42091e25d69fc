// mds: run one sampled check of a Moebius structure and write a JSON or CSV report.
//
// Exit status: 0 when the check passes, 1 when it finds violations, 2 on a
// configuration or input error.

#include "mds/errors.hpp"
#include "mds/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string check_list() {
  std::string s;
  for (const char* c : mds::kCheckNames) s += (s.empty() ? "" : " | ") + std::string(c);
  return s;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampled checks of monotone Moebius structures on the circle and their timed spaces"};
  app.set_config("--config", "", "Flat key=value file; command-line flags override its values");

  mds::ExperimentConfig cfg;
  std::size_t samples = 0;
  std::string out, format = "json";
  bool no_wall_time = false;

  app.add_option("check", cfg.check, check_list());
  app.add_option("--structure", cfg.structure,
                 "canonical | snowflake:ALPHA | ellipse:A,B | perturbed:ETA | tabulated:PATH")
      ->capture_default_str();
  auto* samples_opt = app.add_option("--samples", samples, "Number of samples (per-check default when omitted)");
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads; results do not depend on it")->capture_default_str();
  app.add_option("--out", out, "Report path; stdout when omitted or '-'");
  app.add_option("--format", format, "json | csv")->capture_default_str();
  app.add_flag("--no-wall-time", no_wall_time, "Leave wall_time_s out of the JSON report");
  app.add_option("--tol-point", cfg.tol.point, "Point coincidence tolerance")->capture_default_str();
  app.add_option("--tol-min-gap", cfg.tol.min_gap, "Minimum gap of sampled configurations")->capture_default_str();
  app.add_option("--tol-rel", cfg.tol.relative, "Relative margin and residual threshold")->capture_default_str();
  app.add_option("--tol-root", cfg.tol.root, "Root-finding residual target")->capture_default_str();
  app.add_option("--tol-root-arg", cfg.tol.root_arg, "Root-finding argument tolerance")->capture_default_str();
  app.add_option("--max-iterations", cfg.tol.max_iterations, "Iteration cap of the solvers")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  if (samples_opt->count() > 0) cfg.samples = samples;

  try {
    const mds::ReportFormat fmt = mds::parse_format(format);
    const mds::Report r = mds::run_experiment(cfg);
    mds::emit_report(r, fmt, out, !no_wall_time);
    std::cerr << r.check << " on " << r.structure << ": " << (r.passed() ? "PASS" : "FAIL") << " (tested "
              << r.tested << ", skipped " << r.skipped << ", violations " << r.violations << ")";
    if (!r.note.empty()) std::cerr << "; " << r.note;
    std::cerr << "\n";
    return r.passed() ? 0 : kExitFail;
  } catch (const mds::ConfigError& e) {
    std::cerr << "mds: configuration error: " << e.what() << "\n";
  } catch (const mds::IngestionError& e) {
    std::cerr << "mds: input error: " << e.what() << "\n";
  }
  return kExitConfig;
}
