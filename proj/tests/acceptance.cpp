// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 when any criterion fails.

#include "mds/duality.hpp"
#include "mds/errors.hpp"
#include "mds/harness.hpp"
#include "mds/hyperbolic.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace mds;

/// Monotone families of the suite; ellipse(1, 1) is the canonical circle under another representative.
const std::vector<std::string> kMonotoneFamilies{"canonical", "snowflake:0.5", "snowflake:2", "snowflake:1.5",
                                                 "perturbed:0.1", "ellipse:1,1"};
constexpr std::size_t kSamples = 10000;
constexpr std::uint64_t kSeed = 42;

constexpr double kResidualTol = 1e-9;
constexpr double kRoundTripSeconds = 30.0;
constexpr double kCorruption = 0.1;
constexpr double kCorruptionFloor = 0.01;
constexpr double kDistanceTol = 1e-10;
constexpr double kPentagonTol = 1e-6;
/// Largest perturbation amplitude whose sampled tuples all lie in the canonical fine neighbourhood.
constexpr double kFineEta = 1e-10;

Report run(const std::string& check, const std::string& structure, std::size_t samples, unsigned threads = 1,
           std::uint64_t seed = kSeed) {
  ExperimentConfig c;
  c.check = check;
  c.structure = structure;
  c.samples = samples;
  c.seed = seed;
  c.threads = threads;
  return run_experiment(c);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::string summary(const std::string& structure, const Report& r) {
  return structure + " " + std::to_string(r.violations) + "/" + std::to_string(r.tested) + " max " +
         fmt(r.max_value);
}

int failures = 0;

void report(int n, bool pass, const std::string& name, std::string detail) {
  while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
  std::cout << "criterion " << n << ": " << (pass ? "PASS" : "FAIL") << "  " << name << "  [" << detail << "]"
            << std::endl;
  if (!pass) ++failures;
}

void criterion(int n, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += (detail.empty() ? "" : "; ") + std::string("exception: ") + e.what();
  }
  report(n, pass, name, detail);
}

const std::vector<std::string> kRoundTripStructures{"canonical", "snowflake:0.5", "snowflake:2"};

} // namespace

int main() {
  criterion(1, "duality round trip", [](std::string& d) {
    bool ok = true;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& s : kRoundTripStructures) {
      const Report r = run("duality-roundtrip", s, kSamples);
      ok = ok && r.passed() && r.tested >= kSamples * 99 / 100 && r.max_value < kResidualTol;
      d += summary(s, r) + "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d += "time " + fmt(secs) + " s";
    return ok && secs < kRoundTripSeconds;
  });

  criterion(2, "conditions (A)/(B) and fault injection", [](std::string& d) {
    const Report r = run("conditions-AB", "canonical", kSamples);
    d = summary("canonical", r);
    bool ok = r.passed() && r.max_value < kResidualTol;
    const StructureOracle t = forward_map(MoebiusStructure::canonical());
    double weakest = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < 100; ++i) {
      SampleRng rng(kSeed, i);
      int rejected = 0;
      const auto q = draw_sorted_tuple<5>(rng, 0.05, rejected);
      if (!q) continue;
      const CorruptedLineOracle bad(t, Event((*q)[0], (*q)[1]), kCorruption);
      const auto ab = codifferential_residuals(submoebius_map(bad, std::numeric_limits<double>::infinity()), *q);
      weakest = std::min(weakest, std::max(std::abs(ab.a), std::abs(ab.b)));
    }
    d += "; corrupted label +" + fmt(kCorruption) + " gives residual >= " + fmt(weakest);
    return ok && weakest > kCorruptionFloor;
  });

  criterion(3, "axioms h1-h6, t1-t6", [](std::string& d) {
    bool ok = true;
    for (const auto& s : kMonotoneFamilies) {
      const Report r = run("axioms-ht", s, kSamples);
      ok = ok && r.passed() && r.tested >= kSamples * 99 / 100;
      d += s + " " + std::to_string(r.violations) + "/" + std::to_string(r.tested) + "; ";
    }
    return ok;
  });

  criterion(4, "doubled speed and dist(i, e^{2t} i) = 2t", [](std::string& d) {
    bool ok = true;
    for (double t : {0.1, 1.0, 5.0}) {
      const double e1 = std::abs(involution_distance(t) - 2.0 * t);
      const double e2 = std::abs(uhp_distance(UhpPoint(0.0, 1.0), UhpPoint(0.0, std::exp(2.0 * t))) - 2.0 * t);
      ok = ok && e1 < kDistanceTol && e2 < kDistanceTol;
      d += "t=" + fmt(t) + " err " + fmt(e1) + ", " + fmt(e2) + "; ";
    }
    return ok;
  });

  criterion(5, "F_ab(d) equals the H^2 distance", [](std::string& d) {
    const Report r = run("h2-oracle", "canonical", 1000);
    d = summary("canonical", r);
    return r.passed() && r.tested >= 990 && r.max_value < kResidualTol;
  });

  criterion(6, "WTI", [](std::string& d) {
    bool ok = true;
    for (const auto& s : kMonotoneFamilies) {
      const Report r = run("wti", s, kSamples);
      ok = ok && r.passed() && r.tested >= kSamples * 99 / 100;
      d += s + " " + std::to_string(r.violations) + "/" + std::to_string(r.tested) + " min " + fmt(r.min_value) + "; ";
    }
    return ok;
  });

  criterion(7, "TI, (I), (C) on canonical", [](std::string& d) {
    const Report ti = run("ti", "canonical", kSamples);
    double ti_min = std::numeric_limits<double>::infinity();
    for (const auto& row : ti.rows) {
      if (row.metrics.at(0) == 0.0) ti_min = std::min(ti_min, row.value);
    }
    const Report ri = run("axiom-I", "canonical", kSamples);
    const Report rc = run("axiom-C", "canonical", kSamples);
    d = "TI " + std::to_string(ti.violations) + "/" + std::to_string(ti.tested) + " min off-line gap " + fmt(ti_min) +
        "; (I) " + std::to_string(ri.violations) + "/" + std::to_string(ri.tested) + " min " + fmt(ri.min_value) +
        "; (C) " + std::to_string(rc.violations) + "/" + std::to_string(rc.tested) + " min " + fmt(rc.min_value);
    return ti.passed() && ri.passed() && rc.passed() && ti_min > 0.0 && ri.min_value > 0.0 && rc.min_value > 0.0 &&
           ri.tested >= kSamples * 98 / 100 && rc.tested >= kSamples * 98 / 100;
  });

  criterion(8, "(I) inside the fine neighbourhood of the canonical structure", [](std::string& d) {
    const std::string s = "perturbed:" + fmt(kFineEta);
    const Report r = run("epsilon-nbhd", s, kSamples);
    const double members = r.metrics.at(0).min;
    d = s + " (I) violations " + std::to_string(r.violations) + "/" + std::to_string(r.tested) +
        (members == 1.0 ? ", every sample a member" : ", some samples outside the neighbourhood") + ", min residual " +
        fmt(r.min_value);
    return r.passed() && members == 1.0 && r.tested >= kSamples * 98 / 100;
  });

  criterion(9, "ellipse monotonicity falsification", [](std::string& d) {
    const Report bad = run("monotone", "ellipse:2,0.4", 100000);
    const Report good = run("monotone", "ellipse:1,1", 100000);
    d = "ellipse(2,0.4) " + std::to_string(bad.violations) + " violations";
    if (!bad.witnesses.empty()) {
      d += ", first at sample " + std::to_string(bad.witnesses[0].index) + " ratio " + fmt(bad.witnesses[0].value);
    }
    d += "; ellipse(1,1) " + std::to_string(good.violations) + " violations, min ratio " + fmt(good.min_value);
    return !bad.passed() && !bad.witnesses.empty() && good.passed();
  });

  criterion(10, "pentagon identity", [](std::string& d) {
    bool ok = true;
    for (const char* s : {"canonical", "snowflake:1.5"}) {
      const Report r = run("pentagon", s, 3, 1, 1);   // seeds 1, 2, 3
      ok = ok && r.passed() && r.tested == 3 && r.errors == 0 && r.max_value < kPentagonTol;
      d += std::string(s) + " seeds 1-3 max residual " + fmt(r.max_value) + "; ";
    }
    return ok;
  });

  criterion(11, "serial and 8-thread reports identical", [](std::string& d) {
    bool ok = true;
    for (const auto& s : kRoundTripStructures) {
      const std::string serial = report_json(run("duality-roundtrip", s, kSamples, 1), false);
      const std::string parallel = report_json(run("duality-roundtrip", s, kSamples, 8), false);
      const bool same = serial == parallel;
      ok = ok && same;
      d += s + (same ? " identical; " : " differ; ");
    }
    return ok;
  });

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
