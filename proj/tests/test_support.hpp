#pragma once

#include "mds/circle.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace mds::test {

/// Angle of a chart value s = tan(theta / 2); infinity maps to pi.
inline CirclePoint from_chart(double s) {
  if (std::isinf(s)) return CirclePoint(kPi);
  return CirclePoint(2.0 * std::atan(s));
}

inline double to_chart(CirclePoint p) {
  if (std::abs(p.theta() - kPi) < 1e-15) return std::numeric_limits<double>::infinity();
  return std::tan(0.5 * p.theta());
}

/// Chordal distance written out independently of the library.
inline double chord(double a, double b) { return 2.0 * std::abs(std::sin(0.5 * (a - b))); }

/// ln cr1, ln cr2, ln cr3 of four angles from chords, by direct products.
inline std::array<double, 3> log_cross_ratios(double x1, double x2, double x3, double x4) {
  const double d12 = chord(x1, x2), d13 = chord(x1, x3), d14 = chord(x1, x4);
  const double d23 = chord(x2, x3), d24 = chord(x2, x4), d34 = chord(x3, x4);
  return {std::log(d13 * d24 / (d14 * d23)), std::log(d14 * d23 / (d12 * d34)),
          std::log(d12 * d34 / (d24 * d13))};
}

/// Real Moebius map sending p to 0 and q to infinity, applied to chart values.
inline double normalize_chart(double w, double p, double q) {
  if (std::isinf(w)) return 1.0;
  return (w - p) / (w - q);
}

struct Rand {
  explicit Rand(unsigned seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  CirclePoint point() { return CirclePoint(uniform(0.0, kTwoPi)); }
  std::mt19937_64 engine;
};

} // namespace mds::test
