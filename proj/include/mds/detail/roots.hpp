#pragma once

#include "mds/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace mds::detail {

/// Root of f in [lo, hi] given opposite-signed end values. Stops once the bracket
/// is below `width` or a zero is hit.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double flo, double fhi, double width, int max_iter,
                      const char* what) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw ConvergenceError(std::string(what) + ": root not bracketed");
  }
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  const auto stop = [width](double a, double b) {
    return std::abs(b - a) <= std::max(width, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a));
  };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  if (iters >= static_cast<std::uintmax_t>(max_iter) && !stop(r.first, r.second)) {
    throw ConvergenceError(std::string(what) + ": no convergence");
  }
  return 0.5 * (r.first + r.second);
}

} // namespace mds::detail
