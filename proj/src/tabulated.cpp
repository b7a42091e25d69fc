#include "mds/errors.hpp"
#include "mds/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mds {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw IngestionError(os.str());
}

double parse_number(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    fail(line, "'" + tok + "' is not a finite number");
  }
  return v;
}

std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  for (std::size_t number = 1; std::getline(in, raw); ++number) {
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    Line l{number, {}};
    for (std::string tok; ls >> tok;) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

} // namespace

DistanceGrid parse_tabulated(std::istream& in) {
  const std::vector<Line> lines = content_lines(in);
  if (lines.empty()) throw IngestionError("line 1: empty table");

  const Line& head = lines[0];
  if (head.tokens.size() != 1) fail(head.number, "expected the point count n alone");
  std::size_t n = 0;
  const std::string& nt = head.tokens[0];
  const auto [ptr, ec] = std::from_chars(nt.data(), nt.data() + nt.size(), n);
  if (ec != std::errc() || ptr != nt.data() + nt.size() || n == 0) {
    fail(head.number, "'" + nt + "' is not a positive integer");
  }
  if (lines.size() < 2) fail(head.number + 1, "missing the angle line");
  if (lines.size() != n + 2) {
    const std::size_t where = lines.size() < n + 2 ? lines.back().number + 1 : lines[n + 2].number;
    std::ostringstream os;
    os << "expected " << n << " distance rows, found " << lines.size() - 2;
    fail(where, os.str());
  }

  DistanceGrid g;
  const Line& al = lines[1];
  if (al.tokens.size() != n) {
    std::ostringstream os;
    os << "expected " << n << " angles, found " << al.tokens.size();
    fail(al.number, os.str());
  }
  for (const auto& tok : al.tokens) {
    const double a = parse_number(tok, al.number);
    if (a < 0.0 || a >= kTwoPi) fail(al.number, "angle " + tok + " outside [0, 2pi)");
    if (!g.angles.empty() && !(a - g.angles.back() > Tolerances{}.point)) {
      fail(al.number, "angles must be strictly ascending and distinct");
    }
    g.angles.push_back(a);
  }
  if (n > 1 && !(kTwoPi - g.angles.back() + g.angles.front() > Tolerances{}.point)) {
    fail(al.number, "first and last angle coincide on the circle");
  }

  g.distances.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Line& row = lines[i + 2];
    if (row.tokens.size() != n) {
      std::ostringstream os;
      os << "row " << i << " has " << row.tokens.size() << " entries, expected " << n;
      fail(row.number, os.str());
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double d = parse_number(row.tokens[j], row.number);
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      std::ostringstream os;
      if (i == j && d != 0.0) {
        os << "diagonal entry (" << i << ", " << i << ") is " << row.tokens[j] << ", expected 0";
        fail(row.number, os.str());
      }
      if (i != j && !(d > 0.0)) {
        os << "entry (" << i << ", " << j << ") is " << row.tokens[j] << ", expected a positive distance";
        fail(row.number, os.str());
      }
      if (j < i) {
        const double other = g.distances(jj, ii);
        if (std::abs(d - other) > 1e-12 * std::max(d, other)) {
          os << "entry (" << i << ", " << j << ") = " << row.tokens[j] << " differs from (" << j << ", " << i
             << ") = " << other << "; the table must be symmetric";
          fail(row.number, os.str());
        }
      }
      g.distances(ii, jj) = d;
    }
  }
  return g;
}

MoebiusStructure load_tabulated_semimetric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated structure '" + path + "'");
  try {
    return MoebiusStructure::tabulated(parse_tabulated(in));
  } catch (const IngestionError& e) {
    throw IngestionError(path + ": " + e.what());
  }
}

} // namespace mds
