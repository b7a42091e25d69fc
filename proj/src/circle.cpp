#include "mds/circle.hpp"

#include "mds/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mds {

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw ConfigError("non-finite angle");
  }
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) {
    r += kTwoPi;
  }
  // fmod of a tiny negative number can round up to exactly 2pi
  if (r >= kTwoPi) {
    r = 0.0;
  }
  return r;
}

double ccw_offset(CirclePoint from, CirclePoint to) {
  double d = to.theta() - from.theta();
  if (d < 0.0) {
    d += kTwoPi;
  }
  return d;
}

double angular_distance(CirclePoint a, CirclePoint b) {
  const double d = ccw_offset(a, b);
  return std::min(d, kTwoPi - d);
}

bool same_point(CirclePoint a, CirclePoint b, double eps) { return angular_distance(a, b) < eps; }

bool Arc::contains_open(CirclePoint p, double eps) const {
  if (same_point(p, start_, eps) || same_point(p, end_, eps)) {
    return false;
  }
  return ccw_offset(start_, p) < length();
}

bool Arc::contains_closed(CirclePoint p, double eps) const {
  if (same_point(p, start_, eps) || same_point(p, end_, eps)) {
    return true;
  }
  return ccw_offset(start_, p) < length();
}

double min_gap(std::span<const CirclePoint> points) {
  double gap = kPi;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      gap = std::min(gap, angular_distance(points[i], points[j]));
    }
  }
  return gap;
}

bool nondegenerate(std::span<const CirclePoint> points, double eps) { return min_gap(points) >= eps; }

void require_nondegenerate(std::span<const CirclePoint> points, double eps) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (same_point(points[i], points[j], eps)) {
        throw DegeneracyError("points " + std::to_string(i) + " and " + std::to_string(j) +
                              " coincide");
      }
    }
  }
}

bool separates(CirclePoint a1, CirclePoint a2, CirclePoint b1, CirclePoint b2, double eps) {
  const std::array<CirclePoint, 4> all{a1, a2, b1, b2};
  if (!nondegenerate(all, eps)) {
    return false;
  }
  const Arc arc(a1, a2);
  return arc.contains_open(b1, eps) != arc.contains_open(b2, eps);
}

bool is_cyclically_ordered(std::span<const CirclePoint> points) {
  if (points.size() < 3) {
    return true;
  }
  // the ccw offsets from the first point must increase strictly
  double prev = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double off = ccw_offset(points[0], points[i]);
    if (off <= prev) {
      return false;
    }
    prev = off;
  }
  return true;
}

template <std::size_t N> CyclicOrder<N> canonical_cyclic_order(const Tuple<N>& q, double eps) {
  require_nondegenerate(q, eps);
  CyclicOrder<N> out;
  std::iota(out.index.begin(), out.index.end(), 0);
  std::sort(out.index.begin(), out.index.end(),
            [&](int i, int j) { return q[static_cast<std::size_t>(i)].theta() < q[static_cast<std::size_t>(j)].theta(); });
  for (std::size_t i = 0; i < N; ++i) {
    out.word[i] = q[static_cast<std::size_t>(out.index[i])];
  }
  return out;
}

template CyclicOrder<4> canonical_cyclic_order<4>(const Tuple<4>&, double);
template CyclicOrder<5> canonical_cyclic_order<5>(const Tuple<5>&, double);
template CyclicOrder<6> canonical_cyclic_order<6>(const Tuple<6>&, double);
template CyclicOrder<7> canonical_cyclic_order<7>(const Tuple<7>&, double);

Permutation4::Permutation4(std::array<int, 4> image) : image_(image) {
  std::array<bool, 4> seen{};
  for (int v : image_) {
    if (v < 0 || v > 3 || seen[static_cast<std::size_t>(v)]) {
      throw ConfigError("not a permutation of four indices");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation4 Permutation4::parse(std::string_view one_line) {
  if (one_line.size() != 4) {
    throw ConfigError("permutation must have four digits: " + std::string(one_line));
  }
  std::array<int, 4> img{};
  for (std::size_t i = 0; i < 4; ++i) {
    img[i] = one_line[i] - '1';
  }
  return Permutation4(img);
}

std::array<Permutation4, 24> Permutation4::all() {
  std::array<Permutation4, 24> out;
  std::array<int, 4> img{0, 1, 2, 3};
  std::size_t k = 0;
  do {
    out[k++] = Permutation4(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

int Permutation4::sign() const {
  int inversions = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (image_[static_cast<std::size_t>(i)] > image_[static_cast<std::size_t>(j)]) {
        ++inversions;
      }
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

Permutation4 Permutation4::inverse() const {
  std::array<int, 4> inv{};
  for (int i = 0; i < 4; ++i) {
    inv[static_cast<std::size_t>(image_[static_cast<std::size_t>(i)])] = i;
  }
  return Permutation4(inv);
}

std::string Permutation4::str() const {
  std::string s(4, '0');
  for (std::size_t i = 0; i < 4; ++i) {
    s[i] = static_cast<char>('1' + image_[i]);
  }
  return s;
}

int pair_class(int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 3 || j > 3) {
    throw ConfigError("pair_class needs two distinct indices in 0..3");
  }
  const int other = (i == 0) ? j : (j == 0 ? i : 6 - i - j);
  // `other` is the partner of index 0 in the pair partition containing {i, j}
  return other - 1;
}

std::array<int, 3> Permutation4::pair_class_map() const {
  // representatives of the classes {01|23}, {02|13}, {03|12}
  static constexpr std::array<std::array<int, 2>, 3> rep{{{0, 1}, {0, 2}, {0, 3}}};
  std::array<int, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    out[k] = pair_class((*this)(rep[k][0]), (*this)(rep[k][1]));
  }
  return out;
}

Eigen::Matrix3d Permutation4::cross_ratio_action() const {
  // Coordinate k of the triple is L_{k+1} - L_{k+2}, with L_j the log of the
  // product of distances over pair class j. Relabelling the points moves L_j to
  // L_{phi(j)}, and odd permutations reverse the cyclic order of the classes.
  const auto phi = pair_class_map();
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  const double s = sign();
  for (int k = 0; k < 3; ++k) {
    a(k, phi[static_cast<std::size_t>(k)]) = s;
  }
  return a;
}

Permutation4 operator*(const Permutation4& pi, const Permutation4& rho) {
  std::array<int, 4> img{};
  for (int i = 0; i < 4; ++i) {
    img[static_cast<std::size_t>(i)] = rho(pi(i));
  }
  return Permutation4(img);
}

} // namespace mds
