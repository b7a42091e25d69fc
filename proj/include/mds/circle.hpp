#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mds {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Numerical tolerances shared across modules.
struct Tolerances {
  double point = 1e-9;     ///< two angles closer than this are the same point
  double min_gap = 1e-3;   ///< minimum gap for sampled configurations
  double relative = 1e-9;  ///< relative margin for strict inequalities
  double root = 1e-12;     ///< residual target for root finding
  double root_arg = 1e-10; ///< argument tolerance for root finding
  int max_iterations = 200;
};

/// Maps an angle to [0, 2pi).
double normalize_angle(double theta);

/// Point of the unit circle, stored as an angle in [0, 2pi).
class CirclePoint {
public:
  CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(normalize_angle(theta)) {}

  double theta() const { return theta_; }

private:
  double theta_ = 0.0;
};

/// Counter-clockwise angular offset from `from` to `to`, in [0, 2pi).
double ccw_offset(CirclePoint from, CirclePoint to);

/// Shortest angular distance, in [0, pi].
double angular_distance(CirclePoint a, CirclePoint b);

bool same_point(CirclePoint a, CirclePoint b, double eps);

/// Counter-clockwise arc from `start` to `end`.
class Arc {
public:
  Arc(CirclePoint start, CirclePoint end) : start_(start), end_(end) {}

  CirclePoint start() const { return start_; }
  CirclePoint end() const { return end_; }
  double length() const { return ccw_offset(start_, end_); }

  /// Open-arc membership; points within `eps` of an endpoint are excluded.
  bool contains_open(CirclePoint p, double eps) const;
  /// Closed-arc membership; points within `eps` of an endpoint are included.
  bool contains_closed(CirclePoint p, double eps) const;

  CirclePoint at(double offset) const { return CirclePoint(start_.theta() + offset); }
  double offset_of(CirclePoint p) const { return ccw_offset(start_, p); }
  /// Same point set traversed from the other end.
  Arc complement() const { return Arc(end_, start_); }

private:
  CirclePoint start_;
  CirclePoint end_;
};

template <std::size_t N> using Tuple = std::array<CirclePoint, N>;
using Tuple4 = Tuple<4>;
using Tuple5 = Tuple<5>;
using Tuple6 = Tuple<6>;
using Tuple7 = Tuple<7>;

/// Smallest pairwise angular distance.
double min_gap(std::span<const CirclePoint> points);

/// True when all points are pairwise distinct within `eps`.
bool nondegenerate(std::span<const CirclePoint> points, double eps);

/// Throws DegeneracyError unless the points are pairwise distinct.
void require_nondegenerate(std::span<const CirclePoint> points, double eps);

/// True when {a1, a2} and {b1, b2} are distinct pairs and b1, b2 lie in
/// different components of the circle minus {a1, a2}.
bool separates(CirclePoint a1, CirclePoint a2, CirclePoint b1, CirclePoint b2, double eps);

/// True when the points appear in counter-clockwise cyclic order.
bool is_cyclically_ordered(std::span<const CirclePoint> points);

template <std::size_t N> struct CyclicOrder {
  Tuple<N> word;                ///< points in ccw order starting from the smallest angle
  std::array<int, N> index{};   ///< word[i] == q[index[i]]
};

template <std::size_t N> CyclicOrder<N> canonical_cyclic_order(const Tuple<N>& q, double eps);

/// Permutation of four indices, written in one-line notation "2413".
/// Acts on tuples by (pi q)_i = q_{pi(i)}.
class Permutation4 {
public:
  Permutation4() : image_{0, 1, 2, 3} {}
  /// From zero-based images; throws ConfigError unless a bijection.
  explicit Permutation4(std::array<int, 4> image);
  /// From one-line notation with digits 1..4.
  static Permutation4 parse(std::string_view one_line);
  static std::array<Permutation4, 24> all();

  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  int sign() const;
  Permutation4 inverse() const;
  std::string str() const;

  template <class T> std::array<T, 4> apply(const std::array<T, 4>& q) const {
    return {q[image_[0]], q[image_[1]], q[image_[2]], q[image_[3]]};
  }

  /// Pair-class permutation: class k goes to class phi(k), where the classes are
  /// {12|34}, {13|24}, {14|23}.
  std::array<int, 3> pair_class_map() const;

  /// Signed 3x3 permutation matrix A with M(pi q) = A M(q).
  Eigen::Matrix3d cross_ratio_action() const;

  friend bool operator==(const Permutation4&, const Permutation4&) = default;

private:
  std::array<int, 4> image_;
};

/// Composition with (pi * rho).apply(q) == pi.apply(rho.apply(q)).
Permutation4 operator*(const Permutation4& pi, const Permutation4& rho);

/// Pair class of an unordered index pair of {0,1,2,3}: 0 for {01|23}, 1 for {02|13}, 2 for {03|12}.
int pair_class(int i, int j);

} // namespace mds
