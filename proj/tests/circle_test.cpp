#include "mds/circle.hpp"
#include "mds/errors.hpp"
#include "mds/moebius.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace mds {
namespace {

TEST(Circle, NormalizeAngle) {
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi / 2), 3 * kPi / 2);
  EXPECT_DOUBLE_EQ(normalize_angle(5 * kPi), kPi);
  EXPECT_EQ(normalize_angle(-1e-20), 0.0);
  EXPECT_THROW(normalize_angle(std::nan("")), ConfigError);
}

TEST(Circle, OffsetsAndDistances) {
  const CirclePoint a(0.1), b(6.2);
  EXPECT_NEAR(ccw_offset(a, b), 6.1, 1e-15);
  EXPECT_NEAR(ccw_offset(b, a), kTwoPi - 6.1, 1e-15);
  EXPECT_NEAR(angular_distance(a, b), kTwoPi - 6.1, 1e-15);
}

TEST(Circle, ArcMembership) {
  const Arc arc(CirclePoint(5.0), CirclePoint(1.0));
  EXPECT_TRUE(arc.contains_open(CirclePoint(0.0), 1e-9));
  EXPECT_FALSE(arc.contains_open(CirclePoint(3.0), 1e-9));
  EXPECT_FALSE(arc.contains_open(CirclePoint(1.0), 1e-9));
  EXPECT_TRUE(arc.contains_closed(CirclePoint(1.0), 1e-9));
}

TEST(Circle, Separates) {
  const double eps = 1e-9;
  const CirclePoint p0(0), p1(kPi / 2), p2(kPi), p3(3 * kPi / 2);
  EXPECT_TRUE(separates(p0, p2, p1, p3, eps));
  EXPECT_FALSE(separates(p0, p1, p2, p3, eps));
  // pairs sharing a point never separate
  EXPECT_FALSE(separates(p0, p2, p0, p3, eps));
}

TEST(Circle, CanonicalCyclicOrder) {
  const Tuple4 q{CirclePoint(3.0), CirclePoint(0.5), CirclePoint(5.0), CirclePoint(1.0)};
  const auto co = canonical_cyclic_order<4>(q, 1e-9);
  EXPECT_EQ(co.index, (std::array<int, 4>{1, 3, 0, 2}));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(co.word[i].theta(), q[static_cast<std::size_t>(co.index[i])].theta());
  }
  EXPECT_TRUE(is_cyclically_ordered(co.word));
  const Tuple4 bad{CirclePoint(1.0), CirclePoint(1.0 + 1e-12), CirclePoint(2), CirclePoint(3)};
  EXPECT_THROW(canonical_cyclic_order<4>(bad, 1e-9), DegeneracyError);
}

TEST(Permutation, ApplyConvention) {
  const std::array<char, 4> q{'x', 'y', 'z', 'u'};
  EXPECT_EQ(Permutation4::parse("2413").apply(q), (std::array<char, 4>{'y', 'u', 'x', 'z'}));
  EXPECT_EQ(Permutation4::parse("2413").str(), "2413");
  EXPECT_THROW(Permutation4::parse("1123"), ConfigError);
  EXPECT_THROW(Permutation4::parse("123"), ConfigError);
}

TEST(Permutation, SignAndInverse) {
  int even = 0;
  for (const auto& p : Permutation4::all()) {
    even += p.sign() > 0;
    EXPECT_EQ(p * p.inverse(), Permutation4());
    EXPECT_EQ(p.inverse() * p, Permutation4());
  }
  EXPECT_EQ(even, 12);
  EXPECT_EQ(Permutation4::parse("2134").sign(), -1);
  EXPECT_EQ(Permutation4::parse("2341").sign(), -1);
  EXPECT_EQ(Permutation4::parse("2143").sign(), 1);
}

TEST(Permutation, CompositionOverAllPairs) {
  const std::array<int, 4> q{10, 20, 30, 40};
  for (const auto& pi : Permutation4::all()) {
    for (const auto& rho : Permutation4::all()) {
      const Permutation4 c = pi * rho;
      EXPECT_EQ(c.apply(q), pi.apply(rho.apply(q)));
      EXPECT_TRUE(c.cross_ratio_action().isApprox(pi.cross_ratio_action() * rho.cross_ratio_action()));
    }
  }
}

TEST(Permutation, KernelIsKleinFourGroup) {
  const std::set<std::string> kernel{"1234", "2143", "4321", "3412"};
  for (const auto& p : Permutation4::all()) {
    const bool trivial = p.cross_ratio_action().isIdentity();
    EXPECT_EQ(trivial, kernel.count(p.str()) == 1) << p.str();
  }
}

TEST(Permutation, PairClassMapOfTwoFourOneThree) {
  // 2413 swaps the first two classes, and is odd
  const auto p = Permutation4::parse("2413");
  EXPECT_EQ(p.pair_class_map(), (std::array<int, 3>{1, 0, 2}));
  EXPECT_EQ(p.sign(), -1);
}

TEST(Permutation, ActionAgreesWithDirectRecomputation) {
  test::Rand rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 4> th{};
    for (auto& t : th) t = rng.uniform(0, kTwoPi);
    const auto base = test::log_cross_ratios(th[0], th[1], th[2], th[3]);
    const Eigen::Vector3d v(base[0], base[1], base[2]);
    for (const auto& pi : Permutation4::all()) {
      const auto ph = pi.apply(th);
      const auto direct = test::log_cross_ratios(ph[0], ph[1], ph[2], ph[3]);
      const Eigen::Vector3d acted = pi.cross_ratio_action() * v;
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(acted(k), direct[static_cast<std::size_t>(k)], 1e-11) << pi.str();
      }
    }
  }
}

TEST(Permutation, TranspositionExample) {
  const double l2 = std::log(2.0);
  const CrossRatioTriple v(l2, 0.0, -l2);
  const CrossRatioTriple w = signed_permutation_action(Permutation4::parse("2134"), v);
  EXPECT_NEAR(w(0), -l2, 1e-15);
  EXPECT_NEAR(w(1), l2, 1e-15);
  EXPECT_NEAR(w(2), 0.0, 1e-15);
  EXPECT_THROW(signed_permutation_action(Permutation4(), CrossRatioTriple(1, 1, 1)), InvariantViolation);
}

} // namespace
} // namespace mds
