#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dephasim/errors.hpp"
#include "dephasim/smatrix.hpp"
#include "oracles.hpp"

namespace dephasim {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(BuildSmatrix, ZeroAnglesGiveIdentity) {
  const auto s = build_smatrix({0.0, 0.0, 0.0});
  EXPECT_TRUE(s.isApprox(ScatteringMatrix::Identity(), 0.0));
}

TEST(BuildSmatrix, FullReflection) {
  const auto s = build_smatrix({kPi / 2, 0.0, 0.0});
  EXPECT_NEAR(std::abs(s(0, 0)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(s(1, 1)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(s(0, 1) - Complex(0, 1)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(s(1, 0) - Complex(0, 1)), 0.0, 1e-16);
}

TEST(BuildSmatrix, GenericAnglesAreUnitaryAndTimeReversal) {
  const auto s = build_smatrix({0.6, 0.3, 0.2});
  // Explicit S S^dagger.
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      Complex acc = 0.0;
      for (int k = 0; k < 2; ++k) acc += s(r, k) * std::conj(s(c, k));
      EXPECT_NEAR(std::abs(acc - (r == c ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
  EXPECT_TRUE(is_unitary(s, 1e-12));
  EXPECT_TRUE(is_time_reversal_symmetric(s, 1e-12));
}

TEST(BuildSmatrix, RejectsOutOfDomainAngles) {
  EXPECT_THROW(build_smatrix({2.0, 0.0, 0.0}), InvalidParameter);
  EXPECT_THROW(build_smatrix({-0.1, 0.0, 0.0}), InvalidParameter);
  EXPECT_THROW(build_smatrix({0.1, -kPi, 0.0}), InvalidParameter);
  EXPECT_THROW(build_smatrix({0.1, 0.0, 3.2}), InvalidParameter);
  EXPECT_THROW(build_smatrix({std::nan(""), 0.0, 0.0}), InvalidParameter);
  EXPECT_THROW(build_smatrix({0.1, INFINITY, 0.0}), InvalidParameter);
  EXPECT_NO_THROW(build_smatrix({kPi / 2, kPi, kPi}));
}

TEST(TransmissionProbability, Limits) {
  EXPECT_EQ(transmission_probability({0.0, 0.0, 0.0}), 1.0);
  EXPECT_NEAR(transmission_probability({kPi / 2, 0.0, 0.0}), 0.0, 1e-32);
}

TEST(TransmissionProbability, MatchesMatrixElementModulus) {
  const BarrierParams b{0.6, 1.1, -0.7};
  const auto s = build_smatrix(b);
  EXPECT_NEAR(std::norm(s(0, 0)), transmission_probability(b), 1e-15);
  EXPECT_NEAR(std::norm(s(1, 1)), transmission_probability(b), 1e-15);
  EXPECT_NEAR(transmission_probability(b), std::cos(0.6) * std::cos(0.6), 1e-15);
}

TEST(IsUnitary, Examples) {
  EXPECT_TRUE(is_unitary(ScatteringMatrix::Identity(), 0.0));
  ScatteringMatrix m;
  m << 1.0, 0.0, 0.0, 2.0;
  EXPECT_FALSE(is_unitary(m, 1e-9));
}

TEST(IsTimeReversalSymmetric, Examples) {
  EXPECT_TRUE(is_time_reversal_symmetric(ScatteringMatrix::Identity(), 0.0));
  ScatteringMatrix m;
  m << 0.6, Complex(0, 0.8), Complex(0, 0.8), 0.5;
  EXPECT_FALSE(is_time_reversal_symmetric(m, 1e-9));
}

TEST(IsParitySymmetric, Examples) {
  EXPECT_TRUE(is_parity_symmetric({0.3, 0.1, 0.0}, 0.0));
  EXPECT_FALSE(is_parity_symmetric({0.3, 0.1, 0.2}, 1e-9));
  const auto s = build_smatrix({0.3, 0.1, 0.0});
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(Direction, RoundTrip) {
  for (const auto d : {Direction::Forward, Direction::Backward}) {
    EXPECT_EQ(parse_direction(to_string(d)), d);
    EXPECT_EQ(reversed(reversed(d)), d);
    EXPECT_NE(reversed(d), d);
  }
  EXPECT_FALSE(parse_direction("sideways").has_value());
}

// Properties over random parameter draws.
TEST(SmatrixProperties, RandomGrid) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const auto b = oracle::random_barrier(rng);
    const auto s = build_smatrix(b);
    ASSERT_TRUE(is_unitary(s, 1e-12));
    ASSERT_TRUE(is_time_reversal_symmetric(s, 1e-12));
    ASSERT_NEAR(transmission_probability(b) + std::norm(s(1, 0)), 1.0, 1e-12);

    // eta -> -eta: diagonal and all moduli unchanged.
    const auto flipped = build_smatrix({b.theta, b.phi, -b.eta == -kPi ? kPi : -b.eta});
    ASSERT_NEAR(std::abs(s(0, 0) - flipped(0, 0)), 0.0, 1e-14);
    ASSERT_NEAR(std::abs(s(1, 1) - flipped(1, 1)), 0.0, 1e-14);
    for (int k = 0; k < 4; ++k) {
      ASSERT_NEAR(std::abs(s(k / 2, k % 2)), std::abs(flipped(k / 2, k % 2)), 1e-14);
    }
  }
}

}  // namespace
}  // namespace dephasim
