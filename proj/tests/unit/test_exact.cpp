#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graftlab/error.hpp"
#include "graftlab/exact.hpp"

using namespace graftlab;

TEST(Rational, ParsesAndPrints) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3) / 4);
  EXPECT_EQ(parse_rational("-6/8"), Rational(-3) / 4);
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
  EXPECT_EQ(to_string(Rational(-2)), "-2");
}

TEST(Rational, RejectsGarbage) {
  for (const char* s : {"", "1/0", "a/2", "1/2/3", "1.5", " 1/2", "--1"}) {
    EXPECT_THROW(parse_rational(s), ValidationError) << s;
  }
}

TEST(Rational, DoubleRoundTripIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double v = u(rng);
    EXPECT_EQ(to_double(rational_from_double(v)), v);
  }
  EXPECT_EQ(rational_from_double(0.375), Rational(3) / 8);
  EXPECT_THROW(rational_from_double(std::nan("")), ValidationError);
}

TEST(QuadNumber, GoldenRatioIdentities) {
  const QuadNumber s5 = QuadNumber::sqrt_of(5);
  const QuadNumber phi = (QuadNumber(1) + s5) / QuadNumber(2);
  EXPECT_EQ(phi * phi, phi + QuadNumber(1));
  EXPECT_EQ(QuadNumber(1) / phi, phi - QuadNumber(1));
  EXPECT_NEAR(phi.to_double(), 1.6180339887498949, 1e-15);
}

TEST(QuadNumber, SqrtFoldsSquares) {
  EXPECT_TRUE(QuadNumber::sqrt_of(9).is_rational());
  EXPECT_EQ(QuadNumber::sqrt_of(9), QuadNumber(3));
  const QuadNumber s8 = QuadNumber::sqrt_of(8);
  EXPECT_EQ(s8 * s8, QuadNumber(8));
  EXPECT_EQ(s8, QuadNumber(2) * QuadNumber::sqrt_of(2));
}

TEST(QuadNumber, SignMatchesFloatingPoint) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(-50, 50);
  for (int i = 0; i < 500; ++i) {
    const QuadNumber q(Rational(u(rng)), Rational(u(rng)), 2);
    const double v = q.to_double();
    const int expect = v > 1e-12 ? 1 : (v < -1e-12 ? -1 : 0);
    EXPECT_EQ(q.sign(), expect) << q;
  }
  // Near cancellation: 99 - 70 sqrt 2 > 0 and 577 - 408 sqrt 2 > 0, but tiny.
  EXPECT_EQ(QuadNumber(Rational(99), Rational(-70), 2).sign(), 1);
  EXPECT_EQ(QuadNumber(Rational(-577), Rational(408), 2).sign(), -1);
}

TEST(QuadNumber, FieldAxioms) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-9, 9);
  auto draw = [&] { return QuadNumber(Rational(u(rng)) / 7, Rational(u(rng)) / 5, 5); };
  for (int i = 0; i < 100; ++i) {
    const QuadNumber a = draw(), b = draw(), c = draw();
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) - b, a);
    if (b.sign() != 0) EXPECT_EQ((a / b) * b, a);
  }
}

TEST(QuadNumber, Errors) {
  EXPECT_THROW(QuadNumber(1) / QuadNumber(0), NumericalError);
  EXPECT_THROW(QuadNumber::sqrt_of(2) + QuadNumber::sqrt_of(3), ValidationError);
  EXPECT_THROW(QuadNumber(Rational(1), Rational(1), -2), ValidationError);
  // Rationals mix with any field.
  EXPECT_NO_THROW(QuadNumber::sqrt_of(2) + QuadNumber(Rational(1) / 3));
}

TEST(Point2, CrossAndDot) {
  const Point2 u{QuadNumber(1), QuadNumber(0)}, v{QuadNumber(0), QuadNumber(1)};
  EXPECT_EQ(cross(u, v), QuadNumber(1));
  EXPECT_EQ(dot(u, v), QuadNumber(0));
  EXPECT_EQ(u + v - v, u);
}
