#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graftlab/error.hpp"
#include "graftlab/moebius.hpp"

using namespace graftlab;

namespace {

// Length of the hyperbolic geodesic through p and q by direct quadrature of
// |dz|/y along the circle orthogonal to the real axis.
double arc_integral_distance(const HPoint& p, const HPoint& q) {
  const Geodesic g = geodesic_between(p, q);
  const double c = 0.5 * (g.start.x + g.end.x);
  const double r = 0.5 * std::abs(g.end.x - g.start.x);
  const double t0 = std::atan2(p.y, p.x - c);
  const double t1 = std::atan2(q.y, q.x - c);
  const int n = 20000;
  double sum = 0.0;
  const double h = (t1 - t0) / n;
  // Simpson rule on r dt / (r sin t) = dt / sin t.
  for (int i = 0; i <= n; ++i) {
    const double t = t0 + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w / std::sin(t);
  }
  return std::abs(sum * h / 3.0);
}

double bisect_length_for_trace(double tr) {
  double lo = 0.0, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (2.0 * std::cosh(mid / 2.0) < tr) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Moebius, ApplyExamples) {
  const ExtComplex z = MoebiusMap::identity().apply(Complex(1.0, 2.0));
  EXPECT_EQ(z.value(), Complex(1.0, 2.0));
  const MoebiusMap inv{0.0, 1.0, 1.0, 0.0};
  EXPECT_NEAR(std::abs(inv.apply(2.0).value() - Complex(0.5, 0.0)), 0.0, 1e-15);
  const MoebiusMap m{2.0, 0.0, 0.0, 0.5};
  EXPECT_NEAR(std::abs(m.apply(Complex(0.0, 1.0)).value() - Complex(0.0, 4.0)), 0.0, 1e-14);
}

TEST(Moebius, InfinityIsExplicit) {
  const MoebiusMap inv{0.0, 1.0, 1.0, 0.0};
  EXPECT_TRUE(inv.apply(0.0).is_infinite());
  EXPECT_EQ(inv.apply(ExtComplex::infinity()), ExtComplex(0.0));
  EXPECT_THROW((void)ExtComplex::infinity().value(), GeometryError);
}

TEST(Moebius, DegenerateRejected) {
  EXPECT_THROW((MoebiusMap{1.0, 2.0, 2.0, 4.0}), GeometryError);
}

TEST(Moebius, ClassifyExamples) {
  const auto d = MoebiusMap{2.0, 0.0, 0.0, 0.5}.classify();
  EXPECT_EQ(d.kind, MoebiusKind::hyperbolic);
  EXPECT_NEAR(d.translation_length, 2.0 * std::log(2.0), 1e-12);
  const auto p = MoebiusMap{1.0, 1.0, 0.0, 1.0}.classify();
  EXPECT_EQ(p.kind, MoebiusKind::parabolic);
  EXPECT_EQ(p.translation_length, 0.0);
  // Trace 3: [[2, 1], [1, 1]].
  const auto t3 = MoebiusMap{2.0, 1.0, 1.0, 1.0}.classify();
  EXPECT_NEAR(t3.translation_length, bisect_length_for_trace(3.0), 1e-12);
  EXPECT_NEAR(t3.translation_length, 1.924847, 1e-6);
  const double th = 0.7;
  const auto e = MoebiusMap{std::cos(th), -std::sin(th), std::sin(th), std::cos(th)}.classify();
  EXPECT_EQ(e.kind, MoebiusKind::elliptic);
  const auto lox = MoebiusMap::diagonal(Complex(2.0, 1.0)).classify();
  EXPECT_EQ(lox.kind, MoebiusKind::loxodromic);
  EXPECT_NEAR(lox.translation_length, 2.0 * std::log(std::abs(Complex(2.0, 1.0))), 1e-12);
}

TEST(Moebius, ClassifyIdentityThrows) {
  try {
    (void)MoebiusMap::identity().classify();
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_STREQ(e.what(), "no classification");
  }
  EXPECT_THROW((void)(MoebiusMap{-1.0, 0.0, 0.0, -1.0}).classify(), GeometryError);
}

TEST(Moebius, TraceLengthRoundTrip) {
  for (double l = 0.1; l <= 10.0; l += 0.1) {
    const auto c = MoebiusMap{std::exp(l / 2), 0.0, 0.0, std::exp(-l / 2)}.classify();
    EXPECT_NEAR(c.translation_length, l, 1e-12) << l;
  }
}

TEST(Moebius, ProjectiveScalingInvariance) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    const Complex a(nd(rng), nd(rng)), b(nd(rng), nd(rng)), c(nd(rng), nd(rng)), d(nd(rng), nd(rng));
    const Complex lam(nd(rng), nd(rng));
    const MoebiusMap m{a, b, c, d};
    const MoebiusMap ml{lam * a, lam * b, lam * c, lam * d};
    const Complex z(nd(rng), nd(rng));
    EXPECT_LT(chordal_distance(m.apply(z), ml.apply(z)), 1e-10);
    EXPECT_TRUE(projectively_equal(m, ml));
    EXPECT_TRUE(is_projective_identity(m * m.inverse()));
  }
}

TEST(Moebius, FromThreePoints) {
  const std::array<ExtComplex, 3> z{Complex(1.0, 1.0), 3.0, ExtComplex::infinity()};
  const std::array<ExtComplex, 3> w{0.0, ExtComplex::infinity(), Complex(0.0, 2.0)};
  const MoebiusMap m = MoebiusMap::from_three_points(z, w);
  for (int i = 0; i < 3; ++i) EXPECT_LT(chordal_distance(m.apply(z[i]), w[i]), 1e-12);
}

TEST(Hyperbolic, DistanceExamples) {
  EXPECT_NEAR(hyp_distance({0, 1}, {0, 2}), std::log(2.0), 1e-15);
  EXPECT_EQ(hyp_distance({0.3, 1.7}, {0.3, 1.7}), 0.0);
  const double d = hyp_distance({0, 1}, {1, 1});
  EXPECT_NEAR(d, arc_integral_distance({0, 1}, {1, 1}), 1e-9);
  EXPECT_NEAR(d, 0.962424, 1e-6);
}

TEST(Hyperbolic, IsometryInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    double a = ux(rng);
    const double b = ux(rng), c = ux(rng);
    if (std::abs(a) < 0.1) a = 1.0;
    const MoebiusMap m{a, b, c, (1.0 + b * c) / a};
    const HPoint p{ux(rng), uy(rng)}, q{ux(rng), uy(rng)};
    EXPECT_NEAR(hyp_distance(apply(m, p), apply(m, q)), hyp_distance(p, q), 1e-10);
  }
}

TEST(Hyperbolic, TriangleInequality) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const HPoint p{ux(rng), uy(rng)}, q{ux(rng), uy(rng)}, r{ux(rng), uy(rng)};
    EXPECT_LE(hyp_distance(p, r), hyp_distance(p, q) + hyp_distance(q, r) + 1e-12);
    EXPECT_NEAR(hyp_distance(p, q), hyp_distance(q, p), 1e-14);
  }
}

TEST(Hyperbolic, GeodesicBetween) {
  const Geodesic v = geodesic_between({0, 1}, {0, 2});
  EXPECT_FALSE(v.start.infinite);
  EXPECT_EQ(v.start.x, 0.0);
  EXPECT_TRUE(v.end.infinite);
  const Geodesic g = geodesic_between({-1, 1}, {1, 1});
  EXPECT_NEAR(g.start.x, -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(g.end.x, std::sqrt(2.0), 1e-14);
  EXPECT_TRUE(on_geodesic(g, {-1, 1}));
  EXPECT_TRUE(on_geodesic(g, {1, 1}));
  EXPECT_THROW((void)geodesic_between({0, 1}, {0, 1}), GeometryError);
}

TEST(Hyperbolic, HorocycleAt) {
  const Horocycle h = horocycle_at(BoundaryPoint::inf(), {3, 2});
  EXPECT_TRUE(h.center.infinite);
  EXPECT_EQ(h.level, 2.0);
  const Horocycle f = horocycle_at(BoundaryPoint::at(1.0), {2.0, 1.0});
  EXPECT_TRUE(f.contains({2.0, 1.0}));
  EXPECT_TRUE(f.contains({1.0, f.level}));
}

TEST(Hyperbolic, HPointRejectsBoundary) {
  EXPECT_THROW((void)HPoint::make(0.0, 0.0), GeometryError);
  EXPECT_THROW((void)HPoint::make(0.0, -1.0), GeometryError);
}
