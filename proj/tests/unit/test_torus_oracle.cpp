#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graftlab/error.hpp"
#include "graftlab/torus_oracle.hpp"

using namespace graftlab;
using C = std::complex<double>;

namespace {

// Grafting by lattice vectors: keep v = p + q tau, push u = r + s tau across a
// cylinder of height w |v| perpendicular to v, then read off the old marking.
TorusPoint lattice_graft(C tau, long p, long q, double w, long shift) {
  const Sl2z m0 = completing_basis({p, q});
  const long r = m0.c + shift * p;
  const long s = m0.d + shift * q;
  const C v = double(p) + double(q) * tau;
  const C u = double(r) + double(s) * tau + C(0.0, w) * v;
  return TorusPoint::make((-double(r) * v + double(p) * u) / (double(s) * v - double(q) * u));
}

Sl2z random_sl2z(std::mt19937_64& rng) {
  const Sl2z t{1, 1, 0, 1}, ti{1, -1, 0, 1}, s{0, -1, 1, 0};
  Sl2z m{};
  std::uniform_int_distribution<int> pick(0, 2);
  for (int i = 0; i < 6; ++i) {
    const Sl2z& g = pick(rng) == 0 ? t : (pick(rng) == 1 ? ti : s);
    m = {m.a * g.a + m.b * g.c, m.a * g.b + m.b * g.d, m.c * g.a + m.d * g.c, m.c * g.b + m.d * g.d};
  }
  return m;
}

SlopeCurve random_slope(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> pick(-5, 5);
  for (;;) {
    const long p = pick(rng), q = pick(rng);
    if (std::gcd(p, q) == 1) return {p, q};
  }
}

void expect_near(const TorusPoint& a, const TorusPoint& b, double tol) {
  EXPECT_NEAR(a.tau.real(), b.tau.real(), tol * (1.0 + std::abs(b.tau)));
  EXPECT_NEAR(a.tau.imag(), b.tau.imag(), tol * (1.0 + std::abs(b.tau)));
}

}  // namespace

TEST(Torus, Validation) {
  EXPECT_THROW(TorusPoint::make({0.0, 0.0}), ValidationError);
  EXPECT_THROW(SlopeCurve::make(2, 4), ValidationError);
  EXPECT_THROW(SlopeCurve::make(0, 0), ValidationError);
  EXPECT_THROW(Sl2z::make(1, 1, 1, 1), ValidationError);
  EXPECT_THROW(graft_torus(TorusPoint::make({0.0, 1.0}), {1, 0}, -1.0), ValidationError);
}

TEST(Torus, CompletingBasis) {
  for (long p = -7; p <= 7; ++p) {
    for (long q = -7; q <= 7; ++q) {
      if (std::gcd(p, q) != 1) continue;
      const Sl2z m = completing_basis({p, q});
      EXPECT_EQ(m.a, p);
      EXPECT_EQ(m.b, q);
      EXPECT_EQ(m.a * m.d - m.b * m.c, 1);
    }
  }
}

TEST(Torus, DistanceClosedForms) {
  const auto i = TorusPoint::make({0.0, 1.0});
  EXPECT_EQ(teich_distance(i, i), 0.0);
  EXPECT_NEAR(teich_distance(i, TorusPoint::make({0.0, 2.0})), 0.5 * std::log(2.0), 1e-15);
  // Markings matter: -1/tau is the same torus but a different point.
  const auto t = TorusPoint::make({0.3, 1.2});
  EXPECT_GT(teich_distance(t, act(Sl2z{0, -1, 1, 0}, t)), 0.0);
}

TEST(Torus, DistanceIsAMetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-2.0, 2.0), y(0.1, 3.0);
  for (int n = 0; n < 200; ++n) {
    const auto a = TorusPoint::make({x(rng), y(rng)});
    const auto b = TorusPoint::make({x(rng), y(rng)});
    const auto c = TorusPoint::make({x(rng), y(rng)});
    EXPECT_NEAR(teich_distance(a, b), teich_distance(b, a), 1e-12);
    EXPECT_LE(teich_distance(a, c), teich_distance(a, b) + teich_distance(b, c) + 1e-12);
    EXPECT_GT(teich_distance(a, b), 0.0);
  }
}

TEST(Torus, DistanceInvariantUnderMarkingChange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-1.0, 1.0), y(0.5, 2.0);
  for (int n = 0; n < 20; ++n) {
    const Sl2z m = random_sl2z(rng);
    const auto a = TorusPoint::make({x(rng), y(rng)});
    const auto b = TorusPoint::make({x(rng), y(rng)});
    EXPECT_NEAR(teich_distance(act(m, a), act(m, b)), teich_distance(a, b), 1e-9);
  }
}

TEST(Graft, ClosedForms) {
  const auto i = TorusPoint::make({0.0, 1.0});
  EXPECT_EQ(graft_torus(i, {1, 0}, 0.0).tau, i.tau);
  expect_near(graft_torus(i, {1, 0}, 1.0), TorusPoint::make({0.0, 2.0}), 1e-15);
  // Vertical curve on the square torus: tau -> -1/(-1/tau + i w).
  expect_near(graft_torus(i, {0, 1}, 1.0), TorusPoint::make({0.0, 0.5}), 1e-15);
}

TEST(Graft, MatchesLatticeConstruction) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-1.0, 1.0), y(0.3, 2.0), w(0.0, 3.0);
  for (int n = 0; n < 50; ++n) {
    const C tau{x(rng), y(rng)};
    const SlopeCurve c = random_slope(rng);
    const double ww = w(rng);
    const TorusPoint g = graft_torus(TorusPoint::make(tau), c, ww);
    for (long shift : {-2L, 0L, 3L}) expect_near(g, lattice_graft(tau, c.p, c.q, ww, shift), 1e-10);
  }
}

TEST(Graft, Additive) {
  const auto t = TorusPoint::make({0.3, 0.8});
  for (SlopeCurve c : {SlopeCurve{1, 0}, SlopeCurve{2, 3}, SlopeCurve{-1, 4}}) {
    expect_near(graft_torus(graft_torus(t, c, 0.7), c, 1.3), graft_torus(t, c, 2.0), 1e-12);
  }
}

TEST(Graft, MarkingEquivariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-1.0, 1.0), y(0.5, 2.0), w(0.0, 2.0);
  for (int n = 0; n < 20; ++n) {
    const Sl2z m = random_sl2z(rng);
    const auto t = TorusPoint::make({x(rng), y(rng)});
    const SlopeCurve c = random_slope(rng);
    const double ww = w(rng);
    const TorusPoint lhs = graft_torus(act(m, t), act(m, c), ww);
    const TorusPoint rhs = act(m, graft_torus(t, c, ww));
    EXPECT_LT(teich_distance(lhs, rhs), 1e-9) << n;
  }
}

TEST(Graft, FlatLengthIsMarkingInvariant) {
  std::mt19937_64 rng(9);
  const auto t = TorusPoint::make({0.2, 1.4});
  for (int n = 0; n < 20; ++n) {
    const Sl2z m = random_sl2z(rng);
    const SlopeCurve c = random_slope(rng);
    EXPECT_NEAR(flat_length(act(m, t), act(m, c)), flat_length(t, c), 1e-9 * flat_length(t, c));
  }
  EXPECT_DOUBLE_EQ(flat_length(TorusPoint::make({0.0, 1.0}), {1, 0}), 1.0);
}

TEST(Ray, UnitSpeedGeodesic) {
  const auto t = TorusPoint::make({0.3, 1.0});
  for (SlopeCurve c : {SlopeCurve{1, 0}, SlopeCurve{1, 2}}) {
    expect_near(teich_ray(t, c, 0.0), t, 1e-14);
    for (auto [s1, s2] : {std::pair{0.0, 1.0}, {0.5, 2.5}, {-1.0, 3.0}, {2.0, 0.1}}) {
      EXPECT_NEAR(teich_distance(teich_ray(t, c, s1), teich_ray(t, c, s2)), std::abs(s1 - s2), 1e-9);
    }
  }
  // Curves in class c shrink along the ray.
  EXPECT_LT(flat_length(teich_ray(t, {1, 2}, 2.0), {1, 2}), flat_length(t, {1, 2}));
}

TEST(Ray, GapDecreasesToZero) {
  const auto t = TorusPoint::make({0.3, 1.0});
  const SlopeCurve c{1, 0};
  EXPECT_LT(ray_gap(t, c, 6.0), ray_gap(t, c, 3.0));
  EXPECT_LT(ray_gap(t, c, 3.0), ray_gap(t, c, 1.0));
  EXPECT_LT(ray_gap(t, c, 6.0), 0.05);
  for (double s = 0.0; s < 12.0; s += 0.5) EXPECT_LT(ray_gap(t, c, s + 0.5), ray_gap(t, c, s));
}

TEST(Ray, GapProfileIsMarkingInvariant) {
  std::mt19937_64 rng(13);
  const auto t = TorusPoint::make({0.3, 1.0});
  for (int n = 0; n < 10; ++n) {
    const Sl2z m = random_sl2z(rng);
    const SlopeCurve c = random_slope(rng);
    for (double s : {0.0, 1.0, 3.0}) {
      EXPECT_NEAR(ray_gap(act(m, t), act(m, c), s), ray_gap(t, c, s), 1e-8);
    }
  }
}

TEST(Ray, CompareReport) {
  std::vector<double> grid;
  for (int k = 0; k <= 12; ++k) grid.push_back(0.5 * k);
  const auto r = ray_compare(TorusPoint::make({0.3, 1.0}), {2, 1}, grid);
  ASSERT_EQ(r.rows.size(), grid.size());
  EXPECT_EQ(r.decreasing_from, 0.0);
  for (const auto& row : r.rows) EXPECT_GE(row.gap, 0.0);
}
