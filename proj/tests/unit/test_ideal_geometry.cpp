#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "graftlab/error.hpp"
#include "graftlab/ideal_geometry.hpp"

using namespace graftlab;

namespace {

IdealTriangle standard() {
  return IdealTriangle({BoundaryPoint::at(0.0), BoundaryPoint::at(1.0), BoundaryPoint::inf()});
}

IdealTriangle skewed() {
  return IdealTriangle({BoundaryPoint::at(-2.0), BoundaryPoint::at(0.5), BoundaryPoint::at(3.0)});
}

// Polyline length of densely sampled points; converges to the arc length.
double polyline_length(const std::vector<HPoint>& pts) {
  double s = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) s += hyp_distance(pts[i - 1], pts[i]);
  return s;
}

}  // namespace

TEST(IdealTriangle, RejectsRepeatedVertices) {
  EXPECT_THROW(IdealTriangle({BoundaryPoint::at(0.0), BoundaryPoint::at(0.0), BoundaryPoint::inf()}),
               GeometryError);
  EXPECT_THROW(IdealTriangle({BoundaryPoint::inf(), BoundaryPoint::at(2.0), BoundaryPoint::inf()}),
               GeometryError);
}

TEST(IdealTriangle, StandardChartIsRealAndOrientationPreserving) {
  for (const IdealTriangle& t : {standard(), skewed()}) {
    EXPECT_TRUE(t.to_standard().is_real(1e-12));
    const Complex z = t.to_standard().apply(Complex(0.3, 0.8)).value();
    EXPECT_GT(z.imag(), 0.0);
  }
}

TEST(HorocyclicLamination, TangencyHeightAtInfinity) {
  const HorocyclicLamination lam = horocyclic_lamination(standard());
  EXPECT_TRUE(lam.tangency_horocycles[2].center.infinite);
  EXPECT_NEAR(lam.tangency_horocycles[2].level, 1.0, 1e-12);
  // Unit-diameter horocycles at 0 and 1 touch at (1/2, 1/2).
  EXPECT_NEAR(lam.tangency_horocycles[0].level, 1.0, 1e-12);
  EXPECT_NEAR(lam.tangency_horocycles[1].level, 1.0, 1e-12);
  EXPECT_NEAR(lam.tangency_points[2].x, 0.5, 1e-12);
  EXPECT_NEAR(lam.tangency_points[2].y, 0.5, 1e-12);
}

TEST(HorocyclicLamination, HorocyclesPairwiseTangent) {
  const IdealTriangle t = skewed();
  const HorocyclicLamination lam = horocyclic_lamination(t);
  for (int k = 0; k < 3; ++k) {
    const HPoint p = lam.tangency_points[static_cast<std::size_t>(k)];
    EXPECT_TRUE(lam.tangency_horocycles[static_cast<std::size_t>((k + 1) % 3)].contains(p, 1e-10));
    EXPECT_TRUE(lam.tangency_horocycles[static_cast<std::size_t>((k + 2) % 3)].contains(p, 1e-10));
  }
}

TEST(HorocyclicLamination, CentralEdgeLengthIsOne) {
  for (const IdealTriangle& t : {standard(), skewed()}) {
    const HorocyclicLamination lam = horocyclic_lamination(t);
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(lam.central_edge_lengths[static_cast<std::size_t>(k)], 1.0);
      const auto pts = sample_leaf(t, {k, 0.0, 1.0}, 4001);
      EXPECT_NEAR(polyline_length(pts), 1.0, 1e-6);
    }
  }
}

TEST(LeafLength, Examples) {
  EXPECT_NEAR(leaf_length({0, std::log(2.0), 1.0}), 0.5, 1e-15);
  EXPECT_EQ(leaf_length({0, 0.0, 1.7}), 1.7);
  const double h = 1e-4;
  const double d = (leaf_length({0, 1.0 + h, 1.0}) - leaf_length({0, 1.0 - h, 1.0})) / (2 * h);
  EXPECT_NEAR(d, -leaf_length({0, 1.0, 1.0}), 1e-8);
  EXPECT_THROW((void)leaf_length({0, -0.1, 1.0}), GeometryError);
}

TEST(LeafLength, DecayLawMatchesSampledArcs) {
  const IdealTriangle t = skewed();
  for (double u : {0.0, 0.5, 1.3, 2.0}) {
    const auto pts = sample_leaf(t, {1, u, 1.0}, 4001);
    EXPECT_NEAR(polyline_length(pts), std::exp(-u), 1e-6) << u;
    const LeafArc arc = horocyclic_leaf(t, {1, u, 1.0});
    EXPECT_NEAR(arc.length, std::exp(-u), 1e-15);
    EXPECT_TRUE(arc.horocycle.contains(arc.end, 1e-9));
  }
}

TEST(Collapse, CentralRegionAndLeaves) {
  const IdealTriangle t = standard();
  const TripodCoord c = collapse_to_tripod(t, {0.5, 0.8});
  EXPECT_FALSE(c.prong.has_value());
  EXPECT_EQ(c.u, 0.0);
  const auto pts = sample_leaf(t, {2, 1.3, 1.0}, 7);
  const TripodCoord first = collapse_to_tripod(t, pts.front());
  for (const HPoint& p : pts) {
    const TripodCoord q = collapse_to_tripod(t, p);
    ASSERT_TRUE(q.prong.has_value());
    EXPECT_EQ(*q.prong, *first.prong);
    EXPECT_NEAR(q.u, 1.3, 1e-12);
  }
}

TEST(Collapse, CoordinateAlongProng) {
  const IdealTriangle t = standard();
  for (double u : {0.2, 1.0, 2.5}) {
    const TripodCoord c = collapse_to_tripod(t, {0.5, std::exp(u)});
    ASSERT_TRUE(c.prong.has_value());
    EXPECT_EQ(*c.prong, 2);
    EXPECT_NEAR(c.u, u, 1e-12);
  }
  EXPECT_THROW((void)collapse_to_tripod(t, {2.0, 0.5}), GeometryError);
}

TEST(Collapse, LipschitzAlongProngs) {
  const IdealTriangle t = skewed();
  const MoebiusMap back = t.from_standard();
  for (int k = 0; k < 3; ++k) {
    const MoebiusMap w = back * t.vertex_chart(k).inverse();
    for (double u = 0.0; u < 3.0; u += 0.25) {
      const HPoint a = apply(w, {0.5, std::exp(u)});
      const HPoint b = apply(w, {0.5, std::exp(u + 0.25)});
      const double du = std::abs(collapse_to_tripod(t, b).u - collapse_to_tripod(t, a).u);
      EXPECT_LE(du, hyp_distance(a, b) + 1e-10);
    }
  }
}

TEST(IdealGeometry, MoebiusInvariance) {
  const IdealTriangle t = skewed();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = 1.0 + std::abs(ud(rng)), b = ud(rng), c = ud(rng);
    const MoebiusMap m{a, b, c, (1.0 + b * c) / a};
    std::array<BoundaryPoint, 3> v{};
    for (int i = 0; i < 3; ++i) {
      const ExtComplex img = m.apply(t.vertices()[static_cast<std::size_t>(i)].to_ext());
      v[static_cast<std::size_t>(i)] =
          img.is_infinite() ? BoundaryPoint::inf() : BoundaryPoint::at(img.value().real());
    }
    const IdealTriangle mt(v);
    for (int k = 0; k < 3; ++k) {
      const auto p0 = sample_leaf(t, {k, 0.7, 1.0}, 9);
      const auto p1 = sample_leaf(mt, {k, 0.7, 1.0}, 9);
      for (std::size_t i = 0; i < p0.size(); ++i) {
        EXPECT_LT(hyp_distance(apply(m, p0[i]), p1[i]), 1e-8);
      }
      const auto h0 = sample_mostly_horocyclic_leaf(t, k, 0.2, 9);
      const auto h1 = sample_mostly_horocyclic_leaf(mt, k, 0.2, 9);
      for (std::size_t i = 0; i < h0.size(); ++i) {
        EXPECT_LT(hyp_distance(apply(m, h0[i]), h1[i]), 1e-8);
      }
    }
  }
}

TEST(MostlyFoliations, BlendAndStraightLeaves) {
  const IdealTriangle t = standard();
  // Past the blend depth the leaf is horocyclic.
  const auto deep = sample_mostly_horocyclic_leaf(t, 2, 1.0, 5);
  for (const HPoint& p : deep) EXPECT_NEAR(p.y, std::exp(1.0), 1e-12);
  // At u = 0 it is the geodesic chord through (0, 1) and (1, 1).
  const auto chord = sample_mostly_horocyclic_leaf(t, 2, 0.0, 5);
  const Geodesic g = geodesic_between({0.0, 1.0}, {1.0, 1.0});
  for (const HPoint& p : chord) EXPECT_TRUE(on_geodesic(g, p, 1e-12));
  const auto straight = sample_mostly_straight_leaf(t, 0, 0.25, 2.0, 6);
  EXPECT_EQ(straight.size(), 16u);
  for (const HPoint& p : straight) EXPECT_TRUE(t.contains(p, 1e-12));
  EXPECT_THROW((void)sample_mostly_straight_leaf(t, 0, 0.7, 2.0, 6), GeometryError);
}

TEST(HypRectangle, Examples) {
  const HypRectangle r = build_hyp_rectangle({0.0, 1.0}, 1.5, 0.1);
  EXPECT_NEAR(hyp_distance(r.point(0.0, 0.0), r.point(0.0, 1.5)), 1.5, 1e-14);
  EXPECT_NEAR(hyp_distance(r.point(1.0, 0.0), r.point(1.0, 1.5)), r.vertical_edge_length(), 1e-14);
  // Horocyclic arc length at height y is delta / y.
  const double y = 2.0;
  const double v = std::log(y);
  std::vector<HPoint> pts;
  for (int i = 0; i <= 2000; ++i) pts.push_back(r.point(i / 2000.0, v));
  EXPECT_NEAR(polyline_length(pts), r.leaf_length_at_height(y), 1e-9);
  EXPECT_NEAR(r.leaf_length_at(v), 0.05, 1e-15);
  const HypRectangle thin = build_hyp_rectangle({0.0, 1.0}, 1.0, 1e-9);
  EXPECT_LT(thin.leaf_length_at(0.0), 1e-8);
  EXPECT_THROW((void)build_hyp_rectangle({0.0, 1.0}, 0.0, 1.0), GeometryError);
  EXPECT_THROW((void)build_hyp_rectangle({0.0, 1.0}, 1.0, -1.0), GeometryError);
}
