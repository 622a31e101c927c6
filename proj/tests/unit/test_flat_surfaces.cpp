#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "graftlab/error.hpp"
#include "graftlab/flat_surfaces.hpp"
#include "support/cone_oracle.hpp"
#include "support/surfaces.hpp"

using namespace graftlab;
using namespace graftlab::testing;

namespace {

std::vector<int> cone_angles(const HalfTranslationSurface& s) {
  std::vector<int> ks;
  for (const VertexClass& c : s.vertex_classes()) ks.push_back(c.k);
  std::sort(ks.begin(), ks.end());
  return ks;
}

const FatTraintrackDecomposition& golden_l() {
  static const FatTraintrackDecomposition d =
      traintrack_decomposition(build_surface(l_shape()), golden_direction(), QuadNumber(Rational(2, 3)));
  return d;
}

QuadNumber piece_width(const FatTraintrackDecomposition& d, const Port& p) {
  const Cut& c = d.cuts()[static_cast<std::size_t>(p.cut)];
  if (p.piece == PieceKind::whole) return c.left + c.right;
  return p.piece == PieceKind::left ? c.left : c.right;
}

}  // namespace

TEST(Surface, ConeAnglesMatchBruteForce) {
  for (const SurfaceInput& in : {square_torus(), regular_octagon(), l_shape(), six_squares()}) {
    const HalfTranslationSurface s = build_surface(in);
    EXPECT_EQ(cone_angles(s), brute_force_cone_angles(in));
  }
}

TEST(Surface, GenusAndGaussBonnet) {
  struct Case {
    SurfaceInput in;
    int genus;
    std::vector<int> k;
  };
  for (const Case& c : {Case{square_torus(), 1, {2}}, Case{regular_octagon(), 2, {6}}, Case{l_shape(), 2, {6}},
                        Case{six_squares(), 2, {3, 3, 3, 3}}}) {
    const HalfTranslationSurface s = build_surface(c.in);
    EXPECT_EQ(s.genus(), c.genus);
    EXPECT_EQ(cone_angles(s), c.k);
    int deficit = 0;
    for (const VertexClass& v : s.vertex_classes()) deficit += v.k - 2;
    EXPECT_EQ(deficit, -2 * s.euler_characteristic());
  }
}

TEST(Surface, Area) {
  EXPECT_EQ(build_surface(l_shape()).area(), QuadNumber(3));
  EXPECT_EQ(build_surface(regular_octagon()).area(), QuadNumber(2) + QuadNumber(2) * QuadNumber::sqrt_of(2));
  EXPECT_EQ(foliation_length(build_surface(six_squares()), {}), QuadNumber(6));
}

TEST(Surface, RejectsBadGluings) {
  SurfaceInput in = square_torus();
  in.gluings[0].to = {0, 1};
  EXPECT_THROW(build_surface(in), ValidationError);
  in = square_torus();
  in.gluings.pop_back();
  EXPECT_THROW(build_surface(in), ValidationError);
  in = square_torus();
  in.gluings[0].kind = GluingKind::flip;
  EXPECT_THROW(build_surface(in), ValidationError);
  in = square_torus();
  std::reverse(in.polygons[0].begin(), in.polygons[0].end());
  EXPECT_THROW(build_surface(in), ValidationError);
  in = square_torus();
  in.marked_singular = {{0, 0}};
  EXPECT_THROW(build_surface(in), ValidationError);
  in = l_shape();
  in.marked_singular = {{0, 4}};
  EXPECT_NO_THROW(build_surface(in));
}

TEST(Surface, StretchComposes) {
  const HalfTranslationSurface s = build_surface(l_shape());
  const HalfTranslationSurface a = stretch_exact(stretch_exact(s, QuadNumber(2)), QuadNumber(3));
  const HalfTranslationSurface b = stretch_exact(s, QuadNumber(6));
  EXPECT_EQ(a.area(), QuadNumber(18));
  EXPECT_EQ(a.polygons(), b.polygons());
  EXPECT_EQ(cone_angles(a), cone_angles(s));
  EXPECT_NEAR(stretch(stretch(s, 0.25), 0.5).area().to_double(), stretch(s, 0.75).area().to_double(), 1e-12);
  EXPECT_EQ(teichmueller_stretch(s, 0.0).area(), s.area());
  EXPECT_NEAR(teichmueller_stretch(s, 1.3).area().to_double(), 3.0, 1e-12);
}

TEST(Decomposition, TorusHasNoSingularities) {
  try {
    (void)traintrack_decomposition(build_surface(square_torus()), golden_direction(), QuadNumber(1));
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_STREQ(e.what(), "no singular points; decomposition undefined");
  }
}

TEST(Decomposition, VerticalSaddleConnection) {
  const HalfTranslationSurface oct = build_surface(regular_octagon());
  try {
    (void)traintrack_decomposition(oct, pt(0, 1), QuadNumber(2));
    FAIL();
  } catch (const SaddleConnectionError& e) {
    EXPECT_TRUE(e.vertical);
    EXPECT_EQ(e.length, QuadNumber(1));
    EXPECT_EQ(e.from_class, 0);
  }
  EXPECT_THROW((void)traintrack_decomposition(build_surface(l_shape()), pt(0, 1), QuadNumber(3)),
               SaddleConnectionError);
}

TEST(Decomposition, GoldenLShape) {
  const FatTraintrackDecomposition& d = golden_l();
  EXPECT_EQ(d.prongs().size(), 6u);
  EXPECT_EQ(d.rectangles().size(), 9u);
  EXPECT_EQ(d.track().branches(), 9);
  EXPECT_EQ(d.track().switches().size(), 6u);
  QuadNumber area(0), heights(0);
  for (const Rectangle& r : d.rectangles()) {
    EXPECT_GT(r.width.sign(), 0);
    EXPECT_GT(r.height.sign(), 0);
    EXPECT_EQ(piece_width(d, r.ends[0]), r.width);
    EXPECT_EQ(piece_width(d, r.ends[1]), r.width);
    area += r.width * r.height;
    heights += r.height;
  }
  EXPECT_EQ(area, QuadNumber(3));
  EXPECT_EQ(heights, QuadNumber(6) * d.radius());
  for (const Switch& s : d.track().switches()) {
    EXPECT_EQ(d.rectangles()[static_cast<std::size_t>(s.in)].width,
              d.rectangles()[static_cast<std::size_t>(s.out[0])].width +
                  d.rectangles()[static_cast<std::size_t>(s.out[1])].width);
  }
}

TEST(Decomposition, SampledLeavesCrossBranches) {
  const FatTraintrackDecomposition& d = golden_l();
  for (const Rectangle& r : d.rectangles()) {
    const Port& p = r.ends[0];
    const Cut& c = d.cuts()[static_cast<std::size_t>(p.cut)];
    const QuadNumber lo = p.piece == PieceKind::right ? QuadNumber(0) : -c.left;
    for (int k = 1; k < 8; ++k) {
      const QuadNumber off = lo + r.width * QuadNumber(Rational(k, 8));
      if (off.sign() == 0) continue;
      EXPECT_EQ(d.follow_leaf(p, off).first, r.ends[1]);
    }
  }
}

TEST(Decomposition, SixSquaresPolygonal) {
  const FatTraintrackDecomposition d =
      traintrack_decomposition(build_surface(six_squares()), golden_direction(), QuadNumber(Rational(2, 3)));
  EXPECT_EQ(d.prongs().size(), 12u);
  EXPECT_EQ(d.rectangles().size(), 18u);
  const PolygonalDecomposition p = polygonal_decomposition(d);
  ASSERT_EQ(p.hexagons.size(), 4u);
  for (const Hexagon& h : p.hexagons) {
    EXPECT_EQ(h.prongs, 3);
    EXPECT_EQ(h.horizontal_edge, QuadNumber(2) * p.min_width / QuadNumber(3));
    EXPECT_EQ(h.vertical_edge, QuadNumber(2) * d.radius());
  }
  for (const PolygonalRectangle& r : p.rectangles) EXPECT_GT(r.width.sign(), 0);
  EXPECT_EQ(p.area(), QuadNumber(6));
}

TEST(Split, MinHeightGrowsAndCarryingIsConsistent) {
  const FatTraintrackDecomposition d0 = golden_l();
  const FatTraintrackDecomposition d1 = split(d0);
  const FatTraintrackDecomposition d2 = split(d1);
  EXPECT_EQ(d1.rectangles().size(), 9u);
  EXPECT_GT(d1.min_height(), d0.min_height());
  EXPECT_GT(d2.min_height(), d1.min_height());
  auto check = [](const FatTraintrackDecomposition& a, const FatTraintrackDecomposition& b) {
    const SplitStep st = carrying_step(a, b);
    for (std::size_t i = 0; i < a.rectangles().size(); ++i) {
      QuadNumber sum(0);
      for (std::size_t j = 0; j < b.rectangles().size(); ++j) {
        sum += QuadNumber(static_cast<int>(st.carrying[i][j])) * b.rectangles()[j].width;
      }
      EXPECT_EQ(sum, a.rectangles()[i].width);
    }
    return st;
  };
  const SplitStep s01 = check(d0, d1);
  const SplitStep s12 = check(d1, d2);
  const SplitStep s02 = check(d0, d2);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      std::int64_t v = 0;
      for (std::size_t k = 0; k < 9; ++k) v += s01.carrying[i][k] * s12.carrying[k][j];
      EXPECT_EQ(v, s02.carrying[i][j]);
    }
  }
  EXPECT_EQ(transfer_weights(s02, d0.widths()), d2.widths());
  // Recomputing from scratch at the split radius gives the same branches.
  const FatTraintrackDecomposition again =
      traintrack_decomposition(build_surface(l_shape()), golden_direction(), d2.radius());
  ASSERT_EQ(again.rectangles().size(), d2.rectangles().size());
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(again.rectangles()[i].ends, d2.rectangles()[i].ends);
    EXPECT_EQ(again.rectangles()[i].height, d2.rectangles()[i].height);
  }
}

TEST(Decomposition, CarriedCurveHolonomy) {
  const FatTraintrackDecomposition& d = golden_l();
  const HalfTranslationSurface& s = d.surface();
  const TrainTrack& t = d.track();
  WeightVector free_values;
  for (int b : free_branches(t)) {
    free_values.push_back(Rational(std::lround(d.widths()[static_cast<std::size_t>(b)].to_double() * 20), 1));
  }
  const IntegralApproximation a = integral_approximation(t, complete_balanced(t, free_values));
  const WeightedMultiloop ml = weights_to_multiloop(t, a.weights);
  ASSERT_FALSE(ml.loops.empty());
  QuadNumber cut_total(0);
  for (const Cut& c : d.cuts()) cut_total = cut_total + c.left + c.right;
  for (const Loop& l : ml.loops) {
    const auto crossings = carried_curve_crossings(d, l.branches);
    ASSERT_FALSE(crossings.empty());
    // Developed displacement: minus the sum of the coordinate jumps.
    Point2 disp{QuadNumber(0), QuadNumber(0)};
    for (const EdgeRef& e : crossings) {
      const EdgeRef f = s.partner(e);
      const auto& P = s.polygons()[static_cast<std::size_t>(e.polygon)];
      const auto& Q = s.polygons()[static_cast<std::size_t>(f.polygon)];
      ASSERT_EQ(s.kind(e), GluingKind::translation);
      disp = disp - (Q[static_cast<std::size_t>((f.edge + 1) % static_cast<int>(Q.size()))] -
                     P[static_cast<std::size_t>(e.edge)]);
    }
    QuadNumber heights(0);
    for (int b : l.branches) heights = heights + d.rectangles()[static_cast<std::size_t>(b)].height;
    EXPECT_TRUE(disp.y == heights || disp.y == -heights) << disp.y.to_double() << " vs " << heights.to_double();
    EXPECT_LE(abs(disp.x).to_double(), cut_total.to_double());
  }
  EXPECT_THROW(carried_curve_crossings(d, {}), ValidationError);
  EXPECT_THROW(carried_curve_crossings(d, {99}), ValidationError);
}
