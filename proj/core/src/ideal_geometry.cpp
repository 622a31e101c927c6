#include "graftlab/ideal_geometry.hpp"

#include <cmath>

#include "graftlab/error.hpp"

namespace graftlab {

namespace {

// Order-3 symmetry of the standard triangle: inf -> 0 -> 1 -> inf.
const MoebiusMap& rotation() {
  static const MoebiusMap r{0.0, 1.0, -1.0, 1.0};
  return r;
}

bool same_point(const BoundaryPoint& a, const BoundaryPoint& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.x == b.x;
}

MoebiusMap real_representative(const MoebiusMap& m) {
  // Pick the entry of largest modulus and divide its phase out.
  Complex pivot = m.a();
  for (Complex e : {m.b(), m.c(), m.d()}) {
    if (std::abs(e) > std::abs(pivot)) pivot = e;
  }
  const Complex phase = pivot / std::abs(pivot);
  return {(m.a() / phase).real(), (m.b() / phase).real(), (m.c() / phase).real(),
          (m.d() / phase).real()};
}

ExtComplex to_chart(const MoebiusMap& m, const HPoint& p) { return m.apply(p.to_complex()); }

HPoint from_chart(const MoebiusMap& m, Complex z) {
  const Complex v = m.apply(z).value();
  return HPoint::make(v.real(), std::abs(v.imag()));
}

}  // namespace

IdealTriangle::IdealTriangle(const std::array<BoundaryPoint, 3>& vertices)
    : vertices_(vertices), to_standard_(MoebiusMap::identity()), from_standard_(MoebiusMap::identity()) {
  for (int i = 0; i < 3; ++i) {
    if (same_point(vertices[i], vertices[(i + 1) % 3])) {
      throw GeometryError("ideal triangle vertices must be pairwise distinct");
    }
  }
  // Orientation-preserving normalization: one of the two orderings of (0, 1)
  // keeps the upper half-plane.
  const std::array<ExtComplex, 3> src{vertices[0].to_ext(), vertices[1].to_ext(),
                                      vertices[2].to_ext()};
  chart_position_ = {ExtComplex::infinity(), 0.0, 1.0};
  to_standard_ = MoebiusMap::from_three_points(src, chart_position_);
  if (to_standard_.apply(Complex(0.0, 1.0)).value().imag() < 0.0) {
    chart_position_ = {ExtComplex::infinity(), 1.0, 0.0};
    to_standard_ = MoebiusMap::from_three_points(src, chart_position_);
  }
  // Entries of a real map may come out as a common imaginary multiple after
  // det normalization; rebuild from the real ratios.
  to_standard_ = real_representative(to_standard_);
  from_standard_ = to_standard_.inverse();
}

MoebiusMap IdealTriangle::vertex_chart(int i) const {
  const ExtComplex p = chart_position_.at(static_cast<std::size_t>(i));
  if (p.is_infinite()) return MoebiusMap::identity();
  if (p.value() == Complex(0.0, 0.0)) return rotation().inverse();
  return rotation();
}

bool IdealTriangle::contains(const HPoint& p, double tol) const {
  const Complex z = to_chart(to_standard_, p).value();
  return z.real() >= -tol && z.real() <= 1.0 + tol && std::abs(z - 0.5) >= 0.5 - tol;
}

double leaf_length(const HorocyclicLeafParam& p) {
  if (p.u < 0.0) throw GeometryError("leaf parameter u < 0 lies outside the horocyclic lamination");
  return p.base_length * std::exp(-p.u);
}

HorocyclicLamination horocyclic_lamination(const IdealTriangle& t) {
  HorocyclicLamination lam;
  const MoebiusMap& back = t.from_standard();
  for (int k = 0; k < 3; ++k) {
    const MoebiusMap chart_inv = t.vertex_chart(k).inverse();
    const MoebiusMap to_world = back * chart_inv;
    // In the chart of vertex k, the tangency horocycle is y = 1.
    const HPoint a = from_chart(to_world, {0.0, 1.0});
    const BoundaryPoint center = t.vertices()[static_cast<std::size_t>(k)];
    lam.tangency_horocycles[static_cast<std::size_t>(k)] = horocycle_at(center, a);
    lam.central_edge_lengths[static_cast<std::size_t>(k)] = 1.0;
  }
  // The chart of vertex 0 has the other two vertices at 0 and 1 (in some order);
  // the tangency point between their horocycles is (1/2, 1/2) and the other two
  // are (0, 1) and (1, 1).
  for (int k = 0; k < 3; ++k) {
    const MoebiusMap to_world = back * t.vertex_chart(k).inverse();
    // Opposite side of vertex k is the semicircle over [0, 1] in its chart.
    lam.tangency_points[static_cast<std::size_t>(k)] = from_chart(to_world, {0.5, 0.5});
  }
  return lam;
}

LeafArc horocyclic_leaf(const IdealTriangle& t, const HorocyclicLeafParam& p) {
  const double len = leaf_length(p);
  const MoebiusMap to_world = t.from_standard() * t.vertex_chart(p.vertex).inverse();
  const double y = std::exp(p.u);
  LeafArc arc;
  arc.start = from_chart(to_world, {0.0, y});
  arc.end = from_chart(to_world, {1.0, y});
  arc.horocycle = horocycle_at(t.vertices()[static_cast<std::size_t>(p.vertex)], arc.start);
  arc.length = len;
  return arc;
}

std::vector<HPoint> sample_leaf(const IdealTriangle& t, const HorocyclicLeafParam& p, int n) {
  if (n < 2) throw GeometryError("sample_leaf needs at least two samples");
  (void)leaf_length(p);
  const MoebiusMap to_world = t.from_standard() * t.vertex_chart(p.vertex).inverse();
  const double y = std::exp(p.u);
  std::vector<HPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    out.push_back(from_chart(to_world, {x, y}));
  }
  return out;
}

LeafLocation locate(const IdealTriangle& t, const HPoint& p) {
  if (!t.contains(p, 1e-12)) throw GeometryError("point lies outside the ideal triangle");
  const ExtComplex s = to_chart(t.to_standard(), p);
  for (int k = 0; k < 3; ++k) {
    const Complex z = t.vertex_chart(k).apply(s).value();
    if (z.imag() >= 1.0) {
      return {k, std::log(z.imag()), z.real() / z.imag()};
    }
  }
  return {};
}

TripodCoord collapse_to_tripod(const IdealTriangle& t, const HPoint& p) {
  const LeafLocation loc = locate(t, p);
  if (!loc.vertex || loc.u == 0.0) return {};
  return {loc.vertex, loc.u};
}

std::vector<HPoint> sample_mostly_horocyclic_leaf(const IdealTriangle& t, int vertex, double u,
                                                  int n, double blend_depth) {
  if (u < 0.0) throw GeometryError("leaf parameter u < 0 lies outside the lamination support");
  if (n < 2) throw GeometryError("need at least two samples");
  const MoebiusMap to_world = t.from_standard() * t.vertex_chart(vertex).inverse();
  const double y = std::exp(u);
  const double w = blend_depth > 0.0 ? std::max(0.0, 1.0 - u / blend_depth) : 0.0;
  // Geodesic through (0, y) and (1, y): semicircle centred at 1/2.
  const double r2 = 0.25 + y * y;
  std::vector<HPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    const double chord = std::sqrt(r2 - (x - 0.5) * (x - 0.5));
    out.push_back(from_chart(to_world, {x, (1.0 - w) * y + w * chord}));
  }
  return out;
}

std::vector<HPoint> sample_mostly_straight_leaf(const IdealTriangle& t, int side, double offset,
                                                double depth, int n_per_piece) {
  if (!(offset > 0.0 && offset < 0.5)) throw GeometryError("offset must lie in (0, 1/2)");
  if (n_per_piece < 2) throw GeometryError("need at least two samples per piece");
  const int a = side % 3;
  const int b = (side + 1) % 3;
  // In the chart of vertex a, side (a, a+1) is one of the verticals x = 0 or x = 1.
  auto side_x = [&](int vertex, int other) {
    const Complex z = t.vertex_chart(vertex).apply(t.to_standard().apply(t.vertices()[static_cast<std::size_t>(other)].to_ext())).value();
    return z.real();
  };
  const double xa = side_x(a, b);
  const double xb = side_x(b, a);
  const double pa = xa == 0.0 ? offset : 1.0 - offset;
  const double pb = xb == 0.0 ? offset : 1.0 - offset;
  const MoebiusMap wa = t.from_standard() * t.vertex_chart(a).inverse();
  const MoebiusMap wb = t.from_standard() * t.vertex_chart(b).inverse();
  const double ytop = std::exp(depth);

  std::vector<HPoint> out;
  for (int i = 0; i < n_per_piece; ++i) {
    const double y = ytop + (1.0 - ytop) * i / (n_per_piece - 1);
    out.push_back(from_chart(wa, {pa, y}));
  }
  // Chord across the central region in the standard chart.
  const Complex ea = t.to_standard().apply(out.back().to_complex()).value();
  const Complex eb = t.to_standard().apply(from_chart(wb, {pb, 1.0}).to_complex()).value();
  for (int i = 1; i < n_per_piece - 1; ++i) {
    const double s = static_cast<double>(i) / (n_per_piece - 1);
    out.push_back(from_chart(t.from_standard(), ea + s * (eb - ea)));
  }
  for (int i = 0; i < n_per_piece; ++i) {
    const double y = 1.0 + (ytop - 1.0) * i / (n_per_piece - 1);
    out.push_back(from_chart(wb, {pb, y}));
  }
  return out;
}

double HypRectangle::leaf_length_at(double v) const { return width / (y0 * std::exp(v)); }

HPoint HypRectangle::point(double arc_fraction, double v) const {
  return HPoint::make(x0 + arc_fraction * width, y0 * std::exp(v));
}

HypRectangle build_hyp_rectangle(const HPoint& base, double height, double width) {
  if (!(height > 0.0) || !(width > 0.0)) {
    throw GeometryError("hyperbolic rectangle needs positive height and width");
  }
  return {base.x, base.y, width, height};
}

}  // namespace graftlab
