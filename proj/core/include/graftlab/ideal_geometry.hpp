#pragma once

#include <array>
#include <optional>
#include <vector>

#include "graftlab/moebius.hpp"

namespace graftlab {

// Hyperbolic ideal triangle. Every computation happens in the standard chart
// where the vertices sit at (inf, 0, 1) and is conjugated back afterwards.
class IdealTriangle {
 public:
  // Throws GeometryError unless the three vertices are pairwise distinct.
  explicit IdealTriangle(const std::array<BoundaryPoint, 3>& vertices);

  [[nodiscard]] const std::array<BoundaryPoint, 3>& vertices() const { return vertices_; }

  // Real orientation-preserving map sending the triangle to the standard one.
  [[nodiscard]] const MoebiusMap& to_standard() const { return to_standard_; }
  [[nodiscard]] const MoebiusMap& from_standard() const { return from_standard_; }

  // Symmetry of the standard triangle that moves vertex i to infinity.
  [[nodiscard]] MoebiusMap vertex_chart(int i) const;

  [[nodiscard]] bool contains(const HPoint& p, double tol = 1e-12) const;

 private:
  std::array<BoundaryPoint, 3> vertices_;
  MoebiusMap to_standard_;
  MoebiusMap from_standard_;
  std::array<ExtComplex, 3> chart_position_;
};

// Horocyclic leaf centred at `vertex`, `u` hyperbolic units past the tangency
// horocycle. `base_length` is the leaf length at u = 0.
struct HorocyclicLeafParam {
  int vertex = 0;
  double u = 0.0;
  double base_length = 1.0;
};

// l0 * exp(-u). Throws GeometryError for u < 0 (outside the lamination support).
double leaf_length(const HorocyclicLeafParam& p);

struct LeafArc {
  Horocycle horocycle;
  HPoint start;
  HPoint end;
  double length = 0.0;
};

struct HorocyclicLamination {
  // Pairwise tangent horocycles bounding the central region.
  std::array<Horocycle, 3> tangency_horocycles;
  // tangency_points[k] lies on the side opposite to vertex k.
  std::array<HPoint, 3> tangency_points;
  // Hyperbolic length of the central horocyclic edge facing each vertex.
  std::array<double, 3> central_edge_lengths;
};

HorocyclicLamination horocyclic_lamination(const IdealTriangle& t);

// Endpoints and length of a leaf; the leaf is orthogonal to both sides it meets.
LeafArc horocyclic_leaf(const IdealTriangle& t, const HorocyclicLeafParam& p);

// Points of a leaf, equally spaced in arc length.
std::vector<HPoint> sample_leaf(const IdealTriangle& t, const HorocyclicLeafParam& p, int n);

// Coordinate on the collapsed tripod. `prong` is empty at the central vertex.
struct TripodCoord {
  std::optional<int> prong;
  double u = 0.0;

  friend bool operator==(const TripodCoord&, const TripodCoord&) = default;
};

// Horocyclic region membership of a point: the vertex whose horoball it lies in,
// its depth u, and its arc-length position along the leaf.
struct LeafLocation {
  std::optional<int> vertex;
  double u = 0.0;
  double arc_position = 0.0;
};

LeafLocation locate(const IdealTriangle& t, const HPoint& p);

// Collapses every horocyclic leaf to a point and the central region to the
// tripod vertex. Throws GeometryError if p is outside the triangle.
TripodCoord collapse_to_tripod(const IdealTriangle& t, const HPoint& p);

// Leaf of the mostly-horocyclic foliation. Beyond `blend_depth` it is the
// horocyclic leaf; below it the leaf is the pointwise linear blend between the
// horocyclic arc and the geodesic chord joining its endpoints, with weight
// 1 - u / blend_depth on the chord.
std::vector<HPoint> sample_mostly_horocyclic_leaf(const IdealTriangle& t, int vertex, double u,
                                                  int n, double blend_depth = 0.5);

// Leaf of the mostly-straight foliation parallel to side k (joining vertices k
// and k+1). `offset` in (0, 1/2) is the horizontal position of the leaf inside
// the horoball of vertex k, measured from side k in the vertex chart. Inside the
// horoballs the leaf is a geodesic ray; across the central region it is the
// straight chord between the two entry points in the standard chart.
std::vector<HPoint> sample_mostly_straight_leaf(const IdealTriangle& t, int side, double offset,
                                                double depth, int n_per_piece);

// Rectangle in the upper half-plane between the vertical geodesics x = x0 and
// x = x0 + width and the horocycles y = y0 and y = y0 * exp(height). Its
// horizontal leaves are horocyclic arcs centred at infinity.
struct HypRectangle {
  double x0 = 0.0;
  double y0 = 1.0;
  double width = 1.0;   // Euclidean width delta; the bottom leaf has length width / y0
  double height = 1.0;  // hyperbolic length of both vertical edges

  [[nodiscard]] double vertical_edge_length() const { return height; }
  // Leaf at hyperbolic height v in [0, height] above the bottom edge.
  [[nodiscard]] double leaf_length_at(double v) const;
  // Leaf through the horizontal line at Euclidean height y.
  [[nodiscard]] double leaf_length_at_height(double y) const { return width / y; }
  [[nodiscard]] HPoint point(double arc_fraction, double v) const;
};

// `base` is the lower-left corner. Throws GeometryError for nonpositive sizes.
HypRectangle build_hyp_rectangle(const HPoint& base, double height, double width);

}  // namespace graftlab
