#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graftlab/error.hpp"
#include "graftlab/exact.hpp"
#include "graftlab/traintracks.hpp"

namespace graftlab {

enum class GluingKind { translation, flip };

struct EdgeRef {
  int polygon = 0;
  int edge = 0;  // edge i runs from vertex i to vertex i + 1

  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct Gluing {
  EdgeRef from;
  EdgeRef to;
  GluingKind kind = GluingKind::translation;
};

struct CornerRef {
  int polygon = 0;
  int vertex = 0;

  friend bool operator==(const CornerRef&, const CornerRef&) = default;
};

// Point of the surface that polygon corners are identified to.
struct VertexClass {
  std::vector<CornerRef> corners;  // in counter-clockwise link order
  int k = 2;                       // cone angle k * pi
  [[nodiscard]] bool singular() const { return k != 2; }
};

struct SurfaceInput {
  std::vector<std::vector<Point2>> polygons;  // counter-clockwise
  std::vector<Gluing> gluings;
  std::vector<CornerRef> marked_singular;     // each must have cone angle >= 3 pi
};

// Euclidean polygons glued along edges by z -> z + c or z -> -z + c.
class HalfTranslationSurface {
 public:
  [[nodiscard]] const std::vector<std::vector<Point2>>& polygons() const { return polygons_; }
  [[nodiscard]] const std::vector<Gluing>& gluings() const { return gluings_; }
  [[nodiscard]] EdgeRef partner(EdgeRef e) const;
  [[nodiscard]] GluingKind kind(EdgeRef e) const;
  [[nodiscard]] const std::vector<VertexClass>& vertex_classes() const { return classes_; }
  [[nodiscard]] int vertex_class_of(CornerRef c) const;
  [[nodiscard]] std::vector<int> singular_classes() const;
  [[nodiscard]] int euler_characteristic() const { return euler_; }
  [[nodiscard]] int genus() const { return (2 - euler_) / 2; }
  [[nodiscard]] const QuadNumber& area() const { return area_; }
  [[nodiscard]] const std::vector<CornerRef>& marked_singular() const { return marked_; }

 private:
  friend HalfTranslationSurface build_surface(const SurfaceInput& in);

  std::vector<std::vector<Point2>> polygons_;
  std::vector<Gluing> gluings_;
  std::vector<std::vector<EdgeRef>> partner_;
  std::vector<std::vector<GluingKind>> kind_;
  std::vector<std::vector<int>> class_of_;
  std::vector<VertexClass> classes_;
  std::vector<CornerRef> marked_;
  int euler_ = 0;
  QuadNumber area_;
};

// Validates the gluing table, computes vertex classes, cone angles, genus and
// area. Throws ValidationError naming the offending edge or vertex.
HalfTranslationSurface build_surface(const SurfaceInput& in);

// Measured foliation in a fixed direction with Euclidean transverse measure.
struct LinearFoliation {
  Point2 direction{QuadNumber(0), QuadNumber(1)};
};

// Total transverse measure integrated over the surface, i.e. the area.
QuadNumber foliation_length(const HalfTranslationSurface& s, const LinearFoliation& v);

// Horizontal coordinates times `factor`, vertical ones unchanged.
HalfTranslationSurface stretch_exact(const HalfTranslationSurface& s, const QuadNumber& factor);
// Horizontal coordinates times exp(t); the factor is the exact binary value of
// the double exp(t).
HalfTranslationSurface stretch(const HalfTranslationSurface& s, double t);
// Teichmueller-disc normalization: x times exp(t/2), y times exp(-t/2).
HalfTranslationSurface teichmueller_stretch(const HalfTranslationSurface& s, double t);
// Linear map (x, y) -> (x - c y, y) taking `direction` to the vertical.
HalfTranslationSurface shear_to_vertical(const HalfTranslationSurface& s, const Point2& direction);

// Vertical prong from a singular point, followed for the radius.
struct Prong {
  int vertex_class = 0;
  int index = 0;  // position among the prongs of that point
  int end_polygon = 0;
  Point2 end;     // tip, in coordinates of end_polygon
};

enum class PieceKind { whole, left, right };

// A horizontal edge segment of a branch: one side of one cut.
struct Port {
  int cut = 0;
  int side = 1;  // +1: side away from the prong (large), -1: prong side (small)
  PieceKind piece = PieceKind::whole;

  friend auto operator<=>(const Port&, const Port&) = default;
};

struct Rectangle {
  QuadNumber width;
  QuadNumber height;
  std::array<Port, 2> ends;
};

// Horizontal cut through the tip of prong i; offsets run from -left to right.
struct Cut {
  QuadNumber left;
  QuadNumber right;
  int left_hit_prong = 0;
  int right_hit_prong = 0;
};

// Fat train track of the surface minus the vertical tripods of one radius.
// The direction is made vertical by a shear, see shear_to_vertical.
class FatTraintrackDecomposition {
 public:
  [[nodiscard]] const HalfTranslationSurface& surface() const { return *surface_; }
  [[nodiscard]] const Point2& direction() const { return direction_; }
  [[nodiscard]] const QuadNumber& radius() const { return radius_; }
  [[nodiscard]] const std::vector<Prong>& prongs() const { return prongs_; }
  [[nodiscard]] const std::vector<Cut>& cuts() const { return cuts_; }
  [[nodiscard]] const std::vector<Rectangle>& rectangles() const { return rects_; }
  [[nodiscard]] const TrainTrack& track() const { return *track_; }
  // Rectangle widths: the weights of the carried vertical foliation.
  [[nodiscard]] QuadWeights widths() const;
  [[nodiscard]] QuadNumber min_height() const;
  [[nodiscard]] QuadNumber min_width() const;
  // Index of the rectangle containing the point (polygon coordinates of the
  // sheared surface). Throws GeometryError on the tripods or the cuts.
  [[nodiscard]] int locate(int polygon, const Point2& p) const;
  // Opposite end of the vertical leaf leaving `port` at `offset`.
  [[nodiscard]] std::pair<Port, QuadNumber> follow_leaf(const Port& port, const QuadNumber& offset) const;

  struct Data;

 private:
  friend FatTraintrackDecomposition traintrack_decomposition(const HalfTranslationSurface&, const Point2&,
                                                             const QuadNumber&);
  friend FatTraintrackDecomposition decompose_sheared(std::shared_ptr<const HalfTranslationSurface>,
                                                      const Point2&, const QuadNumber&);
  friend SplitStep carrying_step(const FatTraintrackDecomposition&, const FatTraintrackDecomposition&);
  friend FatTraintrackDecomposition next_chamber(const FatTraintrackDecomposition&);
  friend std::vector<EdgeRef> carried_curve_crossings(const FatTraintrackDecomposition&, const std::vector<int>&);

  std::shared_ptr<const HalfTranslationSurface> surface_;
  Point2 direction_;
  QuadNumber radius_;
  std::vector<Prong> prongs_;
  std::vector<Cut> cuts_;
  std::vector<Rectangle> rects_;
  std::shared_ptr<const TrainTrack> track_;
  std::shared_ptr<const Data> data_;
};

// Raised when a leaf runs into a singular point within the search range.
class SaddleConnectionError : public GeometryError {
 public:
  SaddleConnectionError(const std::string& what, int from_class, int to_class, QuadNumber length,
                        bool vertical);
  int from_class;
  int to_class;
  QuadNumber length;
  bool vertical;
};

// Throws GeometryError("no singular points; decomposition undefined") on
// surfaces without cone points, SaddleConnectionError when a prong or cut runs
// into a singular point, GeometryError for non-generic radii.
FatTraintrackDecomposition traintrack_decomposition(const HalfTranslationSurface& s, const Point2& direction,
                                                    const QuadNumber& radius);

// Advances the radius past the next combinatorial change, to the radius in
// the following chamber that maximizes the shortest branch height. Radii where
// a tip sits on a singular horizontal leaf are skipped.
FatTraintrackDecomposition next_chamber(const FatTraintrackDecomposition& d);

// Repeats next_chamber until the shortest branch height is strictly larger
// than in d. Throws SaddleConnectionError on a vertical saddle connection.
FatTraintrackDecomposition split(const FatTraintrackDecomposition& d);

// Carrying matrix from `coarse` to `fine` (fine has the larger radius).
SplitStep carrying_step(const FatTraintrackDecomposition& coarse, const FatTraintrackDecomposition& fine);

// Polygon edges crossed, in order, by a closed curve running once through the
// given cyclic branch sequence of d's track: up each branch from the middle of
// its entry end, then along the cut to the middle of the next entry end. Each
// entry is the edge being left. Throws ValidationError if consecutive branches
// do not meet at a switch.
std::vector<EdgeRef> carried_curve_crossings(const FatTraintrackDecomposition& d, const std::vector<int>& branches);

struct Hexagon {
  int vertex_class = 0;
  int prongs = 3;                     // a 2k-gon around a k-prong point
  QuadNumber horizontal_edge;         // 2 m / 3
  QuadNumber vertical_edge;           // 2 r, along two prongs
  QuadNumber area;
};

struct PolygonalRectangle {
  int branch = 0;
  QuadNumber width;   // branch width minus 2 m / 3
  QuadNumber height;
};

struct PolygonalDecomposition {
  QuadNumber min_width;  // m
  std::vector<Hexagon> hexagons;
  std::vector<PolygonalRectangle> rectangles;
  [[nodiscard]] QuadNumber area() const;
};

PolygonalDecomposition polygonal_decomposition(const FatTraintrackDecomposition& d);

}  // namespace graftlab
