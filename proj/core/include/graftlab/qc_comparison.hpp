#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "graftlab/ideal_geometry.hpp"

namespace graftlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Conformal density of the source chart: 1 for Euclidean and Thurston
// cylinder cells, 1/y in the upper half-plane.
enum class MeshMetric { euclidean, upper_half_plane, thurston_cylinder };

const char* to_string(MeshMetric m);

// Structured quad grid with (nx + 1) * (ny + 1) vertices, index j * (nx + 1) + i.
// Targets are Euclidean coordinates.
struct GridPiece {
  std::string name;
  int nx = 0;
  int ny = 0;
  MeshMetric metric = MeshMetric::euclidean;
  std::vector<Vec2> source;
  std::vector<Vec2> target;

  [[nodiscard]] int vertex(int i, int j) const { return j * (nx + 1) + i; }
  [[nodiscard]] int cells() const { return nx * ny; }
};

// (s, t) in [0, 1]^2 to source and target coordinates.
using PieceParam = std::function<Vec2(double s, double t)>;

GridPiece make_piece(std::string name, int nx, int ny, MeshMetric metric, const PieceParam& source,
                     const PieceParam& target);

struct MeshMap {
  std::vector<GridPiece> pieces;

  [[nodiscard]] int cells() const;
};

struct PieceDilatation {
  std::string name;
  double sup_K = 1.0;
  double mean_K = 1.0;
  double min_stretch = 0.0;
  double max_stretch = 0.0;
};

struct DilatationReport {
  std::vector<double> K;  // per cell, pieces in order
  double sup_K = 1.0;
  double mean_K = 1.0;
  double min_stretch = 0.0;  // smallest singular value in the metrics
  double max_stretch = 0.0;
  std::vector<PieceDilatation> pieces;
};

// Bilinear partials at each cell centre. Throws ValidationError for a
// degenerate source cell and GeometryError naming an orientation-reversing
// cell.
DilatationReport dilatation(const MeshMap& m);

// outer after inner; outer's source vertices must coincide with inner's
// targets (within tol). Throws ValidationError otherwise.
MeshMap compose(const MeshMap& outer, const MeshMap& inner, double tol = 1e-9);

enum class Side { left, right, bottom, top };

struct Seam {
  int piece_a = 0;
  Side side_a = Side::right;
  int piece_b = 0;
  Side side_b = Side::left;
  bool reversed = false;
};

// Checks that the target traces agree along each seam and concatenates the
// pieces. Throws GeometryError naming the worst seam vertex beyond tol.
MeshMap assemble_piecewise(const std::vector<MeshMap>& maps, const std::vector<Seam>& seams, double tol = 1e-9);

// Map from a grafted hyperbolic rectangle to the Euclidean rectangle of the
// same height and width target_width. The source is r grafted along its
// middle vertical leaf by a Euclidean strip of width target_width, so every
// horizontal leaf has Thurston length (leaf length in r) + target_width. The
// map keeps the height and is linear along each leaf by arc length.
// Pieces: left hyperbolic half, strip, right hyperbolic half.
MeshMap straighten_rectangle(const HypRectangle& r, double target_width, int n = 64);

struct SkeletonEdge {
  int from = 0;
  int to = 0;
  double length = 0.0;
};

struct OneSkeleton {
  int vertices = 0;
  std::vector<SkeletonEdge> edges;
};

struct OneSkeletonMap {
  std::vector<double> ratios;  // target length / source length per edge
  double min_ratio = 0.0;
  double max_ratio = 0.0;

  // Image of the point at arc length t on edge e.
  [[nodiscard]] double map_point(int edge, double t) const;
};

// Edge-wise linear map between skeletons with the same labelled incidence.
// Throws ValidationError if the skeletons are not isomorphic as labelled.
OneSkeletonMap one_skeleton_map(const OneSkeleton& source, const OneSkeleton& target);

// Flat hexagon around a 3-prong cone point, made of three prong rectangles
// [-m/3, m/3] x [0, r]. The inner part y < central is the central piece.
struct FlatHexagon {
  double m = 1.0;
  double r = 1.0;
  double central = 0.0;
};

// Truncated ideal triangle grafted along its sides: three cusp rectangles of
// depth `depth` (bottom leaf length 1) with a strip of width `graft` inside.
// Depths below `central_depth` form the central piece.
struct GraftedHexagon {
  double depth = 1.0;
  double graft = 1.0;
  double central_depth = 0.0;
};

struct HexagonMapResult {
  MeshMap map;
  DilatationReport report;
};

// Per prong: the central slice is filled by the discrete harmonic extension
// of its edge-wise linear boundary map, the outer slice is straightened as in
// straighten_rectangle. Throws ValidationError on mismatched pieces.
HexagonMapResult hexagon_map(const GraftedHexagon& source, const FlatHexagon& target, int n = 64);

}  // namespace graftlab
