#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "graftlab/moebius.hpp"

namespace graftlab {

// q(z) dz^2 with polynomial q, coefficients in ascending powers.
struct QuadraticDifferential {
  std::vector<Complex> coeffs;

  [[nodiscard]] Complex operator()(Complex z) const;
  // Roots of q, polished by Newton's method. Empty for nonzero constants;
  // throws ValidationError for q = 0.
  [[nodiscard]] std::vector<Complex> zeros() const;
  [[nodiscard]] bool is_zero() const;
};

// Polyline in the plane.
struct Path {
  std::vector<Complex> points;

  static Path segment(Complex a, Complex b, int pieces = 1);
  // Vertices on the circle |z - c| = r from angle t0 to t1.
  static Path arc(Complex c, double r, double t0, double t1, int pieces);
  // Appends p, dropping its first point when it repeats the current end.
  Path& append(const Path& p);
};

// Two solutions of w'' + q w / 2 = 0 and their derivatives at a point.
struct Frame {
  Complex w1{1.0, 0.0};
  Complex w2{0.0, 0.0};
  Complex dw1{0.0, 0.0};
  Complex dw2{1.0, 0.0};

  // w1 = 1, w1' = 0, w2 = 0, w2' = 1 at the base point.
  static Frame identity() { return {}; }
  // Frame of the developing map z -> z near z0.
  static Frame affine(Complex z0) { return {z0, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}}; }
  // w1' w2 - w1 w2'; f' = wronskian / w2^2.
  [[nodiscard]] Complex wronskian() const { return dw1 * w2 - w1 * dw2; }
  [[nodiscard]] ExtComplex developing_value() const;
};

struct DevSample {
  Complex z;
  Frame frame;      // divided by exp(log_scale)
  double log_scale = 0.0;
  ExtComplex f;
};

struct DevelopingSolution {
  std::vector<DevSample> samples;  // one per path vertex
  Complex wronskian0;
  double max_wronskian_drift = 0.0;  // relative
  int chart_switches = 0;            // changes between the charts f and 1/f
};

struct IntegrationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double zero_margin = 1e-6;
};

// Integrates along the polyline. Throws GeometryError when the path passes
// within zero_margin of a zero of q and NumericalError on step failure.
DevelopingSolution integrate_dev(const QuadraticDifferential& q, const Path& path, const Frame& init,
                                 const IntegrationOptions& opt = {});

// Schwarzian derivative of samples f(z0 + k h), k = 0..n-1, by fourth-order
// central differences (error O(h^4)). Returns n - 6 values for k = 3..n-4.
// Windows with |f| > 1 use 1/f. Throws NumericalError where f' vanishes.
std::vector<Complex> schwarzian(const std::vector<ExtComplex>& f, Complex h);

// Row-major samples on a square grid with spacing h.
struct GridSamples {
  Complex origin;
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<ExtComplex> values;
};

// Schwarzian along grid rows; the result has nx - 6 columns.
GridSamples schwarzian_grid(const GridSamples& g);

// Projectivized monodromy of the solution frame along the path: the Moebius
// map taking the initial branch of f to its continuation.
MoebiusMap monodromy(const QuadraticDifferential& q, const Path& path, const IntegrationOptions& opt = {});

// Loop words: lowercase letters are generators, uppercase their inverses.
struct HolonomyRep {
  std::map<char, MoebiusMap> generators;

  [[nodiscard]] MoebiusMap operator()(std::string_view word) const;
};

// Sector k of z dz^2, centred on the ray at angle 2 pi k / 3.
struct AntiStokesSector {
  int index = 0;

  [[nodiscard]] double center() const;
  [[nodiscard]] double lower() const { return center() - kHalfWidth; }
  [[nodiscard]] double upper() const { return center() + kHalfWidth; }
  [[nodiscard]] bool contains(Complex z) const;

  static constexpr double kHalfWidth = 1.0471975511965976;  // pi / 3
};

// exp(-sqrt 2 u^{3/2}) with u = z rotated into the sector's central ray and
// the principal power; the decaying branch in that sector.
Complex model_function(const AntiStokesSector& s, Complex z);

struct ModelCompareOptions {
  double start_radius = 16.0;   // recessive solution is set up here
  double anchor_radius = 12.0;  // normalization anchors
  double anchor_spread = 0.05;  // angular offsets of the side anchors
  int arc_points = 64;          // per half of the middle third
  double fit_tol = 1e-2;        // relative residual of the scale fit
  IntegrationOptions ode{1e-12, 1e-300, 1e-6};
};

struct ModelCompareResult {
  double sup_error = 0.0;
  Complex scale;         // fitted normalization
  double fit_residual = 0.0;
};

// Developing map of q = -(9/4) z, normalized in the sector, compared with
// the model on the middle third of the arc |z| = R. Throws
// NumericalError("normalization failed") if the scale fit is poor.
ModelCompareResult model_compare(double R, const AntiStokesSector& s, int m, const ModelCompareOptions& opt = {});

}  // namespace graftlab
