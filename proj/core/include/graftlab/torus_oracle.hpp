#pragma once

#include <complex>
#include <vector>

namespace graftlab {

// Marked flat torus C / (Z + tau Z), up to scale.
struct TorusPoint {
  std::complex<double> tau{0.0, 1.0};

  // Throws ValidationError unless Im tau > 0 and tau is finite.
  static TorusPoint make(std::complex<double> tau);
};

// Curve class p [1] + q [tau].
struct SlopeCurve {
  long p = 1;
  long q = 0;

  // Throws ValidationError unless gcd(p, q) = 1.
  static SlopeCurve make(long p, long q);
  friend bool operator==(const SlopeCurve&, const SlopeCurve&) = default;
};

struct Sl2z {
  long a = 1, b = 0, c = 0, d = 1;

  // Throws ValidationError unless ad - bc = 1.
  static Sl2z make(long a, long b, long c, long d);
};

// Change of marking: tau -> (a tau + b) / (c tau + d).
TorusPoint act(const Sl2z& m, const TorusPoint& t);
// The same class written in the new marking.
SlopeCurve act(const Sl2z& m, const SlopeCurve& c);

// Basis (p, q; r, s) with ps - qr = 1, the first row being c.
Sl2z completing_basis(const SlopeCurve& c);

// Modulus of the torus in the marking where c is the unit horizontal generator.
std::complex<double> tau_in_frame(const TorusPoint& t, const SlopeCurve& c);
TorusPoint from_frame(std::complex<double> tau_c, const SlopeCurve& c);

// Half the hyperbolic distance in the upper half-plane.
double teich_distance(const TorusPoint& a, const TorusPoint& b);

// Flat length of c once the torus is scaled to unit area.
double flat_length(const TorusPoint& t, const SlopeCurve& c);

// Inserts a cylinder along c of height w, measured in the metric where c has
// unit length. Throws ValidationError for w < 0.
TorusPoint graft_torus(const TorusPoint& t, const SlopeCurve& c, double w);

// Unit-speed Teichmueller geodesic along which the curves in class c shrink.
TorusPoint teich_ray(const TorusPoint& t, const SlopeCurve& c, double s);

// Height e^{2s} / d in the unit-area metric with d = flat_length(t, c),
// converted to the unit-circumference normalization of graft_torus.
double matched_weight(const TorusPoint& t, const SlopeCurve& c, double s);

double ray_gap(const TorusPoint& t, const SlopeCurve& c, double s);

struct RayComparisonRow {
  double s = 0.0;
  TorusPoint teich;
  TorusPoint graft;
  double gap = 0.0;
};

struct RayComparisonReport {
  double d = 0.0;
  std::vector<RayComparisonRow> rows;
  // Smallest grid value after which the gap is strictly decreasing, or NaN.
  double decreasing_from = 0.0;
};

RayComparisonReport ray_compare(const TorusPoint& t, const SlopeCurve& c, const std::vector<double>& s_grid);

}  // namespace graftlab
