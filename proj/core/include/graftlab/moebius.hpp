#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>

namespace graftlab {

using Complex = std::complex<double>;

// A point of the Riemann sphere. Infinity is an explicit state, never a
// large finite value.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  constexpr ExtComplex(Complex z) : z_(z) {}  // NOLINT(google-explicit-constructor)
  constexpr ExtComplex(double x) : z_(x, 0.0) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtComplex infinity() {
    ExtComplex p;
    p.inf_ = true;
    return p;
  }

  [[nodiscard]] constexpr bool is_infinite() const { return inf_; }
  // Precondition: !is_infinite().
  [[nodiscard]] Complex value() const;

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.z_ == b.z_);
  }

 private:
  Complex z_{0.0, 0.0};
  bool inf_ = false;
};

std::ostream& operator<<(std::ostream& os, const ExtComplex& p);

// Chordal distance on the unit sphere; handles infinity.
double chordal_distance(const ExtComplex& a, const ExtComplex& b);

enum class MoebiusKind { elliptic, parabolic, hyperbolic, loxodromic };

const char* to_string(MoebiusKind k);

struct Classification {
  MoebiusKind kind;
  // Real part of the complex translation length; zero unless hyperbolic or loxodromic.
  double translation_length;
};

// Element of PSL(2, C) stored with det = 1. Entries are fixed up to a common
// sign; equality is always projective.
class MoebiusMap {
 public:
  // Throws GeometryError when ad - bc vanishes (relative to the entry scale).
  MoebiusMap(Complex a, Complex b, Complex c, Complex d);

  static MoebiusMap identity();
  static MoebiusMap diagonal(Complex lambda);  // z -> lambda^2 z
  static MoebiusMap translation(Complex t);    // z -> z + t
  // The unique map sending z1, z2, z3 to w1, w2, w3 (all pairwise distinct).
  static MoebiusMap from_three_points(const std::array<ExtComplex, 3>& z,
                                      const std::array<ExtComplex, 3>& w);

  [[nodiscard]] Complex a() const { return a_; }
  [[nodiscard]] Complex b() const { return b_; }
  [[nodiscard]] Complex c() const { return c_; }
  [[nodiscard]] Complex d() const { return d_; }

  [[nodiscard]] ExtComplex apply(const ExtComplex& z) const;
  [[nodiscard]] MoebiusMap inverse() const;
  [[nodiscard]] Complex trace() const { return a_ + d_; }
  [[nodiscard]] bool is_real(double tol = 1e-12) const;

  // Throws GeometryError("no classification") on the projective identity.
  [[nodiscard]] Classification classify(double tol = 1e-10) const;

  friend MoebiusMap operator*(const MoebiusMap& f, const MoebiusMap& g);

 private:
  Complex a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const MoebiusMap& m);

// Projective equality: compares images of 0, 1 and infinity in the chordal metric.
bool projectively_equal(const MoebiusMap& f, const MoebiusMap& g, double tol = 1e-10);
double projective_distance(const MoebiusMap& f, const MoebiusMap& g);
bool is_projective_identity(const MoebiusMap& m, double tol = 1e-10);

// Upper half-plane, metric |dz| / y.
struct HPoint {
  double x = 0.0;
  double y = 1.0;

  // Throws GeometryError unless y > 0.
  static HPoint make(double x, double y);
  [[nodiscard]] Complex to_complex() const { return {x, y}; }
};

double hyp_distance(const HPoint& p, const HPoint& q);

// Action of a real Moebius map on the upper half-plane.
HPoint apply(const MoebiusMap& m, const HPoint& p);

// A point of the boundary circle R + {inf}.
struct BoundaryPoint {
  double x = 0.0;
  bool infinite = false;

  static BoundaryPoint at(double v) { return {v, false}; }
  static BoundaryPoint inf() { return {0.0, true}; }
  [[nodiscard]] ExtComplex to_ext() const {
    return infinite ? ExtComplex::infinity() : ExtComplex(x);
  }
};

struct Geodesic {
  BoundaryPoint start;
  BoundaryPoint end;
};

// Horocycle centred at a boundary point. For a finite centre `level` is the
// Euclidean diameter of the circle; for the centre at infinity it is the height.
struct Horocycle {
  BoundaryPoint center;
  double level = 1.0;

  [[nodiscard]] bool contains(const HPoint& p, double tol = 1e-12) const;
};

Geodesic geodesic_between(const HPoint& p, const HPoint& q);
Horocycle horocycle_at(const BoundaryPoint& center, const HPoint& through);

// Whether the geodesic passes through p (tolerance in Euclidean units).
bool on_geodesic(const Geodesic& g, const HPoint& p, double tol = 1e-10);

}  // namespace graftlab
