#pragma once

#include <map>
#include <string>
#include <vector>

#include "graftlab/exact.hpp"
#include "graftlab/moebius.hpp"
#include "graftlab/schwarzian_dev.hpp"

namespace graftlab {

// pi * pi_part + one_part with rational coefficients.
struct PiLinear {
  Rational pi_part{0};
  Rational one_part{0};

  [[nodiscard]] double value() const;
  friend PiLinear operator+(const PiLinear& a, const PiLinear& b);
  friend PiLinear operator*(const Rational& r, const PiLinear& a);
  friend bool operator==(const PiLinear& a, const PiLinear& b) = default;
};

// Grafting weight, either a real number or a multiple of 2 pi.
struct Weight {
  Rational amount{0};
  bool two_pi = false;

  [[nodiscard]] PiLinear height() const;
  [[nodiscard]] double value() const { return height().value(); }
  [[nodiscard]] bool integral_two_pi() const;
};

struct HypAnnulus {
  double ell = 1.0;  // core length, quotient by z -> e^ell z

  [[nodiscard]] double modulus() const;
};

// Hyperbolic annulus cut along its core with a Euclidean cylinder of height w
// and circumference ell inserted.
struct GraftedAnnulus {
  double ell = 1.0;
  PiLinear height;

  // Strip width in the log chart: pi + w.
  [[nodiscard]] PiLinear width() const { return PiLinear{1, 0} + height; }
  [[nodiscard]] double modulus() const { return width().value() / ell; }
};

// Throws ValidationError for ell <= 0 or a negative weight.
GraftedAnnulus graft_annulus(double ell, const Weight& w);

struct GraftHolonomyReport {
  double ell = 0.0;
  int k = 0;
  PiLinear height;                 // 2 pi k
  MoebiusMap original = MoebiusMap::identity();      // diag(e^{ell/2}, e^{-ell/2})
  MoebiusMap construction = MoebiusMap::identity();  // rotation^{-1} * original * rotation
  bool construction_exact = false;                   // entrywise equality
  MoebiusMap ode = MoebiusMap::identity();           // core monodromy measured past the cylinder
  double ode_distance = 0.0;       // projective distance to original
  double seam_distance = 0.0;      // developed far half vs the original half
};

// Develops the 2 pi k grafted annulus in the log chart (q = -1/2 on the whole
// strip of width pi + 2 pi k) and compares holonomy and far-half developing
// map with the ungrafted annulus. Throws ValidationError for ell <= 0 or k < 0.
GraftHolonomyReport two_pi_graft_holonomy(double ell, int k, const IntegrationOptions& opt = {1e-12, 1e-14, 1e-6});

// Surface group given by real generators. Lowercase letters are generators,
// uppercase their inverses.
struct FuchsianSurface {
  std::map<char, MoebiusMap> generators;
  std::string relation;
  std::vector<std::string> labels;

  [[nodiscard]] int genus() const { return static_cast<int>(relation.size()) / 4; }
  [[nodiscard]] MoebiusMap evaluate(const std::string& word) const;
  // Projective distance of the relation word to the identity.
  [[nodiscard]] double relation_residual() const;
};

// Checks realness and the relation (residual < 1e-9). Throws ValidationError.
void validate(const FuchsianSurface& s);

// Genus-2 group pairing opposite sides of the regular octagon with angles
// pi/4, conjugated to the upper half-plane. Relation aBcDAbCd.
FuchsianSurface regular_octagon_surface();

// Side pairing group of the regular hyperbolic polygon with `sides` sides and
// interior angles 2 pi / sides. Pair i glues side pairs[i].first to side
// pairs[i].second reversing orientation; generator 'a' + i maps the second side
// onto the first and the polygon across it. All corners must form one vertex
// cycle (throws ValidationError otherwise); the relation is read off that cycle.
FuchsianSurface regular_polygon_group(int sides, const std::vector<std::pair<int, int>>& pairs);

// 2 arccosh(|tr| / 2). Throws GeometryError unless the word is hyperbolic.
double geodesic_length(const FuchsianSurface& s, const std::string& word);

struct GraftLoop {
  std::string word;
  Weight weight;
};

struct CylinderReport {
  std::string word;
  double length = 0.0;  // circumference
  PiLinear height;      // weight
  [[nodiscard]] double modulus() const { return height.value() / length; }
  [[nodiscard]] double area() const { return height.value() * length; }
};

struct ThurstonMetricReport {
  int genus = 0;
  PiLinear hyperbolic_area;  // 2 pi (2g - 2)
  std::vector<CylinderReport> cylinders;
  bool holonomy_preserving = true;  // all weights in 2 pi Z

  [[nodiscard]] double cylinder_area() const;
  [[nodiscard]] double total_area() const { return hyperbolic_area.value() + cylinder_area(); }
};

// Loops are assumed pairwise disjoint. Throws GeometryError for non-hyperbolic
// loop words and ValidationError for negative weights.
ThurstonMetricReport graft_surface(const FuchsianSurface& s, const std::vector<GraftLoop>& loops);

// Gr_{tL}: every weight multiplied by t >= 0.
ThurstonMetricReport grafting_ray_sample(const FuchsianSurface& s, const std::vector<GraftLoop>& loops,
                                         const Rational& t);
GraftedAnnulus grafting_ray_sample(const HypAnnulus& a, const Weight& w, const Rational& t);

}  // namespace graftlab
