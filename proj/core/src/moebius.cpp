#include "graftlab/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "graftlab/error.hpp"

namespace graftlab {

Complex ExtComplex::value() const {
  if (inf_) throw GeometryError("ExtComplex::value called on infinity");
  return z_;
}

std::ostream& operator<<(std::ostream& os, const ExtComplex& p) {
  if (p.is_infinite()) return os << "inf";
  return os << p.value();
}

double chordal_distance(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite() || b.is_infinite()) {
    const Complex z = a.is_infinite() ? b.value() : a.value();
    return 2.0 / std::sqrt(1.0 + std::norm(z));
  }
  const Complex z = a.value();
  const Complex w = b.value();
  return 2.0 * std::abs(z - w) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(w)));
}

const char* to_string(MoebiusKind k) {
  switch (k) {
    case MoebiusKind::elliptic: return "elliptic";
    case MoebiusKind::parabolic: return "parabolic";
    case MoebiusKind::hyperbolic: return "hyperbolic";
    case MoebiusKind::loxodromic: return "loxodromic";
  }
  return "unknown";
}

MoebiusMap::MoebiusMap(Complex a, Complex b, Complex c, Complex d) {
  const Complex det = a * d - b * c;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(scale > 0.0) || !std::isfinite(scale) || std::abs(det) <= 1e-14 * scale * scale) {
    throw GeometryError("degenerate Moebius matrix (ad - bc = 0)");
  }
  const Complex s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

MoebiusMap MoebiusMap::identity() { return {1.0, 0.0, 0.0, 1.0}; }

MoebiusMap MoebiusMap::diagonal(Complex lambda) { return {lambda, 0.0, 0.0, 1.0 / lambda}; }

MoebiusMap MoebiusMap::translation(Complex t) { return {1.0, t, 0.0, 1.0}; }

namespace {

// Matrix sending (p1, p2, p3) to (0, 1, inf).
MoebiusMap to_standard_triple(const std::array<ExtComplex, 3>& p) {
  if (p[0] == p[1] || p[1] == p[2] || p[0] == p[2]) {
    throw GeometryError("three-point Moebius map needs distinct points");
  }
  if (p[0].is_infinite()) {
    const Complex z2 = p[1].value(), z3 = p[2].value();
    return {0.0, z2 - z3, 1.0, -z3};
  }
  if (p[1].is_infinite()) {
    const Complex z1 = p[0].value(), z3 = p[2].value();
    return {1.0, -z1, 1.0, -z3};
  }
  if (p[2].is_infinite()) {
    const Complex z1 = p[0].value(), z2 = p[1].value();
    return {1.0, -z1, 0.0, z2 - z1};
  }
  const Complex z1 = p[0].value(), z2 = p[1].value(), z3 = p[2].value();
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

}  // namespace

MoebiusMap MoebiusMap::from_three_points(const std::array<ExtComplex, 3>& z,
                                         const std::array<ExtComplex, 3>& w) {
  return to_standard_triple(w).inverse() * to_standard_triple(z);
}

ExtComplex MoebiusMap::apply(const ExtComplex& z) const {
  if (z.is_infinite()) {
    if (c_ == Complex(0.0, 0.0)) return ExtComplex::infinity();
    return a_ / c_;
  }
  const Complex num = a_ * z.value() + b_;
  const Complex den = c_ * z.value() + d_;
  if (den == Complex(0.0, 0.0)) return ExtComplex::infinity();
  return num / den;
}

MoebiusMap MoebiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

bool MoebiusMap::is_real(double tol) const {
  // det = 1 fixes entries up to a global sign, which keeps realness visible.
  return std::abs(a_.imag()) <= tol && std::abs(b_.imag()) <= tol &&
         std::abs(c_.imag()) <= tol && std::abs(d_.imag()) <= tol;
}

Classification MoebiusMap::classify(double tol) const {
  if (is_projective_identity(*this, tol)) throw GeometryError("no classification");
  const Complex t = trace();
  if (std::abs(t.imag()) > tol) {
    const Complex len = 2.0 * std::acosh(t / 2.0);
    return {MoebiusKind::loxodromic, std::abs(len.real())};
  }
  const double at = std::abs(t.real());
  if (std::abs(at - 2.0) <= tol) return {MoebiusKind::parabolic, 0.0};
  if (at < 2.0) return {MoebiusKind::elliptic, 0.0};
  return {MoebiusKind::hyperbolic, 2.0 * std::acosh(at / 2.0)};
}

MoebiusMap operator*(const MoebiusMap& f, const MoebiusMap& g) {
  return {f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_,
          f.c_ * g.a_ + f.d_ * g.c_, f.c_ * g.b_ + f.d_ * g.d_};
}

std::ostream& operator<<(std::ostream& os, const MoebiusMap& m) {
  return os << "[[" << m.a() << ", " << m.b() << "], [" << m.c() << ", " << m.d() << "]]";
}

double projective_distance(const MoebiusMap& f, const MoebiusMap& g) {
  const std::array<ExtComplex, 3> probes{ExtComplex(0.0), ExtComplex(1.0), ExtComplex::infinity()};
  double worst = 0.0;
  for (const auto& p : probes) worst = std::max(worst, chordal_distance(f.apply(p), g.apply(p)));
  return worst;
}

bool projectively_equal(const MoebiusMap& f, const MoebiusMap& g, double tol) {
  return projective_distance(f, g) <= tol;
}

bool is_projective_identity(const MoebiusMap& m, double tol) {
  return projectively_equal(m, MoebiusMap::identity(), tol);
}

HPoint HPoint::make(double x, double y) {
  if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw GeometryError("upper half-plane point needs y > 0");
  }
  return {x, y};
}

double hyp_distance(const HPoint& p, const HPoint& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  return 2.0 * std::asinh(std::sqrt(dx * dx + dy * dy) / (2.0 * std::sqrt(p.y * q.y)));
}

HPoint apply(const MoebiusMap& m, const HPoint& p) {
  if (!m.is_real(1e-9)) throw GeometryError("only real Moebius maps act on the upper half-plane");
  const ExtComplex w = m.apply(p.to_complex());
  const Complex v = w.value();
  // Real maps with det = 1 preserve the upper half-plane; guard the sign of the
  // imaginary part against the projective sign ambiguity.
  return HPoint::make(v.real(), std::abs(v.imag()));
}

bool Horocycle::contains(const HPoint& p, double tol) const {
  if (center.infinite) return std::abs(p.y - level) <= tol;
  const double r = 0.5 * level;
  const double dx = p.x - center.x;
  const double dy = p.y - r;
  return std::abs(std::sqrt(dx * dx + dy * dy) - r) <= tol;
}

Geodesic geodesic_between(const HPoint& p, const HPoint& q) {
  const double dx = p.x - q.x;
  const double dy = p.y - q.y;
  if (dx == 0.0 && dy == 0.0) throw GeometryError("geodesic_between needs distinct points");
  const double scale = std::max({1.0, std::abs(p.x), std::abs(q.x), p.y, q.y});
  if (std::abs(dx) <= 1e-14 * scale) {
    return {BoundaryPoint::at(p.x), BoundaryPoint::inf()};
  }
  // Centre on the real axis equidistant from p and q.
  const double c = ((p.x * p.x + p.y * p.y) - (q.x * q.x + q.y * q.y)) / (2.0 * dx);
  const double r = std::hypot(p.x - c, p.y);
  return {BoundaryPoint::at(c - r), BoundaryPoint::at(c + r)};
}

Horocycle horocycle_at(const BoundaryPoint& center, const HPoint& through) {
  if (center.infinite) return {center, through.y};
  const double dx = through.x - center.x;
  const double r = (dx * dx + through.y * through.y) / (2.0 * through.y);
  return {center, 2.0 * r};
}

bool on_geodesic(const Geodesic& g, const HPoint& p, double tol) {
  if (g.start.infinite || g.end.infinite) {
    const double x = g.start.infinite ? g.end.x : g.start.x;
    return std::abs(p.x - x) <= tol;
  }
  const double c = 0.5 * (g.start.x + g.end.x);
  const double r = 0.5 * std::abs(g.end.x - g.start.x);
  return std::abs(std::hypot(p.x - c, p.y) - r) <= tol;
}

}  // namespace graftlab
