#include "graftlab/torus_oracle.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "graftlab/error.hpp"
#include "graftlab/moebius.hpp"

namespace graftlab {

using C = std::complex<double>;

TorusPoint TorusPoint::make(C tau) {
  if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()) || !(tau.imag() > 0.0)) {
    throw ValidationError("torus modulus needs Im tau > 0");
  }
  return {tau};
}

SlopeCurve SlopeCurve::make(long p, long q) {
  if (std::gcd(p, q) != 1) throw ValidationError("slope (p, q) must be coprime");
  return {p, q};
}

Sl2z Sl2z::make(long a, long b, long c, long d) {
  if (a * d - b * c != 1) throw ValidationError("SL(2, Z) element needs ad - bc = 1");
  return {a, b, c, d};
}

TorusPoint act(const Sl2z& m, const TorusPoint& t) {
  return TorusPoint::make((double(m.a) * t.tau + double(m.b)) / (double(m.c) * t.tau + double(m.d)));
}

SlopeCurve act(const Sl2z& m, const SlopeCurve& c) {
  return {m.a * c.p - m.b * c.q, -m.c * c.p + m.d * c.q};
}

Sl2z completing_basis(const SlopeCurve& c) {
  // Extended Euclid: p s - q r = 1.
  long old_r = c.p, r = -c.q;
  long old_s = 1, s = 0;
  long old_t = 0, t = 1;
  while (r != 0) {
    const long k = old_r / r;
    old_r -= k * r;
    std::swap(old_r, r);
    old_s -= k * s;
    std::swap(old_s, s);
    old_t -= k * t;
    std::swap(old_t, t);
  }
  // old_s * p + old_t * (-q) = old_r = +-1
  if (old_r != 1 && old_r != -1) throw ValidationError("slope (p, q) must be coprime");
  const long sign = old_r;
  return Sl2z::make(c.p, c.q, sign * old_t, sign * old_s);
}

C tau_in_frame(const TorusPoint& t, const SlopeCurve& c) {
  const Sl2z m = completing_basis(c);
  return (double(m.c) + double(m.d) * t.tau) / (double(m.a) + double(m.b) * t.tau);
}

TorusPoint from_frame(C tau_c, const SlopeCurve& c) {
  const Sl2z m = completing_basis(c);
  // 1 = s v - q u, tau = -r v + p u in terms of v = p + q tau, u = r + s tau.
  return TorusPoint::make((-double(m.c) + double(m.a) * tau_c) / (double(m.d) - double(m.b) * tau_c));
}

double teich_distance(const TorusPoint& a, const TorusPoint& b) {
  return 0.5 * hyp_distance(HPoint::make(a.tau.real(), a.tau.imag()), HPoint::make(b.tau.real(), b.tau.imag()));
}

double flat_length(const TorusPoint& t, const SlopeCurve& c) {
  return std::abs(double(c.p) + double(c.q) * t.tau) / std::sqrt(t.tau.imag());
}

TorusPoint graft_torus(const TorusPoint& t, const SlopeCurve& c, double w) {
  if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("grafting height must be >= 0");
  if (w == 0.0) return t;
  return from_frame(tau_in_frame(t, c) + C(0.0, w), c);
}

TorusPoint teich_ray(const TorusPoint& t, const SlopeCurve& c, double s) {
  const C f = tau_in_frame(t, c);
  return from_frame({f.real(), f.imag() * std::exp(2.0 * s)}, c);
}

double matched_weight(const TorusPoint& t, const SlopeCurve& c, double s) {
  const double d = flat_length(t, c);
  return std::exp(2.0 * s) / (d * d);
}

double ray_gap(const TorusPoint& t, const SlopeCurve& c, double s) {
  return teich_distance(teich_ray(t, c, s), graft_torus(t, c, matched_weight(t, c, s)));
}

RayComparisonReport ray_compare(const TorusPoint& t, const SlopeCurve& c, const std::vector<double>& s_grid) {
  RayComparisonReport rep;
  rep.d = flat_length(t, c);
  for (double s : s_grid) {
    rep.rows.push_back({s, teich_ray(t, c, s), graft_torus(t, c, matched_weight(t, c, s)), ray_gap(t, c, s)});
  }
  rep.decreasing_from = std::numeric_limits<double>::quiet_NaN();
  std::size_t i = rep.rows.size();
  while (i > 1 && rep.rows[i - 1].gap < rep.rows[i - 2].gap) --i;
  if (rep.rows.size() >= 2 && i < rep.rows.size()) rep.decreasing_from = rep.rows[i - 1].s;
  return rep;
}

}  // namespace graftlab
