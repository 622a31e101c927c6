#include "graftlab/schwarzian_dev.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "graftlab/error.hpp"

namespace graftlab {

namespace odeint = boost::numeric::odeint;

namespace {

std::string where(Complex z) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

std::size_t degree(const std::vector<Complex>& c) {
  std::size_t d = c.size();
  while (d > 0 && c[d - 1] == Complex(0.0, 0.0)) --d;
  return d == 0 ? 0 : d - 1;
}

double segment_distance(Complex a, Complex b, Complex p) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

}  // namespace

Complex QuadraticDifferential::operator()(Complex z) const {
  Complex v(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

bool QuadraticDifferential::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](Complex c) { return c == Complex(0.0, 0.0); });
}

std::vector<Complex> QuadraticDifferential::zeros() const {
  if (is_zero()) throw ValidationError("the zero differential has no isolated zeros");
  const std::size_t n = degree(coeffs);
  if (n == 0) return {};
  const Complex lead = coeffs[n];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -coeffs[i] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    Complex z = es.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      Complex v(0.0, 0.0), dv(0.0, 0.0);
      for (std::size_t k = n + 1; k-- > 0;) {
        dv = dv * z + v;
        v = v * z + coeffs[k];
      }
      if (dv == Complex(0.0, 0.0)) break;
      const Complex step = v / dv;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

Path Path::segment(Complex a, Complex b, int pieces) {
  if (pieces < 1) throw ValidationError("a segment needs at least one piece");
  Path p;
  for (int i = 0; i <= pieces; ++i) p.points.push_back(a + (b - a) * (static_cast<double>(i) / pieces));
  return p;
}

Path Path::arc(Complex c, double r, double t0, double t1, int pieces) {
  if (pieces < 1 || !(r > 0.0)) throw ValidationError("an arc needs a positive radius and at least one piece");
  Path p;
  for (int i = 0; i <= pieces; ++i) {
    const double t = t0 + (t1 - t0) * static_cast<double>(i) / pieces;
    p.points.push_back(c + std::polar(r, t));
  }
  return p;
}

Path& Path::append(const Path& p) {
  auto it = p.points.begin();
  if (!points.empty() && it != p.points.end() && *it == points.back()) ++it;
  points.insert(points.end(), it, p.points.end());
  return *this;
}

ExtComplex Frame::developing_value() const {
  if (w2 == Complex(0.0, 0.0)) {
    if (w1 == Complex(0.0, 0.0)) throw GeometryError("degenerate frame");
    return ExtComplex::infinity();
  }
  return w1 / w2;
}

namespace {

using State = std::array<Complex, 4>;

State to_state(const Frame& f) { return {f.w1, f.w2, f.dw1, f.dw2}; }
Frame to_frame(const State& s) { return {s[0], s[1], s[2], s[3]}; }

using Column = std::array<Complex, 2>;

// Integrates one solution (w, w') from a to b. Error control is relative to
// the size of the column so that very large and very small solutions keep
// their precision.
void integrate_column(const QuadraticDifferential& q, Complex a, Complex b, Column& x, const IntegrationOptions& opt) {
  const Complex d = b - a;
  auto rhs = [&](const Column& s, Column& ds, double t) {
    ds[0] = d * s[1];
    ds[1] = -d * 0.5 * q(a + t * d) * s[0];
  };
  double t = 0.0;
  double dt = 1e-3;
  long steps = 0;
  while (t < 1.0) {
    if (t + dt > 1.0) dt = 1.0 - t;
    const double size = std::max(std::abs(x[0]), std::abs(x[1]));
    auto stepper = odeint::make_controlled(std::max(opt.abs_tol, opt.rel_tol * size), opt.rel_tol,
                                           odeint::runge_kutta_dopri5<Column>());
    if (stepper.try_step(rhs, x, t, dt) == odeint::success) {
      if (++steps > 5000000) throw NumericalError("too many integration steps near " + where(a + t * d));
    } else if (dt < 1e-14) {
      throw NumericalError("step size underflow near " + where(a + t * d));
    }
    if (!std::isfinite(std::abs(x[0])) || !std::isfinite(std::abs(x[1]))) {
      throw NumericalError("solution overflow near " + where(a + t * d));
    }
  }
}

void integrate_segment(const QuadraticDifferential& q, Complex a, Complex b, State& x, const IntegrationOptions& opt) {
  Column c1{x[0], x[2]};
  Column c2{x[1], x[3]};
  integrate_column(q, a, b, c1, opt);
  integrate_column(q, a, b, c2, opt);
  x = {c1[0], c2[0], c1[1], c2[1]};
}

void rescale(State& x, double& log_scale) {
  double m = 0.0;
  for (const Complex& c : x) m = std::max(m, std::abs(c));
  if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
    for (Complex& c : x) c /= m;
    log_scale += std::log(m);
  }
}

}  // namespace

DevelopingSolution integrate_dev(const QuadraticDifferential& q, const Path& path, const Frame& init,
                                 const IntegrationOptions& opt) {
  if (path.points.empty()) throw ValidationError("empty path");
  const Complex w0 = init.wronskian();
  if (std::abs(w0) == 0.0) throw ValidationError("initial frame is degenerate (zero Wronskian)");
  if (!q.is_zero()) {
    for (const Complex& r : q.zeros()) {
      for (std::size_t i = 0; i < path.points.size(); ++i) {
        const Complex a = path.points[i];
        const Complex b = i + 1 < path.points.size() ? path.points[i + 1] : a;
        if (segment_distance(a, b, r) < opt.zero_margin) {
          throw GeometryError("path passes through the zero of q at " + where(r));
        }
      }
    }
  }
  DevelopingSolution sol;
  sol.wronskian0 = w0;
  State x = to_state(init);
  double log_scale = 0.0;
  bool in_inverse_chart = std::abs(init.w1) > std::abs(init.w2);
  auto record = [&](Complex z) {
    const Frame fr = to_frame(x);
    const Complex ratio = fr.wronskian() / w0;
    const double drift = std::abs(std::exp(std::log(ratio) + 2.0 * log_scale) - 1.0);
    sol.max_wronskian_drift = std::max(sol.max_wronskian_drift, drift);
    const bool inv = std::abs(fr.w1) > std::abs(fr.w2);
    if (inv != in_inverse_chart) ++sol.chart_switches;
    in_inverse_chart = inv;
    sol.samples.push_back({z, fr, log_scale, fr.developing_value()});
  };
  record(path.points.front());
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    integrate_segment(q, path.points[i - 1], path.points[i], x, opt);
    rescale(x, log_scale);
    record(path.points[i]);
  }
  return sol;
}

std::vector<Complex> schwarzian(const std::vector<ExtComplex>& f, Complex h) {
  if (f.size() < 7) throw ValidationError("schwarzian needs at least 7 samples");
  if (h == Complex(0.0, 0.0)) throw ValidationError("grid spacing must be nonzero");
  std::vector<Complex> out;
  out.reserve(f.size() - 6);
  for (std::size_t k = 3; k + 3 < f.size(); ++k) {
    std::array<Complex, 7> g;
    bool invert = false;
    for (std::size_t j = 0; j < 7; ++j) {
      const ExtComplex& v = f[k + j - 3];
      if (v.is_infinite() || std::abs(v.value()) > 1.0) invert = true;
    }
    for (std::size_t j = 0; j < 7; ++j) {
      const ExtComplex& v = f[k + j - 3];
      if (!invert) {
        g[j] = v.value();
      } else if (v.is_infinite()) {
        g[j] = 0.0;
      } else {
        if (v.value() == Complex(0.0, 0.0)) throw NumericalError("samples contain both a zero and a pole");
        g[j] = 1.0 / v.value();
      }
    }
    const Complex d1 = (g[1] - 8.0 * g[2] + 8.0 * g[4] - g[5]) / (12.0 * h);
    const Complex d2 = (-g[1] + 16.0 * g[2] - 30.0 * g[3] + 16.0 * g[4] - g[5]) / (12.0 * h * h);
    const Complex d3 = (g[0] - 8.0 * g[1] + 13.0 * g[2] - 13.0 * g[4] + 8.0 * g[5] - g[6]) / (8.0 * h * h * h);
    if (std::abs(d1) <= 1e-300) throw NumericalError("f' vanishes at grid index " + std::to_string(k));
    const Complex r = d2 / d1;
    out.push_back(d3 / d1 - 1.5 * r * r);
  }
  return out;
}

GridSamples schwarzian_grid(const GridSamples& g) {
  if (g.nx < 7 || g.ny < 1 || g.values.size() != static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny)) {
    throw ValidationError("grid shape does not match its samples");
  }
  GridSamples out;
  out.origin = g.origin + 3.0 * g.h;
  out.h = g.h;
  out.nx = g.nx - 6;
  out.ny = g.ny;
  for (int y = 0; y < g.ny; ++y) {
    const auto row_begin = g.values.begin() + static_cast<std::ptrdiff_t>(y) * g.nx;
    const std::vector<ExtComplex> row(row_begin, row_begin + g.nx);
    for (const Complex& s : schwarzian(row, g.h)) out.values.emplace_back(s);
  }
  return out;
}

MoebiusMap monodromy(const QuadraticDifferential& q, const Path& path, const IntegrationOptions& opt) {
  const DevelopingSolution sol = integrate_dev(q, path, Frame::identity(), opt);
  const Frame& c = sol.samples.back().frame;
  // The continued w1 is c.w1 * w1 + c.dw1 * w2, and likewise for w2.
  return {c.w1, c.dw1, c.w2, c.dw2};
}

MoebiusMap HolonomyRep::operator()(std::string_view word) const {
  MoebiusMap m = MoebiusMap::identity();
  for (char ch : word) {
    const bool inverse = ch >= 'A' && ch <= 'Z';
    const char key = inverse ? static_cast<char>(ch - 'A' + 'a') : ch;
    auto it = generators.find(key);
    if (it == generators.end()) throw ValidationError(std::string("unknown generator '") + ch + "'");
    m = m * (inverse ? it->second.inverse() : it->second);
  }
  return m;
}

double AntiStokesSector::center() const {
  if (index < 0 || index > 2) throw ValidationError("sector index must be 0, 1 or 2");
  return 2.0 * std::numbers::pi * index / 3.0;
}

bool AntiStokesSector::contains(Complex z) const {
  const double a = std::remainder(std::arg(z) - center(), 2.0 * std::numbers::pi);
  return std::abs(a) < kHalfWidth;
}

Complex model_function(const AntiStokesSector& s, Complex z) {
  const Complex u = z * std::polar(1.0, -s.center());
  return std::exp(-std::sqrt(2.0) * std::pow(u, 1.5));
}

ModelCompareResult model_compare(double R, const AntiStokesSector& s, int m, const ModelCompareOptions& opt) {
  if (!(R > 0.0) || !(R < opt.anchor_radius)) {
    throw ValidationError("comparison radius must lie in (0, anchor radius)");
  }
  if (m < 0) throw ValidationError("m must be nonnegative");
  const QuadraticDifferential q{{0.0, -2.25}};
  const double c = s.center();
  const Complex omega = std::polar(1.0, c);
  const double R0 = opt.start_radius;
  const Complex z0 = R0 * omega;

  const IntegrationOptions ode{opt.ode.rel_tol, opt.ode.abs_tol, 0.0};

  // Recessive solution from its WKB form at u = R0 on the central ray.
  const double u0 = R0;
  const double rec = std::pow(u0, -0.25) * std::exp(-std::pow(u0, 1.5) / std::sqrt(2.0));
  const double drec = rec * (-1.5 / std::sqrt(2.0) * std::sqrt(u0) - 0.25 / u0);
  const Frame rec_init{rec, 0.0, drec / omega, 1.0};

  // Each solution is integrated in its stable direction: the recessive one
  // inward from R0, the dominant one (w(0) = 1, w'(0) = 0) outward from 0.
  auto values_on = [&](double radius, const Path& tail) {
    Path pr = Path::segment(z0, radius * omega);
    pr.append(tail);
    Path pd = Path::segment(0.0, radius * omega);
    pd.append(tail);
    const auto r = integrate_dev(q, pr, rec_init, ode).samples;
    const auto d = integrate_dev(q, pd, Frame::identity(), ode).samples;
    std::vector<std::pair<Complex, Complex>> v;
    for (std::size_t i = 0; i < tail.points.size(); ++i) {
      const DevSample& sr = r[r.size() - tail.points.size() + i];
      const DevSample& sd = d[d.size() - tail.points.size() + i];
      v.emplace_back(sr.z, sr.frame.w1 / sd.frame.w1 * std::exp(sr.log_scale - sd.log_scale));
    }
    return v;
  };

  // Scale fit at three anchors.
  std::vector<std::pair<Complex, Complex>> anchors;
  for (double off : {0.0, opt.anchor_spread, -opt.anchor_spread}) {
    anchors.push_back(values_on(opt.anchor_radius, Path::arc(0.0, opt.anchor_radius, c, c + off, 1)).back());
  }
  Complex num(0.0, 0.0);
  double den = 0.0;
  for (const auto& [z, f] : anchors) {
    const Complex e = model_function(s, z);
    num += std::conj(e) * f;
    den += std::norm(e);
  }
  ModelCompareResult res;
  res.scale = num / den;
  for (const auto& [z, f] : anchors) {
    const Complex e = res.scale * model_function(s, z);
    res.fit_residual = std::max(res.fit_residual, std::abs(f - e) / std::abs(e));
  }
  if (!(res.fit_residual <= opt.fit_tol)) throw NumericalError("normalization failed");

  const double third = AntiStokesSector::kHalfWidth / 3.0;
  for (double side : {1.0, -1.0}) {
    for (const auto& [z, f] : values_on(R, Path::arc(0.0, R, c, c + side * third, opt.arc_points))) {
      const double err = std::abs(f / res.scale - model_function(s, z)) * std::pow(std::abs(z), m);
      res.sup_error = std::max(res.sup_error, err);
    }
  }
  return res;
}

}  // namespace graftlab
