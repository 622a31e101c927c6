#include "graftlab/grafting.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include "graftlab/error.hpp"

namespace graftlab {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat = std::array<Complex, 4>;

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Mat inv(const Mat& x) {
  const Complex det = x[0] * x[3] - x[1] * x[2];
  return {x[3] / det, -x[1] / det, -x[2] / det, x[0] / det};
}

MoebiusMap real_representative(const Mat& m) {
  Complex pivot = m[0];
  for (Complex e : m) {
    if (std::abs(e) > std::abs(pivot)) pivot = e;
  }
  const Complex phase = pivot / std::abs(pivot);
  return {(m[0] / phase).real(), (m[1] / phase).real(), (m[2] / phase).real(), (m[3] / phase).real()};
}

// Columns (w, w') of the two solutions.
Mat frame_matrix(const Frame& f) { return {f.w1, f.dw1, f.w2, f.dw2}; }

// Frame with f = exp(zeta) in the log chart of the annulus.
Frame exp_frame(Complex zeta) {
  const Complex e = std::exp(0.5 * zeta);
  return {e, 1.0 / e, 0.5 * e, -0.5 / e};
}

void check_ell(double ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw ValidationError("core length must be positive");
}

void check_weight(const Weight& w) {
  if (w.amount < 0) throw ValidationError("grafting weight must be nonnegative");
}

}  // namespace

double PiLinear::value() const { return to_double(pi_part) * kPi + to_double(one_part); }

PiLinear operator+(const PiLinear& a, const PiLinear& b) {
  return {a.pi_part + b.pi_part, a.one_part + b.one_part};
}

PiLinear operator*(const Rational& r, const PiLinear& a) { return {r * a.pi_part, r * a.one_part}; }

PiLinear Weight::height() const {
  if (two_pi) return {2 * amount, 0};
  return {0, amount};
}

bool Weight::integral_two_pi() const {
  if (amount == 0) return true;
  return two_pi && denominator(amount) == 1;
}

double HypAnnulus::modulus() const {
  check_ell(ell);
  return kPi / ell;
}

GraftedAnnulus graft_annulus(double ell, const Weight& w) {
  check_ell(ell);
  check_weight(w);
  return {ell, w.height()};
}

GraftHolonomyReport two_pi_graft_holonomy(double ell, int k, const IntegrationOptions& opt) {
  check_ell(ell);
  if (k < 0) throw ValidationError("number of full turns must be nonnegative");
  GraftHolonomyReport rep;
  rep.ell = ell;
  rep.k = k;
  rep.height = {2 * k, 0};

  const Mat d{std::exp(0.5 * ell), 0.0, 0.0, std::exp(-0.5 * ell)};
  rep.original = {d[0], d[1], d[2], d[3]};
  // Rotation by 2 pi k about the axis, diag(e^{i pi k}, e^{-i pi k}), is +-1.
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  const Mat rot{sign, 0.0, 0.0, sign};
  const Mat c = mul(inv(rot), mul(d, rot));
  rep.construction_exact = c == d;
  rep.construction = {c[0], c[1], c[2], c[3]};

  // Log chart: the grafted strip is 0 < Im zeta < pi + 2 pi k with the cylinder
  // occupying pi/2 < Im zeta < pi/2 + 2 pi k.
  const QuadraticDifferential q{{-0.5}};
  const Complex base(0.0, kPi / 4.0);
  const Complex far(0.0, kPi / 2.0 + 2.0 * kPi * k + kPi / 4.0);
  Path p = Path::segment(base, far, 8 * k + 1);
  p.append(Path::segment(far, far + ell, 4));
  const DevelopingSolution sol = integrate_dev(q, p, exp_frame(base), opt);
  const std::size_t at_far = static_cast<std::size_t>(8 * k + 1);
  const DevSample& s0 = sol.samples[at_far];
  const DevSample& s1 = sol.samples.back();
  const ExtComplex original_far = std::exp(far - Complex(0.0, 2.0 * kPi * k));
  rep.seam_distance = chordal_distance(s0.f, original_far);
  const Mat m = mul(frame_matrix(s1.frame), inv(frame_matrix(s0.frame)));
  rep.ode = {m[0], m[1], m[2], m[3]};
  rep.ode_distance = projective_distance(rep.ode, rep.original);
  return rep;
}

MoebiusMap FuchsianSurface::evaluate(const std::string& word) const {
  HolonomyRep rep;
  rep.generators = generators;
  return rep(word);
}

double FuchsianSurface::relation_residual() const {
  return projective_distance(evaluate(relation), MoebiusMap::identity());
}

void validate(const FuchsianSurface& s) {
  if (s.generators.empty()) throw ValidationError("surface group needs generators");
  if (s.relation.empty() || s.relation.size() % 4 != 0) {
    throw ValidationError("relation word length must be a positive multiple of 4");
  }
  for (const auto& [name, g] : s.generators) {
    if (name < 'a' || name > 'z') throw ValidationError(std::string("generator names must be lowercase letters, got '") + name + "'");
    if (!g.is_real(1e-9)) throw ValidationError(std::string("generator '") + name + "' is not real");
  }
  const double r = s.relation_residual();
  if (!(r < 1e-9)) throw ValidationError("relation residual " + std::to_string(r) + " exceeds 1e-9");
}

FuchsianSurface regular_octagon_surface() {
  const double c = 1.0 + std::sqrt(2.0);
  const double s = std::sqrt(c * c - 1.0);
  const Mat g0{c, s, s, c};
  const Mat cayley{Complex(0.0, 1.0), Complex(0.0, 1.0), -1.0, 1.0};
  FuchsianSurface out;
  for (int k = 0; k < 4; ++k) {
    const Complex e = std::polar(1.0, k * kPi / 8.0);
    const Mat r{e, 0.0, 0.0, 1.0 / e};
    const Mat disc = mul(r, mul(g0, inv(r)));
    const char name = static_cast<char>('a' + k);
    out.generators.emplace(name, real_representative(mul(cayley, mul(disc, inv(cayley)))));
    out.labels.emplace_back(1, name);
  }
  out.relation = "aBcDAbCd";
  return out;
}

FuchsianSurface regular_polygon_group(int sides, const std::vector<std::pair<int, int>>& pairs) {
  if (sides < 4 || sides % 2 != 0 || static_cast<int>(pairs.size()) * 2 != sides || sides > 52) {
    throw ValidationError("side pairing needs an even number of sides, each used once");
  }
  // Letter and exponent of each side.
  std::vector<std::pair<int, int>> side(static_cast<std::size_t>(sides), {-1, 0});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (auto [s, e] : {std::pair{pairs[i].first, 1}, std::pair{pairs[i].second, -1}}) {
      if (s < 0 || s >= sides || side[static_cast<std::size_t>(s)].first >= 0) {
        throw ValidationError("side pairing needs an even number of sides, each used once");
      }
      side[static_cast<std::size_t>(s)] = {static_cast<int>(i), e};
    }
  }
  auto partner = [&](int s) {
    const auto& p = pairs[static_cast<std::size_t>(side[static_cast<std::size_t>(s)].first)];
    return p.first == s ? p.second : p.first;
  };
  auto letter = [&](int s) {
    const auto [i, e] = side[static_cast<std::size_t>(s)];
    const char c = static_cast<char>('a' + i);
    return e > 0 ? c : static_cast<char>(std::toupper(c));
  };
  // Vertex cycle: leave corner v across side v - 1, arrive at the start of its partner.
  std::string relation;
  int v = 0;
  do {
    const int out = (v + sides - 1) % sides;
    relation += letter(out);
    v = partner(out);
  } while (v != 0 && relation.size() <= static_cast<std::size_t>(sides));
  if (relation.size() != static_cast<std::size_t>(sides)) {
    throw ValidationError("side pairing does not identify all corners to one point");
  }

  const double n = sides;
  const double R = std::acosh(1.0 / (std::tan(kPi / n) * std::tan(kPi / n)));
  const double r = std::tanh(R / 2.0);
  auto vertex = [&](int k) { return std::polar(r, 2.0 * kPi * k / n); };
  // Disc isometry moving a to 0 and b onto the positive real axis.
  auto normalize = [](Complex a, Complex b) {
    const Mat m{1.0, -a, -std::conj(a), 1.0};
    const Complex mb = (b - a) / (1.0 - std::conj(a) * b);
    const Complex ph = std::exp(Complex(0.0, -0.5 * std::arg(mb)));
    return mul(Mat{ph, 0.0, 0.0, 1.0 / ph}, m);
  };
  const Mat cayley{Complex(0.0, 1.0), Complex(0.0, 1.0), -1.0, 1.0};
  FuchsianSurface out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int e = pairs[i].first, f = pairs[i].second;
    const Mat a = normalize(vertex(f), vertex((f + 1) % sides));
    const Mat b = normalize(vertex((e + 1) % sides), vertex(e));
    const Mat disc = mul(inv(b), a);
    const char name = static_cast<char>('a' + i);
    out.generators.emplace(name, real_representative(mul(cayley, mul(disc, inv(cayley)))));
    out.labels.emplace_back(1, name);
  }
  out.relation = relation;
  return out;
}

double geodesic_length(const FuchsianSurface& s, const std::string& word) {
  // Plain matrix products: long words have large entries, which the
  // normalizing Moebius constructor would reject as degenerate.
  Mat m{1.0, 0.0, 0.0, 1.0};
  for (char ch : word) {
    const auto it = s.generators.find(static_cast<char>(std::tolower(ch)));
    if (it == s.generators.end()) throw ValidationError(std::string("unknown generator '") + ch + "' in word '" + word + "'");
    const MoebiusMap& g = it->second;
    const Mat x{g.a(), g.b(), g.c(), g.d()};
    m = mul(m, std::isupper(static_cast<unsigned char>(ch)) ? inv(x) : x);
  }
  const double tr = std::abs(m[0] + m[3]);
  if (word.empty() || (std::abs(m[1]) < 1e-12 && std::abs(m[2]) < 1e-12 && std::abs(m[0] - m[3]) < 1e-12)) {
    throw GeometryError("loop word '" + word + "' is trivial");
  }
  if (!(tr > 2.0 + 1e-9)) {
    throw GeometryError("loop word '" + word + "' is " + (tr < 2.0 - 1e-9 ? "elliptic" : "parabolic") +
                        ", not hyperbolic");
  }
  return 2.0 * std::acosh(tr / 2.0);
}

double ThurstonMetricReport::cylinder_area() const {
  double a = 0.0;
  for (const auto& c : cylinders) a += c.area();
  return a;
}

ThurstonMetricReport graft_surface(const FuchsianSurface& s, const std::vector<GraftLoop>& loops) {
  ThurstonMetricReport rep;
  rep.genus = s.genus();
  rep.hyperbolic_area = {2 * (2 * rep.genus - 2), 0};
  for (const auto& l : loops) {
    check_weight(l.weight);
    rep.cylinders.push_back({l.word, geodesic_length(s, l.word), l.weight.height()});
    rep.holonomy_preserving = rep.holonomy_preserving && l.weight.integral_two_pi();
  }
  return rep;
}

ThurstonMetricReport grafting_ray_sample(const FuchsianSurface& s, const std::vector<GraftLoop>& loops,
                                         const Rational& t) {
  if (t < 0) throw ValidationError("grafting ray parameter must be nonnegative");
  std::vector<GraftLoop> scaled = loops;
  for (auto& l : scaled) l.weight.amount *= t;
  return graft_surface(s, scaled);
}

GraftedAnnulus grafting_ray_sample(const HypAnnulus& a, const Weight& w, const Rational& t) {
  if (t < 0) throw ValidationError("grafting ray parameter must be nonnegative");
  return graft_annulus(a.ell, {w.amount * t, w.two_pi});
}

}  // namespace graftlab
