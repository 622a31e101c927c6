#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "graftlab/flat_surfaces.hpp"
#include "graftlab/grafting.hpp"
#include "graftlab/qc_comparison.hpp"
#include "graftlab/schwarzian_dev.hpp"
#include "graftlab/torus_oracle.hpp"
#include "graftlab/traintracks.hpp"
#include "experiments.hpp"

namespace graftlab::runner {

namespace {

const Json& opt(const Json& p, const std::string& key, const Json& fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : *it;
}

Json load(const Json& p, const std::string& key, const std::string& kind) {
  const Json& v = field(p, key, kind);
  if (v.is_string()) return read_json(v.get<std::string>());
  if (v.is_object()) return v;
  throw SchemaError(kind + "." + key + ": expected a file name or an inline object");
}

std::string exact(const PiLinear& x) {
  std::string out;
  if (x.pi_part != 0) out = to_string(x.pi_part) + "*pi";
  if (x.one_part != 0 || out.empty()) {
    if (!out.empty() && x.one_part > 0) out += "+";
    out += to_string(x.one_part);
  }
  return out;
}

std::string exact(const Weight& w) { return to_string(w.amount) + (w.two_pi ? "*2pi" : ""); }

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

struct Range {
  double from = 0.0, to = 0.0;
  int steps = 0;
  [[nodiscard]] double at(int k) const { return steps == 0 ? from : from + (to - from) * k / steps; }
};

Range range_of(const Json& j, const std::string& where) {
  Range r;
  r.from = real_of(field(j, "from", where), where + ".from");
  r.to = real_of(field(j, "to", where), where + ".to");
  r.steps = static_cast<int>(integer_of(field(j, "steps", where), where + ".steps"));
  if (r.steps < 0 || r.steps > 100000) throw SchemaError(where + ".steps: out of range");
  return r;
}

std::vector<int> ints_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of integers");
  std::vector<int> out;
  for (const Json& x : j) out.push_back(static_cast<int>(integer_of(x, where)));
  return out;
}

std::vector<double> reals_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : j) out.push_back(real_of(x, where));
  return out;
}

// ---------------------------------------------------------------- devmap

struct DevmapTask {
  double R;
  int sector;
  int m;
};

Stages devmap(const Json& p) {
  const std::vector<Complex> model{0.0, -2.25};
  QuadraticDifferential q{model};
  bool custom_q = false;
  if (p.contains("q")) {
    if (!p["q"].is_array() || p["q"].empty()) throw SchemaError("devmap.q: expected coefficient array");
    q.coeffs.clear();
    for (const Json& c : p["q"]) q.coeffs.push_back(complex_of(c, "devmap.q"));
    custom_q = q.coeffs != model;
  }
  const auto ms = ints_of(opt(p, "m", Json{0, 1, 2}), "devmap.m");
  const auto radii = reals_of(opt(p, "radii", Json{4, 6, 8}), "devmap.radii");
  const auto sectors = ints_of(opt(p, "sectors", Json{0, 1, 2}), "devmap.sectors");
  Path path;
  if (p.contains("path")) {
    const Json pj = p["path"].is_array() ? Json{{"points", p["path"]}} : load(p, "path", "devmap");
    const Json& pts = field(pj, "points", "path");
    if (!pts.is_array() || pts.size() < 2) throw SchemaError("path.points: need at least two points");
    for (const Json& z : pts) path.points.push_back(complex_of(z, "path.points"));
  }
  for (int m : ms) {
    if (m < 0) throw SchemaError("devmap.m: exponents must be >= 0");
  }

  Stages st;
  if (!radii.empty() && !ms.empty() && !sectors.empty()) {
    st.push_back({"model_compare", [=](Artifacts& out) {
      if (custom_q) throw ValidationError("model comparison is defined for the model differential -(9/4) z only");
      std::vector<DevmapTask> tasks;
      for (double R : radii) {
        for (int s : sectors) {
          for (int m : ms) tasks.push_back({R, s, m});
        }
      }
      std::vector<ModelCompareResult> res(tasks.size());
      parallel_for(tasks.size(), [&](std::size_t i) {
        res[i] = model_compare(tasks[i].R, AntiStokesSector{tasks[i].sector}, tasks[i].m);
      });
      Csv csv({"R", "sector", "m", "sup_error", "scale_re", "scale_im", "fit_residual"});
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        csv.row({fmt(tasks[i].R), std::to_string(tasks[i].sector), std::to_string(tasks[i].m), fmt(res[i].sup_error),
                 fmt(res[i].scale.real()), fmt(res[i].scale.imag()), fmt(res[i].fit_residual)});
      }
      out.push_back({"devmap_model.csv", csv.str()});
    }});
  }
  if (!path.points.empty()) {
    st.push_back({"path", [=](Artifacts& out) {
      const DevelopingSolution sol = integrate_dev(q, path, Frame::identity());
      Csv csv({"index", "z_re", "z_im", "f_re", "f_im", "f_inf", "log_scale"});
      for (std::size_t i = 0; i < sol.samples.size(); ++i) {
        const DevSample& s = sol.samples[i];
        const bool inf = s.f.is_infinite();
        const Complex f = inf ? Complex{} : s.f.value();
        csv.row({std::to_string(i), fmt(s.z.real()), fmt(s.z.imag()), inf ? "" : fmt(f.real()), inf ? "" : fmt(f.imag()),
                 inf ? "1" : "0", fmt(s.log_scale)});
      }
      out.push_back({"devmap_path.csv", csv.str()});
    }});
  }
  return st;
}

// ---------------------------------------------------------------- graft

void cylinder_rows(Csv& csv, const std::string& prefix, const ThurstonMetricReport& r,
                   const std::vector<GraftLoop>& loops) {
  for (std::size_t i = 0; i < r.cylinders.size(); ++i) {
    const CylinderReport& c = r.cylinders[i];
    std::vector<std::string> row;
    if (!prefix.empty()) row.push_back(prefix);
    for (const std::string& x : {std::to_string(i), c.word, fmt(c.length), exact(loops[i].weight), exact(c.height),
                                 fmt(c.height.value()), fmt(c.modulus()), fmt(c.area())}) {
      row.push_back(x);
    }
    csv.row(row);
  }
}

Stages graft(const Json& p) {
  const FuchsianSurface s = fuchsian_of(load(p, "surface", "graft"));
  const auto loops = multiloop_of(load(p, "multiloop", "graft"));
  const Json tr = opt(p, "t_range", Json{{"from", "0"}, {"to", "1"}, {"steps", 4}});
  const Rational t0 = rational_of(field(tr, "from", "graft.t_range"), "graft.t_range.from");
  const Rational t1 = rational_of(field(tr, "to", "graft.t_range"), "graft.t_range.to");
  const long steps = integer_of(field(tr, "steps", "graft.t_range"), "graft.t_range.steps");
  if (steps < 0 || steps > 100000) throw SchemaError("graft.t_range.steps: out of range");
  Stages st;
  st.push_back({"graft", [=](Artifacts& out) {
    Csv cyl({"t", "loop", "word", "length", "weight", "height_exact", "height", "modulus", "area"});
    Csv sum({"t", "genus", "hyperbolic_area", "cylinder_area", "total_area", "holonomy_preserving"});
    for (long k = 0; k <= steps; ++k) {
      const Rational t = steps == 0 ? t0 : Rational(t0 + (t1 - t0) * Rational(k, steps));
      const ThurstonMetricReport r = grafting_ray_sample(s, loops, t);
      std::vector<GraftLoop> scaled = loops;
      for (auto& l : scaled) l.weight.amount *= t;
      cylinder_rows(cyl, to_string(t), r, scaled);
      sum.row({to_string(t), std::to_string(r.genus), exact(r.hyperbolic_area), fmt(r.cylinder_area()),
               fmt(r.total_area()), r.holonomy_preserving ? "1" : "0"});
    }
    out.push_back({"graft_cylinders.csv", cyl.str()});
    out.push_back({"graft_summary.csv", sum.str()});
  }});
  return st;
}

// ---------------------------------------------------------------- qc

struct QcItem {
  std::string name;
  std::function<DilatationReport()> run;
};

QcItem qc_item(const Json& j, std::size_t index) {
  const std::string where = "qc.items[" + std::to_string(index) + "]";
  const std::string kind = field(j, "kind", where).get<std::string>();
  const std::string name = j.contains("name") ? j["name"].get<std::string>() : kind + std::to_string(index);
  const int n = static_cast<int>(integer_of(opt(j, "n", Json(32)), where + ".n"));
  if (n < 2 || n > 1024) throw SchemaError(where + ".n: out of range");
  if (kind == "straighten") {
    const double delta = real_of(field(j, "delta", where), where + ".delta");
    const double height = real_of(opt(j, "height", Json(1.0)), where + ".height");
    const double width = real_of(opt(j, "target_width", Json(1.0)), where + ".target_width");
    return {name, [=] {
      return dilatation(straighten_rectangle(build_hyp_rectangle(HPoint::make(0.0, 1.0), height, delta), width, n));
    }};
  }
  if (kind == "hexagon") {
    const GraftedHexagon src{real_of(field(j, "depth", where), where + ".depth"),
                             real_of(field(j, "graft", where), where + ".graft"),
                             real_of(opt(j, "central_depth", Json(0.0)), where + ".central_depth")};
    const FlatHexagon dst{real_of(field(j, "m", where), where + ".m"), real_of(field(j, "r", where), where + ".r"),
                          real_of(opt(j, "central", Json(0.0)), where + ".central")};
    return {name, [=] { return hexagon_map(src, dst, n).report; }};
  }
  if (kind == "affine") {
    const Json& m = field(j, "matrix", where);
    if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2) {
      throw SchemaError(where + ".matrix: expected [[a, b], [c, d]]");
    }
    const double a = real_of(m[0][0], where), b = real_of(m[0][1], where);
    const double c = real_of(m[1][0], where), d = real_of(m[1][1], where);
    return {name, [=] {
      MeshMap map;
      map.pieces.push_back(make_piece("affine", n, n, MeshMetric::euclidean,
                                      [](double s, double t) { return Vec2{s, t}; },
                                      [=](double s, double t) { return Vec2{a * s + b * t, c * s + d * t}; }));
      return dilatation(map);
    }};
  }
  throw SchemaError(where + ".kind: expected straighten, hexagon or affine");
}

Stages qc(const Json& p) {
  const Json pj = load(p, "pipeline", "qc");
  const Json& items = field(pj, "items", "qc");
  if (!items.is_array()) throw SchemaError("qc.items: expected an array");
  std::vector<QcItem> work;
  for (std::size_t i = 0; i < items.size(); ++i) work.push_back(qc_item(items[i], i));
  Stages st;
  st.push_back({"qc", [=](Artifacts& out) {
    std::vector<DilatationReport> res(work.size());
    parallel_for(work.size(), [&](std::size_t i) { res[i] = work[i].run(); });
    Csv csv({"item", "piece", "supK", "meanK", "minStretch", "maxStretch"});
    for (std::size_t i = 0; i < work.size(); ++i) {
      for (const PieceDilatation& pd : res[i].pieces) {
        csv.row({work[i].name, pd.name, fmt(pd.sup_K), fmt(pd.mean_K), fmt(pd.min_stretch), fmt(pd.max_stretch)});
      }
      csv.row({work[i].name, "*", fmt(res[i].sup_K), fmt(res[i].mean_K), fmt(res[i].min_stretch), fmt(res[i].max_stretch)});
    }
    out.push_back({"qc.csv", csv.str()});
  }});
  return st;
}

// ---------------------------------------------------------------- raycompare

SlopeCurve slope_of(const Json& j) {
  if (!j.is_string()) throw SchemaError("raycompare.slope: expected \"p/q\"");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) throw SchemaError("");
    std::size_t used = 0;
    const long pp = std::stol(s.substr(0, slash), &used);
    if (used != slash) throw SchemaError("");
    const std::string qs = s.substr(slash + 1);
    const long qq = std::stol(qs, &used);
    if (used != qs.size()) throw SchemaError("");
    return {pp, qq};
  } catch (const std::exception&) {
    throw SchemaError("raycompare.slope: expected \"p/q\", got \"" + s + "\"");
  }
}

Stages raycompare(const Json& p) {
  const Complex tau = complex_of(field(p, "tau", "raycompare"), "raycompare.tau");
  const SlopeCurve c = slope_of(field(p, "slope", "raycompare"));
  const Range r = range_of(opt(p, "s_range", Json{{"from", 0}, {"to", 6}, {"steps", 12}}), "raycompare.s_range");
  Stages st;
  st.push_back({"raycompare", [=](Artifacts& out) {
    const TorusPoint t = TorusPoint::make(tau);
    const SlopeCurve cc = SlopeCurve::make(c.p, c.q);
    std::vector<double> grid;
    for (int k = 0; k <= r.steps; ++k) grid.push_back(r.at(k));
    const RayComparisonReport rep = ray_compare(t, cc, grid);
    Csv csv({"s", "teich_re", "teich_im", "graft_re", "graft_im", "weight", "gap"});
    for (const auto& row : rep.rows) {
      csv.row({fmt(row.s), fmt(row.teich.tau.real()), fmt(row.teich.tau.imag()), fmt(row.graft.tau.real()),
               fmt(row.graft.tau.imag()), fmt(matched_weight(t, cc, row.s)), fmt(row.gap)});
    }
    Csv sum({"d", "decreasing_from"});
    sum.row({fmt(rep.d), fmt(rep.decreasing_from)});
    out.push_back({"raycompare.csv", csv.str()});
    out.push_back({"raycompare_summary.csv", sum.str()});
  }});
  return st;
}

// ---------------------------------------------------------------- tt-approx

void approx_rows(const TrainTrack& t, const std::string& label, const WeightVector& w, Csv& per_branch, Csv& summary,
                 Csv& loops) {
  const IntegralApproximation a = integral_approximation(t, w);
  for (std::size_t b = 0; b < w.size(); ++b) {
    const Rational dev = Rational(a.weights[b]) - w[b];
    per_branch.row({label, std::to_string(b), to_string(w[b]), std::to_string(a.weights[b]), to_string(dev)});
  }
  summary.row({label, to_string(a.max_deviation), std::to_string(a.k_impl), check_switch(t, a.weights) ? "1" : "0"});
  const WeightedMultiloop ml = weights_to_multiloop(t, a.weights);
  for (std::size_t i = 0; i < ml.loops.size(); ++i) {
    loops.row({label, std::to_string(i), join(ml.loops[i].branches), std::to_string(ml.loops[i].weight)});
  }
}

WeightVector random_balanced(const TrainTrack& t, std::mt19937_64& rng, long max_num, long max_den) {
  const std::size_t nf = free_branches(t).size();
  std::uniform_int_distribution<long> num(1, max_num), den(1, max_den);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    WeightVector f;
    for (std::size_t i = 0; i < nf; ++i) f.push_back(Rational(num(rng), den(rng)));
    WeightVector w = complete_balanced(t, f);
    bool positive = true;
    for (const Rational& x : w) positive = positive && x > 0;
    if (positive) return w;
  }
  throw ValidationError("no positive balanced weights found for this track");
}

Stages tt_approx(const Json& p, std::uint64_t seed) {
  const TrainTrack t = track_of(load(p, "track", "tt-approx"));
  std::vector<WeightVector> vectors;
  if (p.contains("weights")) {
    const Json wj = p["weights"].is_string() ? read_json(p["weights"].get<std::string>()) : p["weights"];
    const Json& vs = wj.is_object() ? field(wj, "vectors", "weights") : wj;
    if (!vs.is_array()) throw SchemaError("tt-approx.weights: expected an array of weight vectors");
    for (std::size_t i = 0; i < vs.size(); ++i) vectors.push_back(weights_of(vs[i], "weights[" + std::to_string(i) + "]"));
  }
  const long samples = integer_of(opt(p, "samples", Json(0)), "tt-approx.samples");
  const long max_num = integer_of(opt(p, "max_numerator", Json(40)), "tt-approx.max_numerator");
  const long max_den = integer_of(opt(p, "max_denominator", Json(12)), "tt-approx.max_denominator");
  if (samples < 0 || max_num < 1 || max_den < 1) throw SchemaError("tt-approx: samples, max_numerator, max_denominator out of range");
  if (vectors.empty() && samples == 0) throw SchemaError("tt-approx: give \"weights\" or \"samples\"");
  Stages st;
  st.push_back({"tt-approx", [=](Artifacts& out) {
    std::vector<WeightVector> all = vectors;
    std::mt19937_64 rng(seed);
    for (long i = 0; i < samples; ++i) all.push_back(random_balanced(t, rng, max_num, max_den));
    Csv per({"vector", "branch", "weight", "integer", "deviation"});
    Csv sum({"vector", "max_deviation", "k_impl", "balanced"});
    Csv loops({"vector", "loop", "branches", "weight"});
    for (std::size_t i = 0; i < all.size(); ++i) approx_rows(t, std::to_string(i), all[i], per, sum, loops);
    out.push_back({"tt_weights.csv", per.str()});
    out.push_back({"tt_summary.csv", sum.str()});
    out.push_back({"tt_loops.csv", loops.str()});
  }});
  return st;
}

// ---------------------------------------------------------------- pipeline

// Q-linear map Q(sqrt D) -> Q; it preserves linear relations such as the
// switch conditions.
Rational rational_image(const QuadNumber& x) {
  if (x.is_rational()) return x.a();
  return x.a() + x.b() * rational_from_double(std::sqrt(static_cast<double>(x.D())));
}

// Hyperbolic structure on the flat surface's topology: the regular polygon
// with the same side pairing.
FuchsianSurface polygon_group_of(const SurfaceInput& surf) {
  const HalfTranslationSurface s = build_surface(surf);
  if (surf.polygons.size() != 1 || s.vertex_classes().size() != 1) {
    throw ValidationError("pipeline.surface: needs one polygon whose corners all glue to one point");
  }
  std::vector<std::pair<int, int>> pairs;
  for (const Gluing& g : surf.gluings) pairs.emplace_back(g.from.edge, g.to.edge);
  return regular_polygon_group(static_cast<int>(surf.polygons[0].size()), pairs);
}

// Crossing edge `from` of gluing i reads letter i, crossing `to` its inverse;
// the result is cyclically reduced.
std::string loop_word(const FatTraintrackDecomposition& d, const SurfaceInput& surf, const std::vector<int>& branches) {
  std::string w;
  for (const EdgeRef& e : carried_curve_crossings(d, branches)) {
    char c = 0;
    for (std::size_t i = 0; i < surf.gluings.size() && c == 0; ++i) {
      if (surf.gluings[i].from == e) c = static_cast<char>('a' + i);
      if (surf.gluings[i].to == e) c = static_cast<char>('A' + i);
    }
    if (!w.empty() && w.back() != c && std::tolower(w.back()) == std::tolower(c)) {
      w.pop_back();
    } else {
      w += c;
    }
  }
  while (w.size() > 1 && w.front() != w.back() && std::tolower(w.front()) == std::tolower(w.back())) {
    w = w.substr(1, w.size() - 2);
  }
  if (w.empty()) throw GeometryError("carried loop is null-homotopic");
  return w;
}

Stages pipeline(const Json& p) {
  const SurfaceInput surf = surface_of(load(p, "surface", "pipeline"));
  const FuchsianSurface fs = polygon_group_of(surf);
  Point2 dir{QuadNumber(0), QuadNumber(1)};
  if (p.contains("direction")) {
    const Json& d = p["direction"];
    if (!d.is_array() || d.size() != 2) throw SchemaError("pipeline.direction: expected [x, y]");
    dir = {quad_of(d[0], "pipeline.direction"), quad_of(d[1], "pipeline.direction")};
  }
  const QuadNumber radius = quad_of(field(p, "radius", "pipeline"), "pipeline.radius");
  const long splits = integer_of(opt(p, "splits", Json(0)), "pipeline.splits");
  if (splits < 0 || splits > 100) throw SchemaError("pipeline.splits: out of range");
  const double s_x = real_of(field(p, "s_x", "pipeline"), "pipeline.s_x");
  const double s_y = real_of(field(p, "s_y", "pipeline"), "pipeline.s_y");
  const double dconst = real_of(opt(p, "d", Json(1.0)), "pipeline.d");
  if (!(dconst > 0.0)) throw SchemaError("pipeline.d: must be positive");
  struct Target {
    std::string label;
    double s;
  };
  const std::vector<Target> targets{{"X", s_x}, {"Y", s_y}};
  auto state = std::make_shared<std::map<std::string, FatTraintrackDecomposition>>();
  auto weights = std::make_shared<std::map<std::string, WeightVector>>();
  auto approx = std::make_shared<std::map<std::string, IntegralApproximation>>();

  Stages st;
  st.push_back({"decompose", [=](Artifacts& out) {
    const HalfTranslationSurface base = shear_to_vertical(build_surface(surf), dir);
    Csv csv({"target", "s", "branch", "width_exact", "width", "height"});
    for (const Target& tg : targets) {
      FatTraintrackDecomposition d = traintrack_decomposition(stretch(base, tg.s), {QuadNumber(0), QuadNumber(1)}, radius);
      for (long k = 0; k < splits; ++k) d = split(d);
      const QuadWeights w = d.widths();
      for (std::size_t b = 0; b < w.size(); ++b) {
        const Json wj = to_json(w[b]);
        csv.row({tg.label, fmt(tg.s), std::to_string(b), wj.is_string() ? wj.get<std::string>() : wj.dump(),
                 fmt(w[b].to_double()), fmt(d.rectangles()[b].height.to_double())});
      }
      state->insert_or_assign(tg.label, d);
    }
    out.push_back({"pipeline_track.csv", csv.str()});
  }});
  st.push_back({"integral_approximation", [=](Artifacts& out) {
    const Rational scale = rational_from_double(dconst / (2.0 * std::numbers::pi));
    for (const Target& tg : targets) {
      const auto& d = state->at(tg.label);
      WeightVector w;
      for (const QuadNumber& x : d.widths()) w.push_back(scale * rational_image(x));
      const IntegralApproximation a = integral_approximation(d.track(), w);
      weights->insert_or_assign(tg.label, w);
      approx->insert_or_assign(tg.label, a);
      const WeightedMultiloop ml = weights_to_multiloop(d.track(), a.weights);
      Csv csv({"loop", "branches", "weight", "word"});
      for (std::size_t i = 0; i < ml.loops.size(); ++i) {
        csv.row({std::to_string(i), join(ml.loops[i].branches), std::to_string(ml.loops[i].weight) + "*2pi",
                 loop_word(d, surf, ml.loops[i].branches)});
      }
      out.push_back({"multiloop_" + tg.label + ".csv", csv.str()});
    }
  }});
  st.push_back({"graft", [=](Artifacts& out) {
    Csv sum({"target", "s", "loops", "genus", "hyperbolic_area", "cylinder_area", "total_area", "max_deviation",
             "holonomy_preserving"});
    for (const Target& tg : targets) {
      const auto& d = state->at(tg.label);
      const IntegralApproximation& a = approx->at(tg.label);
      const WeightedMultiloop ml = weights_to_multiloop(d.track(), a.weights);
      std::vector<GraftLoop> loops;
      for (const Loop& l : ml.loops) loops.push_back({loop_word(d, surf, l.branches), Weight{Rational(l.weight), true}});
      const ThurstonMetricReport r = graft_surface(fs, loops);
      Csv csv({"loop", "word", "length", "weight", "height_exact", "height", "modulus", "area"});
      cylinder_rows(csv, "", r, loops);
      out.push_back({"thurston_" + tg.label + ".csv", csv.str()});
      sum.row({tg.label, fmt(tg.s), std::to_string(loops.size()), std::to_string(r.genus), exact(r.hyperbolic_area),
               fmt(r.cylinder_area()), fmt(r.total_area()), fmt(to_double(a.max_deviation)),
               r.holonomy_preserving ? "1" : "0"});
    }
    out.push_back({"pipeline_summary.csv", sum.str()});
  }});
  return st;
}

}  // namespace

Stages stages_for(const ExperimentConfig& cfg) {
  const Json& p = cfg.params;
  if (cfg.kind == "devmap") return devmap(p);
  if (cfg.kind == "graft") return graft(p);
  if (cfg.kind == "qc") return qc(p);
  if (cfg.kind == "raycompare") return raycompare(p);
  if (cfg.kind == "tt-approx") return tt_approx(p, cfg.seed);
  if (cfg.kind == "pipeline") return pipeline(p);
  throw SchemaError("unknown experiment kind \"" + cfg.kind + "\"");
}

}  // namespace graftlab::runner
