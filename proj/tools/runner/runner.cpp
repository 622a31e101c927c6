#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include "experiments.hpp"

namespace graftlab::runner {

namespace fs = std::filesystem;

int exit_code_of(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return exit_schema;
  if (dynamic_cast<const FileError*>(&e)) return exit_file;
  if (dynamic_cast<const ValidationError*>(&e)) return exit_invalid_input;
  if (dynamic_cast<const GeometryError*>(&e)) return exit_geometry;
  if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
  return exit_internal;
}

const char* error_kind(const std::exception& e) {
  switch (exit_code_of(e)) {
    case exit_schema: return "schema";
    case exit_file: return "file";
    case exit_invalid_input: return "invalid_input";
    case exit_geometry: return "geometry";
    case exit_numerical: return "numerical";
    default: return "internal";
  }
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"devmap", "graft", "qc", "raycompare", "tt-approx", "pipeline"};
  return k;
}

const std::vector<std::string>& config_keys(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"devmap", {"q", "m", "radii", "sectors", "path"}},
      {"graft", {"surface", "multiloop", "t_range"}},
      {"qc", {"pipeline"}},
      {"raycompare", {"tau", "slope", "s_range"}},
      {"tt-approx", {"track", "weights", "samples", "max_numerator", "max_denominator"}},
      {"pipeline", {"surface", "direction", "radius", "splits", "s_x", "s_y", "d"}},
  };
  const auto it = keys.find(kind);
  if (it == keys.end()) throw SchemaError("unknown experiment kind \"" + kind + "\"");
  return it->second;
}

namespace {

const std::vector<std::string> path_keys{"surface", "multiloop", "path", "pipeline", "track", "weights"};

void resolve_paths(Json& j, const fs::path& base) {
  for (const std::string& k : path_keys) {
    if (j.contains(k) && j[k].is_string()) {
      const fs::path p = j[k].get<std::string>();
      if (p.is_relative()) j[k] = (base / p).lexically_normal().string();
    }
  }
}

}  // namespace

ExperimentConfig make_config(const std::string& kind, const Json& doc, const fs::path& base_dir,
                             const Json& overrides, const fs::path& override_dir) {
  const auto& keys = config_keys(kind);
  if (!doc.is_object()) throw SchemaError("config: expected a JSON object");
  ExperimentConfig cfg;
  cfg.kind = kind;
  auto take = [&](const Json& src, const fs::path& base, const std::string& origin) {
    Json copy = src;
    resolve_paths(copy, base);
    for (const auto& [k, v] : copy.items()) {
      if (k == "experiment") {
        if (v != kind) throw SchemaError(origin + ": experiment is \"" + v.dump() + "\", expected \"" + kind + "\"");
      } else if (k == "output_dir") {
        if (!v.is_string()) throw SchemaError(origin + ".output_dir: expected a string");
        const fs::path p = v.get<std::string>();
        cfg.output_dir = p.is_relative() ? (base / p).lexically_normal() : p;
      } else if (k == "seed") {
        if (!v.is_number_unsigned()) throw SchemaError(origin + ".seed: expected a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
      } else if (std::find(keys.begin(), keys.end(), k) != keys.end()) {
        cfg.params[k] = v;
      } else {
        throw SchemaError(origin + ": unknown key \"" + k + "\" for " + kind);
      }
    }
  };
  take(doc, base_dir, "config");
  take(overrides, override_dir, "overrides");
  return cfg;
}

namespace {

// The pipeline writes the same files for both targets.
std::map<std::string, std::vector<ColumnDoc>> with_second_target(std::map<std::string, std::vector<ColumnDoc>> docs) {
  auto& p = docs["pipeline"];
  std::vector<ColumnDoc> extra;
  for (const ColumnDoc& c : p) {
    const auto pos = c.file.find("_X.");
    if (pos != std::string::npos) extra.push_back({c.file.substr(0, pos) + "_Y" + c.file.substr(pos + 2), c.column, c.meaning});
  }
  p.insert(p.end(), extra.begin(), extra.end());
  return docs;
}

}  // namespace

const std::vector<ColumnDoc>& column_docs(const std::string& kind) {
  static const std::map<std::string, std::vector<ColumnDoc>> docs = with_second_target({
      {"devmap",
       {{"devmap_model.csv", "R", "outer radius of the compared arc"},
        {"devmap_model.csv", "sector", "anti-Stokes sector index k, centred on arg z = 2 pi k / 3"},
        {"devmap_model.csv", "m", "weight exponent in sup |f/lambda - model| R^m"},
        {"devmap_model.csv", "sup_error", "sup of the weighted error on the middle third of the sector"},
        {"devmap_model.csv", "scale_re", "real part of the fitted normalization lambda"},
        {"devmap_model.csv", "scale_im", "imaginary part of lambda"},
        {"devmap_model.csv", "fit_residual", "relative least-squares residual of the fit"},
        {"devmap_path.csv", "index", "path vertex index"},
        {"devmap_path.csv", "z_re", "vertex real part"},
        {"devmap_path.csv", "z_im", "vertex imaginary part"},
        {"devmap_path.csv", "f_re", "developing map w1/w2, real part (empty at infinity)"},
        {"devmap_path.csv", "f_im", "developing map, imaginary part (empty at infinity)"},
        {"devmap_path.csv", "f_inf", "1 if f is infinite at the vertex"},
        {"devmap_path.csv", "log_scale", "log of the frame renormalization"}}},
      {"graft",
       {{"graft_cylinders.csv", "t", "ray parameter (exact rational)"},
        {"graft_cylinders.csv", "loop", "loop index in the multiloop file"},
        {"graft_cylinders.csv", "word", "loop as a word in the generators"},
        {"graft_cylinders.csv", "length", "hyperbolic length = cylinder circumference"},
        {"graft_cylinders.csv", "weight", "exact weight t w, suffix *2pi for multiples of 2 pi"},
        {"graft_cylinders.csv", "height_exact", "cylinder height as a*pi+b"},
        {"graft_cylinders.csv", "height", "cylinder height"},
        {"graft_cylinders.csv", "modulus", "height / circumference"},
        {"graft_cylinders.csv", "area", "height * circumference"},
        {"graft_summary.csv", "t", "ray parameter"},
        {"graft_summary.csv", "genus", "genus of the surface"},
        {"graft_summary.csv", "hyperbolic_area", "exact area of the hyperbolic part, a*pi+b"},
        {"graft_summary.csv", "cylinder_area", "total area of the inserted cylinders"},
        {"graft_summary.csv", "total_area", "Thurston-metric area"},
        {"graft_summary.csv", "holonomy_preserving", "1 if every weight is an integer multiple of 2 pi"}}},
      {"qc",
       {{"qc.csv", "item", "item name from the pipeline file"},
        {"qc.csv", "piece", "mesh piece name, * for the whole item"},
        {"qc.csv", "supK", "largest cellwise dilatation"},
        {"qc.csv", "meanK", "mean cellwise dilatation"},
        {"qc.csv", "minStretch", "smallest singular value in the source and target metrics"},
        {"qc.csv", "maxStretch", "largest singular value"}}},
      {"raycompare",
       {{"raycompare.csv", "s", "ray parameter"},
        {"raycompare.csv", "teich_re", "Teichmueller ray point, Re tau"},
        {"raycompare.csv", "teich_im", "Teichmueller ray point, Im tau"},
        {"raycompare.csv", "graft_re", "grafted torus, Re tau"},
        {"raycompare.csv", "graft_im", "grafted torus, Im tau"},
        {"raycompare.csv", "weight", "matched grafting height in unit-circumference units"},
        {"raycompare.csv", "gap", "Teichmueller distance between the two points"},
        {"raycompare_summary.csv", "d", "flat length of the slope curve at unit area"},
        {"raycompare_summary.csv", "decreasing_from", "first s of the strictly decreasing tail of gap"}}},
      {"tt-approx",
       {{"tt_weights.csv", "vector", "weight vector index"},
        {"tt_weights.csv", "branch", "branch index"},
        {"tt_weights.csv", "weight", "input weight (exact rational)"},
        {"tt_weights.csv", "integer", "integral approximation"},
        {"tt_weights.csv", "deviation", "integer - weight (exact)"},
        {"tt_summary.csv", "vector", "weight vector index"},
        {"tt_summary.csv", "max_deviation", "largest per-branch deviation (exact)"},
        {"tt_summary.csv", "k_impl", "guaranteed deviation bound"},
        {"tt_summary.csv", "balanced", "1 if the integer vector satisfies every switch condition"},
        {"tt_loops.csv", "vector", "weight vector index"},
        {"tt_loops.csv", "loop", "loop index"},
        {"tt_loops.csv", "branches", "cyclic branch sequence, space separated"},
        {"tt_loops.csv", "weight", "loop multiplicity"}}},
      {"pipeline",
       {{"pipeline_track.csv", "target", "X or Y"},
        {"pipeline_track.csv", "s", "stretch parameter"},
        {"pipeline_track.csv", "branch", "branch index"},
        {"pipeline_track.csv", "width_exact", "rectangle width, rational or {a,b,D} JSON"},
        {"pipeline_track.csv", "width", "rectangle width"},
        {"pipeline_track.csv", "height", "rectangle height"},
        {"multiloop_X.csv", "loop", "loop index"},
        {"multiloop_X.csv", "branches", "cyclic branch sequence"},
        {"multiloop_X.csv", "weight", "grafting weight, n*2pi"},
        {"multiloop_X.csv", "word", "loop as a word in the side-pairing generators"},
        {"thurston_X.csv", "loop", "loop index"},
        {"thurston_X.csv", "word", "loop word"},
        {"thurston_X.csv", "length", "hyperbolic length"},
        {"thurston_X.csv", "weight", "exact weight"},
        {"thurston_X.csv", "height_exact", "cylinder height as a*pi+b"},
        {"thurston_X.csv", "height", "cylinder height"},
        {"thurston_X.csv", "modulus", "height / circumference"},
        {"thurston_X.csv", "area", "height * circumference"},
        {"pipeline_summary.csv", "target", "X or Y"},
        {"pipeline_summary.csv", "s", "stretch parameter"},
        {"pipeline_summary.csv", "loops", "number of loops"},
        {"pipeline_summary.csv", "genus", "genus"},
        {"pipeline_summary.csv", "hyperbolic_area", "exact hyperbolic area"},
        {"pipeline_summary.csv", "cylinder_area", "total cylinder area"},
        {"pipeline_summary.csv", "total_area", "Thurston-metric area"},
        {"pipeline_summary.csv", "max_deviation", "largest deviation of the integral approximation"},
        {"pipeline_summary.csv", "holonomy_preserving", "1 if all weights are in 2 pi Z"}}},
  });
  const auto it = docs.find(kind);
  if (it == docs.end()) throw SchemaError("unknown experiment kind \"" + kind + "\"");
  return it->second;
}

int thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("GRAFTLAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw SchemaError("GRAFTLAB_THREADS must be a positive integer");
    n = std::min<long>(n, cap);
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  // Report the first failure in index order.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

RunReport compute(const ExperimentConfig& cfg) {
  RunReport rep;
  const Stages stages = stages_for(cfg);
  for (const Stage& s : stages) {
    try {
      s.run(rep.files);
    } catch (const std::exception& e) {
      rep.errors.push_back({s.name, error_kind(e), e.what()});
      rep.exit_code = exit_code_of(e);
      break;
    }
  }
  return rep;
}

namespace {

void write_atomic(const fs::path& target, const std::string& bytes) {
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FileError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw FileError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

RunReport run(const ExperimentConfig& cfg, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const int threads = thread_count();
  RunReport rep = compute(cfg);

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw FileError("cannot create " + cfg.output_dir.string() + ": " + ec.message());

  Json files = Json::array();
  for (const Artifact& a : rep.files) {
    write_atomic(cfg.output_dir / a.name, a.content);
    files.push_back({{"name", a.name}, {"sha256", sha256_hex(a.content)}, {"bytes", a.content.size()}});
    log << "wrote " << (cfg.output_dir / a.name).string() << "\n";
  }
  Json errors = Json::array();
  for (const ErrorEntry& e : rep.errors) {
    errors.push_back({{"stage", e.stage}, {"kind", e.kind}, {"message", e.message}});
    log << "error in " << e.stage << " (" << e.kind << "): " << e.message << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Json manifest{{"tool", "graftlab"},
                      {"version", GRAFTLAB_VERSION},
                      {"experiment", cfg.kind},
                      {"parameters", cfg.params},
                      {"seed", cfg.seed},
                      {"threads", threads},
                      {"status", rep.errors.empty() ? "ok" : "error"},
                      {"files", files},
                      {"errors", errors},
                      {"wall_time_s", wall}};
  write_atomic(cfg.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return rep;
}

}  // namespace graftlab::runner
