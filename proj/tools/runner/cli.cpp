#include "cli.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "runner.hpp"

namespace graftlab::runner {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double number(const std::string& s, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(flag + ": bad number \"" + s + "\"");
  return v;
}

Json number_list(const std::string& s, const std::string& flag, bool integers) {
  Json out = Json::array();
  for (const std::string& x : split(s, ',')) {
    const double v = number(x, flag);
    if (integers) {
      if (v != static_cast<long>(v)) throw UsageError(flag + ": expected integers");
      out.push_back(static_cast<long>(v));
    } else {
      out.push_back(v);
    }
  }
  return out;
}

// "re" or "re:im" per coefficient.
Json complex_list(const std::string& s, const std::string& flag) {
  Json out = Json::array();
  for (const std::string& x : split(s, ',')) {
    const auto parts = split(x, ':');
    if (parts.size() == 1) {
      out.push_back(number(parts[0], flag));
    } else if (parts.size() == 2) {
      out.push_back({number(parts[0], flag), number(parts[1], flag)});
    } else {
      throw UsageError(flag + ": expected re or re:im");
    }
  }
  return out;
}

Json range(const std::string& s, const std::string& flag, bool rational) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError(flag + ": expected from:to:steps");
  const double steps = number(parts[2], flag);
  if (steps != static_cast<long>(steps)) throw UsageError(flag + ": steps must be an integer");
  if (rational) return {{"from", parts[0]}, {"to", parts[1]}, {"steps", static_cast<long>(steps)}};
  return {{"from", number(parts[0], flag)}, {"to", number(parts[1], flag)}, {"steps", static_cast<long>(steps)}};
}

using Converter = std::function<Json(const std::string&)>;

struct Flag {
  std::string name;  // without dashes
  std::string key;   // config key
  std::string help;
  Converter convert;
};

Converter as_string() {
  return [](const std::string& s) { return Json(s); };
}

std::vector<Flag> flags_for(const std::string& kind) {
  if (kind == "devmap") {
    return {{"q", "q", "polynomial coefficients of q, lowest degree first, re or re:im", [](const std::string& s) { return complex_list(s, "--q"); }},
            {"path", "path", "JSON file with {\"points\": [[x, y], ...]}", as_string()},
            {"m", "m", "comma separated weight exponents", [](const std::string& s) { return number_list(s, "--m", true); }},
            {"radii", "radii", "comma separated radii", [](const std::string& s) { return number_list(s, "--radii", false); }},
            {"sectors", "sectors", "comma separated sector indices", [](const std::string& s) { return number_list(s, "--sectors", true); }}};
  }
  if (kind == "graft") {
    return {{"surface", "surface", "Fuchsian group JSON", as_string()},
            {"multiloop", "multiloop", "multiloop JSON", as_string()},
            {"t-range", "t_range", "from:to:steps with rational ends", [](const std::string& s) { return range(s, "--t-range", true); }}};
  }
  if (kind == "qc") return {{"pipeline", "pipeline", "JSON file describing pieces and maps", as_string()}};
  if (kind == "raycompare") {
    return {{"tau", "tau", "torus modulus re,im", [](const std::string& s) {
               const Json v = number_list(s, "--tau", false);
               if (v.size() != 2) throw UsageError("--tau: expected re,im");
               return v;
             }},
            {"slope", "slope", "curve class p/q", as_string()},
            {"s-range", "s_range", "from:to:steps", [](const std::string& s) { return range(s, "--s-range", false); }}};
  }
  if (kind == "tt-approx") {
    return {{"track", "track", "train track JSON", as_string()},
            {"weights", "weights", "JSON array of weight vectors", as_string()},
            {"samples", "samples", "number of random balanced vectors", [](const std::string& s) {
               const double v = number(s, "--samples");
               return Json(static_cast<long>(v));
             }}};
  }
  if (kind == "pipeline") {
    return {{"surface", "surface", "half-translation surface JSON", as_string()},
            {"radius", "radius", "tripod radius, rational p/q", as_string()},
            {"splits", "splits", "number of splitting steps", [](const std::string& s) { return Json(static_cast<long>(number(s, "--splits"))); }},
            {"s-x", "s_x", "stretch parameter of the first target", [](const std::string& s) { return Json(number(s, "--s-x")); }},
            {"s-y", "s_y", "stretch parameter of the second target", [](const std::string& s) { return Json(number(s, "--s-y")); }}};
  }
  return {};
}

std::string columns_help(const std::string& kind) {
  std::string out = "\nCSV columns:\n";
  std::string file;
  for (const ColumnDoc& c : column_docs(kind)) {
    if (c.file != file) {
      file = c.file;
      out += "  " + file + "\n";
    }
    out += "    " + c.column + ": " + c.meaning + "\n";
  }
  return out;
}

const char* kAbout =
    "Experiments on grafting, developing maps and Teichmueller rays.\n"
    "Each subcommand reads --config file.json; flags override config keys.\n"
    "GRAFTLAB_THREADS caps the number of worker threads.\n"
    "Exit codes: 0 ok, 1 internal, 2 schema or malformed JSON, 3 file, 4 invalid input data,\n"
    "5 geometry, 6 numerical, 64 usage.";

}  // namespace

int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{kAbout, "graftlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GRAFTLAB_VERSION);

  struct SubState {
    std::string config;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::map<std::string, std::string> values;
    std::vector<Flag> flags;
  };
  std::map<std::string, SubState> state;
  std::map<std::string, CLI::App*> subs;
  for (const std::string& kind : experiment_kinds()) {
    SubState& s = state[kind];
    s.flags = flags_for(kind);
    CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", s.config, "experiment config (JSON)");
    sub->add_option("--output-dir", s.output_dir, "output directory");
    sub->add_option("--seed", s.seed, "random seed");
    sub->add_option("--set", s.sets, "override a config key: key=JSON value");
    for (const Flag& f : s.flags) {
      sub->add_option_function<std::string>("--" + f.name, [&s, f](const std::string& v) { s.values[f.key] = v; }, f.help);
    }
    sub->footer(columns_help(kind));
    subs[kind] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << GRAFTLAB_VERSION << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "graftlab: " << e.what() << "\n";
    return exit_usage;
  }

  std::string kind;
  for (const auto& [k, sub] : subs) {
    if (sub->parsed()) kind = k;
  }
  SubState& s = state[kind];
  try {
    Json overrides = Json::object();
    for (const Flag& f : s.flags) {
      const auto it = s.values.find(f.key);
      if (it != s.values.end()) overrides[f.key] = f.convert(it->second);
    }
    for (const std::string& kv : s.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("--set: expected key=value");
      const std::string value = kv.substr(eq + 1);
      Json v;
      try {
        v = Json::parse(value);
      } catch (const Json::parse_error&) {
        v = value;
      }
      overrides[kv.substr(0, eq)] = v;
    }
    if (!s.output_dir.empty()) overrides["output_dir"] = s.output_dir;
    if (s.seed) overrides["seed"] = *s.seed;

    Json doc = Json::object();
    fs::path base = fs::current_path();
    if (!s.config.empty()) {
      doc = read_json(s.config);
      base = fs::absolute(fs::path(s.config)).parent_path();
    }
    const ExperimentConfig cfg = make_config(kind, doc, base, overrides, fs::current_path());
    const RunReport rep = run(cfg, out);
    return rep.exit_code;
  } catch (const UsageError& e) {
    err << "graftlab: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "graftlab: " << error_kind(e) << " error: " << e.what() << "\n";
    return exit_code_of(e);
  }
}

}  // namespace graftlab::runner
