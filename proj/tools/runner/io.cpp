#include "io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace graftlab::runner {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw FileError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(origin + ": malformed JSON: " + e.what());
  }
}

Json read_json(const std::filesystem::path& p) { return parse_json(read_text(p), p.string()); }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing \"" + key + "\"");
  return *it;
}

Rational rational_of(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw SchemaError(where + ": expected a rational \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error&) {
    throw SchemaError(where + ": bad rational \"" + j.get<std::string>() + "\"");
  }
}

QuadNumber quad_of(const Json& j, const std::string& where) {
  if (!j.is_object()) return QuadNumber(rational_of(j, where));
  const Json& d = field(j, "D", where);
  if (!d.is_number_integer() || d.get<long long>() <= 0) throw SchemaError(where + ": D must be a positive integer");
  return {rational_of(field(j, "a", where), where + ".a"), rational_of(field(j, "b", where), where + ".b"),
          d.get<std::int64_t>()};
}

double real_of(const Json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  return j.get<double>();
}

long integer_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long>();
}

std::complex<double> complex_of(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError(where + ": expected a number or [re, im]");
}

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const QuadNumber& q) {
  if (q.is_rational()) return to_json(q.a());
  return Json{{"a", to_string(q.a())}, {"b", to_string(q.b())}, {"D", q.D()}};
}

namespace {

std::pair<int, int> index_pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(where + ": expected [polygon, index]");
  return {static_cast<int>(integer_of(j[0], where)), static_cast<int>(integer_of(j[1], where))};
}

}  // namespace

SurfaceInput surface_of(const Json& j) {
  SurfaceInput in;
  const Json& polys = field(j, "polygons", "surface");
  if (!polys.is_array()) throw SchemaError("surface.polygons: expected an array");
  for (std::size_t p = 0; p < polys.size(); ++p) {
    const std::string w = "surface.polygons[" + std::to_string(p) + "]";
    if (!polys[p].is_array()) throw SchemaError(w + ": expected an array of points");
    std::vector<Point2> poly;
    for (std::size_t v = 0; v < polys[p].size(); ++v) {
      const Json& pt = polys[p][v];
      const std::string wv = w + "[" + std::to_string(v) + "]";
      if (!pt.is_array() || pt.size() != 2) throw SchemaError(wv + ": expected [x, y]");
      poly.push_back({quad_of(pt[0], wv), quad_of(pt[1], wv)});
    }
    in.polygons.push_back(std::move(poly));
  }
  const Json& glue = field(j, "gluings", "surface");
  if (!glue.is_array()) throw SchemaError("surface.gluings: expected an array");
  for (std::size_t i = 0; i < glue.size(); ++i) {
    const std::string w = "surface.gluings[" + std::to_string(i) + "]";
    const auto [fp, fe] = index_pair(field(glue[i], "from", w), w + ".from");
    const auto [tp, te] = index_pair(field(glue[i], "to", w), w + ".to");
    GluingKind kind = GluingKind::translation;
    if (glue[i].contains("kind")) {
      const Json& k = glue[i]["kind"];
      if (k == "translation") {
        kind = GluingKind::translation;
      } else if (k == "flip") {
        kind = GluingKind::flip;
      } else {
        throw SchemaError(w + ".kind: expected \"translation\" or \"flip\"");
      }
    }
    in.gluings.push_back({{fp, fe}, {tp, te}, kind});
  }
  if (j.contains("singular")) {
    const Json& s = j["singular"];
    if (!s.is_array()) throw SchemaError("surface.singular: expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto [p, v] = index_pair(s[i], "surface.singular[" + std::to_string(i) + "]");
      in.marked_singular.push_back({p, v});
    }
  }
  return in;
}

TrainTrack track_of(const Json& j) {
  const int b = static_cast<int>(integer_of(field(j, "branches", "track"), "track.branches"));
  const Json& sw = field(j, "switches", "track");
  if (!sw.is_array()) throw SchemaError("track.switches: expected an array");
  std::vector<Switch> out;
  for (std::size_t i = 0; i < sw.size(); ++i) {
    const std::string w = "track.switches[" + std::to_string(i) + "]";
    const Json& o = field(sw[i], "out", w);
    if (!o.is_array() || o.size() != 2) throw SchemaError(w + ".out: expected [b1, b2]");
    out.push_back({static_cast<int>(integer_of(field(sw[i], "in", w), w + ".in")),
                   {static_cast<int>(integer_of(o[0], w + ".out")), static_cast<int>(integer_of(o[1], w + ".out"))}});
  }
  return TrainTrack(b, std::move(out));
}

WeightVector weights_of(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of rationals");
  WeightVector w;
  for (std::size_t i = 0; i < j.size(); ++i) w.push_back(rational_of(j[i], where + "[" + std::to_string(i) + "]"));
  return w;
}

FuchsianSurface fuchsian_of(const Json& j) {
  FuchsianSurface s;
  const Json& g = field(j, "generators", "fuchsian");
  if (!g.is_object() || g.empty()) throw SchemaError("fuchsian.generators: expected a non-empty object");
  for (const auto& [name, m] : g.items()) {
    const std::string w = "fuchsian.generators." + name;
    if (name.size() != 1 || !std::islower(static_cast<unsigned char>(name[0]))) {
      throw SchemaError(w + ": generator names are single lower-case letters");
    }
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 ||
        m[1].size() != 2) {
      throw SchemaError(w + ": expected [[a, b], [c, d]]");
    }
    s.generators.insert_or_assign(name[0], MoebiusMap(complex_of(m[0][0], w), complex_of(m[0][1], w),
                                                      complex_of(m[1][0], w), complex_of(m[1][1], w)));
    s.labels.push_back(name);
  }
  const Json& r = field(j, "relation", "fuchsian");
  if (!r.is_string()) throw SchemaError("fuchsian.relation: expected a word");
  s.relation = r.get<std::string>();
  validate(s);
  return s;
}

std::vector<GraftLoop> multiloop_of(const Json& j) {
  const Json& loops = field(j, "loops", "multiloop");
  if (!loops.is_array()) throw SchemaError("multiloop.loops: expected an array");
  std::vector<GraftLoop> out;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const std::string w = "multiloop.loops[" + std::to_string(i) + "]";
    const Json& word = field(loops[i], "word", w);
    if (!word.is_string()) throw SchemaError(w + ".word: expected a string");
    bool two_pi = false;
    if (loops[i].contains("unit")) {
      const Json& u = loops[i]["unit"];
      if (u == "2pi") {
        two_pi = true;
      } else if (u != "1") {
        throw SchemaError(w + ".unit: expected \"1\" or \"2pi\"");
      }
    }
    out.push_back({word.get<std::string>(), Weight{rational_of(field(loops[i], "weight", w), w + ".weight"), two_pi}});
  }
  return out;
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw Error("CSV needs a header");
  row(header_);
}

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw Error("CSV row has " + std::to_string(cells.size()) + " cells, header has " + std::to_string(header_.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += quote(cells[i]);
  }
  text_ += '\n';
  return *this;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> cur;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      cur.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      cur.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(cur));
      cur.clear();
      any = false;
    } else if (c == '\r') {
      throw SchemaError("CSV: CR line ending");
    } else {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw SchemaError("CSV: unterminated quote");
  if (any || !cur.empty()) {
    cur.push_back(std::move(cell));
    rows.push_back(std::move(cur));
  }
  return rows;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace graftlab::runner
