#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "graftlab/error.hpp"
#include "graftlab/exact.hpp"
#include "graftlab/flat_surfaces.hpp"
#include "graftlab/grafting.hpp"
#include "graftlab/traintracks.hpp"

namespace graftlab::runner {

using Json = nlohmann::json;

// Malformed JSON or a document that does not follow its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Missing, unreadable or unwritable file.
class FileError : public Error {
 public:
  using Error::Error;
};

std::string read_text(const std::filesystem::path& p);
Json parse_json(const std::string& text, const std::string& origin);
Json read_json(const std::filesystem::path& p);

// Typed field access; `where` prefixes error messages.
const Json& field(const Json& j, const std::string& key, const std::string& where);

Rational rational_of(const Json& j, const std::string& where);
QuadNumber quad_of(const Json& j, const std::string& where);
std::complex<double> complex_of(const Json& j, const std::string& where);
double real_of(const Json& j, const std::string& where);
long integer_of(const Json& j, const std::string& where);

Json to_json(const Rational& r);
Json to_json(const QuadNumber& q);

SurfaceInput surface_of(const Json& j);
TrainTrack track_of(const Json& j);
WeightVector weights_of(const Json& j, const std::string& where);
FuchsianSurface fuchsian_of(const Json& j);
std::vector<GraftLoop> multiloop_of(const Json& j);

// RFC 4180 style CSV with LF line endings.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<std::string>& cells);
  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
  [[nodiscard]] std::string str() const { return text_; }

 private:
  std::vector<std::string> header_;
  std::string text_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Shortest text that reads back to the same double.
std::string fmt(double v);

std::string sha256_hex(const std::string& bytes);

}  // namespace graftlab::runner
