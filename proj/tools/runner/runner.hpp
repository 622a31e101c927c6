#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "io.hpp"

namespace graftlab::runner {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_schema = 2,
  exit_file = 3,
  exit_invalid_input = 4,
  exit_geometry = 5,
  exit_numerical = 6,
  exit_usage = 64,
};

int exit_code_of(const std::exception& e);
const char* error_kind(const std::exception& e);

struct ExperimentConfig {
  std::string kind;
  Json params = Json::object();  // merged config, relative paths already resolved
  std::filesystem::path output_dir = "graftlab_out";
  std::uint64_t seed = 1;
};

// Merges a config document with overrides (overrides win) and resolves
// relative input paths against `base_dir`. Throws SchemaError.
ExperimentConfig make_config(const std::string& kind, const Json& doc, const std::filesystem::path& base_dir,
                             const Json& overrides, const std::filesystem::path& override_dir);

struct Artifact {
  std::string name;
  std::string content;
};

struct ErrorEntry {
  std::string stage;
  std::string kind;
  std::string message;
};

struct RunReport {
  std::vector<Artifact> files;
  std::vector<ErrorEntry> errors;
  int exit_code = exit_ok;
};

// Column documentation: file name, column name, meaning.
struct ColumnDoc {
  std::string file;
  std::string column;
  std::string meaning;
};
const std::vector<ColumnDoc>& column_docs(const std::string& kind);
const std::vector<std::string>& experiment_kinds();
// Keys accepted in the config of an experiment.
const std::vector<std::string>& config_keys(const std::string& kind);

// Worker count: hardware concurrency capped by GRAFTLAB_THREADS.
int thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Parses inputs, runs the experiment, writes CSV files and manifest.json into
// the output directory. Schema and file errors leave no files behind.
RunReport run(const ExperimentConfig& cfg, std::ostream& log);

// Computes the artifacts without touching the output directory.
RunReport compute(const ExperimentConfig& cfg);

}  // namespace graftlab::runner
