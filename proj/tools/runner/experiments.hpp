#pragma once

#include <functional>
#include <string>
#include <vector>

#include "runner.hpp"

namespace graftlab::runner {

using Artifacts = std::vector<Artifact>;

struct Stage {
  std::string name;
  std::function<void(Artifacts&)> run;
};
using Stages = std::vector<Stage>;

// Parses and validates the inputs of cfg; the returned stages do the work.
Stages stages_for(const ExperimentConfig& cfg);

}  // namespace graftlab::runner
