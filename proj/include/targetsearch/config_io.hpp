#pragma once

#include <stdexcept>
#include <string>

#include "targetsearch/experiment.hpp"

namespace targetsearch {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse and validate an experiment configuration. Unknown keys are errors.
ExperimentSpec parse_experiment(const std::string& json_text);
ExperimentSpec load_experiment(const std::string& path);

/// Overwrite one numeric parameter addressed either by a dotted path
/// ("thresholds.T_r") or by a bare key that occurs exactly once ("tau").
/// Returns the updated JSON text.
std::string override_parameter(const std::string& json_text, const std::string& name,
                               double value);

}  // namespace targetsearch
