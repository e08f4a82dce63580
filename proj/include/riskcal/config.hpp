#pragma once

#include <string>

#include <json.hpp>

#include "riskcal/experiment.hpp"
#include "riskcal/mc.hpp"
#include "riskcal/synth.hpp"

namespace riskcal {

// JSON helpers for the CLI config file. Every reader starts from defaults
// and overrides only the keys present; malformed values raise config_error.

// Either an explicit value array or {"start": .., "stop": .., "step": ..}
// (or "count" instead of "step").
ParameterGrid grid_from_json(const nlohmann::json& spec);

ExperimentConfig experiment_config_from_json(const nlohmann::json& root);
SynthConfig synth_config_from_json(const nlohmann::json& root);
McConfig mc_config_from_json(const nlohmann::json& root);

nlohmann::json load_json_file(const std::string& path);

}  // namespace riskcal
