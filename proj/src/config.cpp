#include "riskcal/config.hpp"

#include <fstream>

#include "riskcal/errors.hpp"

namespace riskcal {

namespace {

using nlohmann::json;

template <typename T>
void read_into(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) {
    return;
  }
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw config_error(std::string("config key '") + key + "': " + e.what());
  }
}

// "lambda0": number, or "estimate"/"auto" (and null) for the data-driven path.
void read_lambda0(const json& obj, const char* key, std::optional<double>& out) {
  if (!obj.contains(key)) {
    return;
  }
  const json& v = obj.at(key);
  if (v.is_null()) {
    out = std::nullopt;
    return;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "estimate" || s == "auto") {
      out = std::nullopt;
      return;
    }
    throw config_error(std::string("config key '") + key + "': expected a number or \"estimate\"");
  }
  if (!v.is_number()) {
    throw config_error(std::string("config key '") + key + "': expected a number or \"estimate\"");
  }
  out = v.get<double>();
}

GradeScoreModel score_model_from_json(const json& spec) {
  GradeScoreModel model;
  if (spec.is_array() && spec.size() == 2) {
    model.location = spec.at(0).get<double>();
    model.width = spec.at(1).get<double>();
    return model;
  }
  if (spec.is_object()) {
    read_into(spec, "location", model.location);
    read_into(spec, "width", model.width);
    return model;
  }
  throw config_error("score model: expected [location, width] or an object");
}

}  // namespace

ParameterGrid grid_from_json(const json& spec) {
  try {
    if (spec.is_array()) {
      return ParameterGrid(spec.get<std::vector<double>>());
    }
    if (spec.is_object()) {
      const double start = spec.at("start").get<double>();
      const double stop = spec.at("stop").get<double>();
      if (spec.contains("count")) {
        return ParameterGrid::linspace(start, stop, spec.at("count").get<std::size_t>());
      }
      return ParameterGrid::step_range(start, stop, spec.at("step").get<double>());
    }
  } catch (const json::exception& e) {
    throw config_error(std::string("grid: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("grid: ") + e.what());
  }
  throw config_error("grid: expected an array of values or {start, stop, step|count}");
}

ExperimentConfig experiment_config_from_json(const json& root) {
  ExperimentConfig config;
  read_into(root, "calibrator", config.calibrator);
  double alpha1 = config.levels.alpha1;
  double alpha2 = config.levels.alpha2;
  read_into(root, "alpha1", alpha1);
  read_into(root, "alpha2", alpha2);
  try {
    config.levels = RiskLevels(alpha1, alpha2);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  read_into(root, "delta", config.ltt.delta);
  if (root.contains("procedure")) {
    try {
      config.ltt.procedure = ltt_procedure_from_string(root.at("procedure").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }
  read_into(root, "w", config.ltt.w);
  read_into(root, "split_fraction", config.split_fraction);
  read_lambda0(root, "lambda0", config.lambda0);
  if (root.contains("grid_lambda")) {
    config.grid_lambda = grid_from_json(root.at("grid_lambda"));
  }
  if (root.contains("grid_gamma")) {
    config.grid_gamma = grid_from_json(root.at("grid_gamma"));
  }
  read_into(root, "r0", config.r0.r0);
  read_into(root, "replications", config.replications);
  read_into(root, "calibration_fraction", config.calibration_fraction);
  if (root.contains("objective")) {
    const json& obj = root.at("objective");
    read_into(obj, "weight_c1", config.objective.weight_c1);
    read_into(obj, "weight_c2", config.objective.weight_c2);
  }
  read_into(root, "seed", config.seed);
  read_into(root, "threads", config.threads);
  config.validate();
  return config;
}

SynthConfig synth_config_from_json(const json& root) {
  SynthConfig config;
  const json& spec = root.contains("synth") ? root.at("synth") : root;
  read_into(spec, "n_queries", config.n_queries);
  read_into(spec, "docs_min", config.docs_min);
  read_into(spec, "docs_max", config.docs_max);
  read_into(spec, "grade_probs", config.grade_probs);
  const auto read_models = [&](const char* key, std::vector<GradeScoreModel>& out) {
    if (!spec.contains(key)) {
      return;
    }
    const json& list = spec.at(key);
    if (!list.is_array()) {
      throw config_error(std::string(key) + ": expected an array of score models");
    }
    out.clear();
    for (const json& item : list) {
      out.push_back(score_model_from_json(item));
    }
  };
  read_models("retrieval", config.retrieval);
  read_models("rank", config.rank);
  read_into(spec, "seed", config.seed);
  if (root.contains("seed")) {
    read_into(root, "seed", config.seed);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return config;
}

McConfig mc_config_from_json(const json& root) {
  McConfig config;
  const json& spec = root.contains("validate") ? root.at("validate") : root;
  read_into(spec, "check", config.check);
  read_into(spec, "trials", config.trials);
  read_into(spec, "n", config.n);
  if (spec.contains("grid_lambda")) {
    config.grid_lambda = grid_from_json(spec.at("grid_lambda"));
  }
  if (spec.contains("grid_gamma")) {
    config.grid_gamma = grid_from_json(spec.at("grid_gamma"));
  }
  double alpha1 = config.levels.alpha1;
  double alpha2 = config.levels.alpha2;
  read_into(spec, "alpha1", alpha1);
  read_into(spec, "alpha2", alpha2);
  try {
    config.levels = RiskLevels(alpha1, alpha2);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  read_into(spec, "delta", config.delta);
  read_into(spec, "w", config.w);
  read_into(spec, "t_values", config.t_values);
  if (spec.contains("model")) {
    const json& m = spec.at("model");
    if (m.contains("kind")) {
      try {
        config.model.kind = sim_loss_kind_from_string(m.at("kind").get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
      }
    }
    read_into(m, "u_lo", config.model.u_lo);
    read_into(m, "u_hi", config.model.u_hi);
    read_into(m, "w_lo", config.model.w_lo);
    read_into(m, "w_hi", config.model.w_hi);
    read_into(m, "v_lo", config.model.v_lo);
    read_into(m, "v_hi", config.model.v_hi);
    read_into(m, "scale_lo", config.model.scale_lo);
    read_into(m, "scale_hi", config.model.scale_hi);
    read_into(m, "shape1", config.model.shape1);
    read_into(m, "shape2", config.model.shape2);
    read_into(m, "mix", config.model.mix);
  }
  read_into(spec, "split_fraction", config.split_fraction);
  read_lambda0(spec, "lambda0", config.lambda0);
  read_into(spec, "stage2_slack", config.stage2_slack);
  read_into(spec, "seed", config.seed);
  if (root.contains("seed")) {
    read_into(root, "seed", config.seed);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  return config;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(path + ": " + e.what());
  }
}

}  // namespace riskcal
