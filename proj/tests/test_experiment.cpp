#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "riskcal/config.hpp"
#include "riskcal/errors.hpp"
#include "riskcal/experiment.hpp"
#include "riskcal/mc.hpp"
#include "riskcal/synth.hpp"

using namespace riskcal;

namespace {

std::vector<QueryRecord> small_dataset(std::uint64_t seed) {
  SynthConfig config;
  config.n_queries = 200;
  config.docs_min = 4;
  config.docs_max = 20;
  config.seed = seed;
  return synth_generate(config);
}

ExperimentConfig small_config(const std::string& calibrator) {
  ExperimentConfig config;
  config.calibrator = calibrator;
  config.levels = RiskLevels(0.2, 0.2);
  config.grid_lambda = ParameterGrid::linspace(0.5, 1.0, 11);
  config.grid_gamma = ParameterGrid::linspace(0.5, 1.0, 11);
  config.replications = 3;
  config.seed = 42;
  config.ltt.delta = 0.2;
  return config;
}

}  // namespace

TEST_CASE("run is a pure function of data, config, and seed") {
  const auto queries = small_dataset(1);
  for (const std::string calibrator : {"tcrc", "tcrc-s", "ltt"}) {
    const auto config = small_config(calibrator);
    const auto a = run_table_to_csv(run_experiment(queries, config), config);
    const auto b = run_table_to_csv(run_experiment(queries, config), config);
    CHECK(a == b);

    auto threaded = config;
    threaded.threads = 4;
    const auto c = run_table_to_csv(run_experiment(queries, threaded), threaded);
    CHECK(a == c);

    auto reseeded = config;
    reseeded.seed = 43;
    const auto d = run_table_to_csv(run_experiment(queries, reseeded), reseeded);
    CHECK(a != d);
  }
}

TEST_CASE("degenerate single-point grids force the top pair") {
  const auto queries = small_dataset(2);
  auto config = small_config("tcrc");
  config.grid_lambda = ParameterGrid({1.0});
  config.grid_gamma = ParameterGrid({1.0});
  const auto table = run_experiment(queries, config);
  REQUIRE(table.feasible_count() == table.rows.size());
  for (const auto& row : table.rows) {
    CHECK(row.lambda_hat == 1.0);
    CHECK(row.gamma_hat == 1.0);
    CHECK(row.report.risk1 == 0.0);
    CHECK(row.report.risk2 == 0.0);
  }
}

TEST_CASE("csv layout is schema-versioned with a mean row") {
  const auto queries = small_dataset(3);
  const auto config = small_config("tcrc");
  const auto csv = run_table_to_csv(run_experiment(queries, config), config);
  CHECK(csv.rfind("# schema riskcal.run.v1\n", 0) == 0);
  CHECK(csv.find("replication,method,alpha1,alpha2,risk1,risk2,set_size,recall_ge2,"
                 "recall_eq1,precision,lambda_hat,gamma_hat,feasible_size\n") !=
        std::string::npos);
  CHECK(csv.find("\nmean,tcrc,") != std::string::npos);
  CHECK(csv.find("# feasible 3/3") != std::string::npos);
}

TEST_CASE("an empty LTT set is recorded as infeasible, not fatal") {
  // far too little data for the Bonferroni level, so no pair certifies
  const auto queries = small_dataset(4);
  auto config = small_config("ltt");
  config.ltt.delta = 1e-6;
  config.calibration_fraction = 0.05;
  const auto table = run_experiment(queries, config);
  CHECK(table.feasible_count() == 0);
  for (const auto& row : table.rows) {
    CHECK(!row.feasible);
    CHECK(!row.error.empty());
  }
  const auto csv = run_table_to_csv(table, config);
  CHECK(csv.find("nan,nan") != std::string::npos);
  CHECK(csv.find("# feasible 0/3") != std::string::npos);
}

TEST_CASE("tight risk levels push the calibrated pair to the top corner") {
  std::vector<QueryRecord> hard;
  for (int i = 0; i < 10; ++i) {
    QueryRecord q;
    q.query_id = "q" + std::to_string(i);
    q.docs.push_back({"d0", 1, 0.0, 0.0});  // only lambda = 1 retrieves it
    hard.push_back(q);
  }
  auto config = small_config("tcrc");
  config.levels = RiskLevels(0.3, 0.3);
  const auto table = run_experiment(hard, config);
  CHECK(table.feasible_count() == table.rows.size());
  for (const auto& row : table.rows) {
    CHECK(row.lambda_hat == 1.0);
    CHECK(row.gamma_hat == 1.0);
  }
}

TEST_CASE("conformal run keeps the mean risks near their targets") {
  SynthConfig synth;
  synth.n_queries = 1200;
  synth.docs_min = 6;
  synth.docs_max = 24;
  synth.grade_probs = {0.55, 0.20, 0.15, 0.10};
  synth.retrieval = {{0.15, 0.30}, {0.45, 0.50}, {0.60, 0.50}, {0.70, 0.40}};
  synth.rank = {{0.20, 0.30}, {0.45, 0.50}, {0.65, 0.40}, {0.80, 0.30}};
  synth.seed = 31;
  const auto queries = synth_generate(synth);

  ExperimentConfig config;
  config.calibrator = "tcrc";
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.5, 1.0, 26);
  config.grid_gamma = ParameterGrid::linspace(0.5, 1.0, 26);
  config.replications = 10;
  config.seed = 17;
  config.threads = 4;
  const auto table = run_experiment(queries, config);
  REQUIRE(table.feasible_count() == 10);
  double risk1 = 0.0, risk2 = 0.0;
  for (const auto& row : table.rows) {
    risk1 += row.report.risk1;
    risk2 += row.report.risk2;
  }
  // stage 1 carries a finite-sample guarantee; stage 2 the asymptotic one
  // with the documented slack
  CHECK(risk1 / 10.0 <= 0.1);
  CHECK(risk2 / 10.0 <= 0.115);
}

TEST_CASE("config json round trip covers the full surface") {
  const auto root = nlohmann::json::parse(R"({
    "calibrator": "tcrc-s",
    "alpha1": 0.05, "alpha2": 0.15,
    "delta": 0.02, "procedure": "fs-fs", "w": 0.3,
    "split_fraction": 0.6, "lambda0": "estimate",
    "grid_lambda": {"start": 0.9, "stop": 1.0, "step": 0.01},
    "grid_gamma": [0.5, 0.75, 1.0],
    "r0": 2,
    "replications": 7,
    "calibration_fraction": 0.4,
    "objective": {"weight_c1": 0.5, "weight_c2": 1.5},
    "seed": 99,
    "threads": 2
  })");
  const auto config = experiment_config_from_json(root);
  CHECK(config.calibrator == "tcrc-s");
  CHECK(config.levels.alpha1 == 0.05);
  CHECK(config.levels.alpha2 == 0.15);
  CHECK(config.ltt.delta == 0.02);
  CHECK(config.ltt.procedure == LttProcedure::kFixedSequenceFixedSequence);
  CHECK(config.ltt.w == 0.3);
  CHECK(config.split_fraction == 0.6);
  CHECK(!config.lambda0.has_value());
  CHECK(config.grid_lambda.size() == 11);
  CHECK(config.grid_gamma.size() == 3);
  CHECK(config.r0.r0 == 2);
  CHECK(config.replications == 7);
  CHECK(config.calibration_fraction == 0.4);
  CHECK(config.objective.weight_c1 == 0.5);
  CHECK(config.seed == 99);
  CHECK(config.threads == 2);

  SUBCASE("bad calibrator") {
    auto bad = root;
    bad["calibrator"] = "bogus";
    CHECK_THROWS_AS(experiment_config_from_json(bad), config_error);
  }
  SUBCASE("bad grid") {
    auto bad = root;
    bad["grid_lambda"] = {{"start", 0.9}, {"stop", 0.95}, {"step", 0.01}};  // max != 1
    CHECK_THROWS_AS(experiment_config_from_json(bad), config_error);
  }
  SUBCASE("numeric lambda0") {
    auto numeric = root;
    numeric["lambda0"] = 0.97;
    CHECK(experiment_config_from_json(numeric).lambda0 == 0.97);
  }
}

TEST_CASE("mc_validate smoke runs per check kind") {
  McConfig config;
  config.trials = 200;
  config.n = 40;
  config.grid_lambda = ParameterGrid::linspace(0.0, 1.0, 11);
  config.grid_gamma = ParameterGrid::linspace(0.0, 1.0, 11);
  config.levels = RiskLevels(0.2, 0.2);
  config.seed = 7;

  SUBCASE("tcrc stage-1 guarantee") {
    config.check = "tcrc";
    config.stage2_slack = 0.05;  // coarse run, wide asymptotic slack
    const auto report = mc_validate(config);
    REQUIRE(report.checks.size() == 6);  // three t values, two stages
    for (const auto& check : report.checks) {
      if (check.name.find("stage1") != std::string::npos) {
        CHECK(check.pass);
      }
    }
    CHECK(report.to_text().find("stage1") != std::string::npos);
  }
  SUBCASE("tcrc-s both guarantees") {
    config.check = "tcrc-s";
    const auto report = mc_validate(config);
    for (const auto& check : report.checks) {
      INFO(check.name, " observed=", check.observed, " bound=", check.bound);
      CHECK(check.pass);
    }
  }
  SUBCASE("ltt fwer for all four procedures") {
    config.check = "ltt-fwer";
    config.trials = 150;
    config.n = 150;
    config.delta = 0.2;
    const auto report = mc_validate(config);
    REQUIRE(report.checks.size() == 4);
    for (const auto& check : report.checks) {
      INFO(check.name, " observed=", check.observed, " bound=", check.bound);
      CHECK(check.pass);
    }
  }
  SUBCASE("degenerate zero-risk surface never violates") {
    config.check = "ltt-fwer";
    config.trials = 50;
    config.n = 50;
    config.model.scale_lo = 0.0;
    config.model.scale_hi = 0.0;  // losses identically zero
    const auto report = mc_validate(config);
    for (const auto& check : report.checks) {
      CHECK(check.observed == 0.0);
    }
  }
}

TEST_CASE("mc config json") {
  const auto root = nlohmann::json::parse(R"({
    "validate": {
      "check": "tcrc-s",
      "trials": 123,
      "n": 64,
      "alpha1": 0.12, "alpha2": 0.18,
      "t_values": [0.0, 1.0],
      "model": {"kind": "blend", "shape1": 3.0, "mix": 0.4},
      "lambda0": 0.9,
      "stage2_slack": 0.02
    },
    "seed": 5
  })");
  const auto config = mc_config_from_json(root);
  CHECK(config.check == "tcrc-s");
  CHECK(config.trials == 123);
  CHECK(config.n == 64);
  CHECK(config.levels.alpha2 == 0.18);
  CHECK(config.t_values == std::vector<double>{0.0, 1.0});
  CHECK(config.model.kind == SimLossKind::kBlend);
  CHECK(config.model.shape1 == 3.0);
  CHECK(config.model.mix == 0.4);
  CHECK(config.lambda0 == 0.9);
  CHECK(config.stage2_slack == 0.02);
  CHECK(config.seed == 5);
}
