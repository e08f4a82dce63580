#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskcal/crc.hpp"
#include "riskcal/ltt.hpp"
#include "riskcal/selection.hpp"
#include "riskcal/synth.hpp"

namespace riskcal {

// Replicated calibrate/select/evaluate protocol. Each replication r
// shuffles the queries with the derived seed derive_seed(seed, r), splits
// off the calibration fraction, calibrates with the configured method,
// picks the pair by set-size minimization, and scores the rest.
struct ExperimentConfig {
  std::string calibrator = "tcrc";  // ltt | tcrc | tcrc-s
  RiskLevels levels{0.1, 0.1};
  LttConfig ltt;
  double split_fraction = 0.5;           // tcrc-s internal split
  std::optional<double> lambda0;          // tcrc-s; nullopt estimates it
  ParameterGrid grid_lambda = ParameterGrid::step_range(0.950, 1.000, 0.001);
  ParameterGrid grid_gamma = ParameterGrid::step_range(0.950, 1.000, 0.001);
  RelevanceCutoff r0{1};
  std::size_t replications = 10;
  double calibration_fraction = 0.5;
  ObjectiveConfig objective;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

struct ReplicationRow {
  std::size_t replication = 0;
  bool feasible = false;
  double lambda_hat = 0.0;
  double gamma_hat = 0.0;
  std::size_t feasible_size = 0;
  EvalReport report;
  std::optional<double> lambda0_estimate;  // tcrc-s with estimated constant
  std::string error;                       // infeasibility note when !feasible
};

struct RunTable {
  std::vector<ReplicationRow> rows;

  std::size_t feasible_count() const;
};

RunTable run_experiment(const std::vector<QueryRecord>& queries, const ExperimentConfig& config);

// Stable, versioned CSV: a schema comment line, a header row, one row per
// replication, a mean row over the feasible replications, and a trailing
// comment with the feasible count.
std::string run_table_to_csv(const RunTable& table, const ExperimentConfig& config);

}  // namespace riskcal
