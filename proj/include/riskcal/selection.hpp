#pragma once

#include <cstddef>
#include <vector>

#include "riskcal/loss_table.hpp"
#include "riskcal/retrieval.hpp"

namespace riskcal {

// Linear set-size objective. weight_c2 multiplies the mean second-stage
// set size, weight_c1 the mean first-stage (retrieval) set size; weights
// are nonnegative and not both zero.
struct ObjectiveConfig {
  double weight_c1 = 0.0;
  double weight_c2 = 1.0;

  void validate() const;
};

struct SelectedPair {
  double lambda = 1.0;
  double gamma = 1.0;
  std::size_t lambda_index = 0;
  std::size_t gamma_index = 0;
  double objective = 0.0;
};

// Objective minimizer over the feasible set, evaluated on the calibration
// queries. Ties break toward the smallest lambda, then the smallest gamma.
// Throws infeasible_error on an empty set.
SelectedPair select_pair(const FeasibleSet& feasible, const std::vector<QueryRecord>& calibration,
                         const ParameterGrid& grid_lambda, const ParameterGrid& grid_gamma,
                         const ObjectiveConfig& objective);

// Held-out metrics for one parameter pair. Queries lacking the denominator
// population of a rate are skipped from that rate's mean; the skip counts
// are reported alongside.
struct EvalReport {
  double risk1 = 0.0;
  double risk2 = 0.0;
  double set_size = 0.0;
  double recall_ge2 = 0.0;
  double recall_eq1 = 0.0;
  double precision = 0.0;
  std::size_t n_queries = 0;
  std::size_t n_skipped_recall_ge2 = 0;
  std::size_t n_skipped_recall_eq1 = 0;
  std::size_t n_skipped_precision = 0;
};

EvalReport evaluate(const std::vector<QueryRecord>& test, double lambda, double gamma,
                    RelevanceCutoff r0);

}  // namespace riskcal
