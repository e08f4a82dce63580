#include "riskcal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "riskcal/errors.hpp"
#include "riskcal/retrieval.hpp"
#include "riskcal/rng.hpp"

namespace riskcal {

void ExperimentConfig::validate() const {
  if (calibrator != "ltt" && calibrator != "tcrc" && calibrator != "tcrc-s") {
    throw config_error("ExperimentConfig: calibrator must be ltt, tcrc, or tcrc-s");
  }
  if (replications < 1) {
    throw config_error("ExperimentConfig: replications must be >= 1");
  }
  if (!(calibration_fraction > 0.0 && calibration_fraction < 1.0)) {
    throw config_error("ExperimentConfig: calibration_fraction must lie in (0, 1)");
  }
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw config_error("ExperimentConfig: split_fraction must lie in (0, 1)");
  }
  if (r0.r0 < 1) {
    throw config_error("ExperimentConfig: r0 must be >= 1");
  }
  if (calibrator == "ltt") {
    ltt.validate();
  }
  objective.validate();
}

namespace {

ReplicationRow run_one_replication(const std::vector<QueryRecord>& queries,
                                   const ExperimentConfig& config, std::size_t replication) {
  ReplicationRow row;
  row.replication = replication;

  const std::uint64_t rep_seed = derive_seed(config.seed, replication);
  std::vector<std::size_t> order(queries.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(rep_seed);
  shuffle_in_place(order, rng);

  auto n_cal = static_cast<std::size_t>(
      std::llround(config.calibration_fraction * static_cast<double>(queries.size())));
  n_cal = std::clamp<std::size_t>(n_cal, 1, queries.size() - 1);

  std::vector<QueryRecord> calibration;
  std::vector<QueryRecord> test;
  calibration.reserve(n_cal);
  test.reserve(queries.size() - n_cal);
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_cal ? calibration : test).push_back(queries[order[k]]);
  }

  try {
    const auto [t1, t2] =
        build_loss_tables(calibration, config.grid_lambda, config.grid_gamma, config.r0);
    FeasibleSet feasible({}, config.grid_lambda.size(), config.grid_gamma.size(), "empty");
    if (config.calibrator == "ltt") {
      const auto families = compute_pvalue_families(t1, t2, config.levels);
      feasible = ltt_feasible_set(families, config.ltt);
    } else if (config.calibrator == "tcrc") {
      feasible = crc_feasible_set(t1, t2, config.levels);
    } else {
      const SplitConfig split{config.split_fraction, derive_seed(rep_seed, 1)};
      const auto cal = crc_split_calibrate(t1, t2, config.levels, split, config.lambda0);
      feasible = cal.set;
      if (cal.lambda0_estimated) {
        row.lambda0_estimate = cal.lambda0;
      }
    }
    row.feasible_size = feasible.size();
    const auto selected =
        select_pair(feasible, calibration, config.grid_lambda, config.grid_gamma, config.objective);
    row.lambda_hat = selected.lambda;
    row.gamma_hat = selected.gamma;
    row.report = evaluate(test, selected.lambda, selected.gamma, config.r0);
    row.feasible = true;
  } catch (const infeasible_error& e) {
    row.feasible = false;
    row.error = e.what();
  }
  return row;
}

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

void append_metrics(std::string& out, double risk1, double risk2, double set_size,
                    double recall_ge2, double recall_eq1, double precision, double lambda_hat,
                    double gamma_hat, double feasible_size) {
  out += fmt(risk1);
  out += ',';
  out += fmt(risk2);
  out += ',';
  out += fmt(set_size);
  out += ',';
  out += fmt(recall_ge2);
  out += ',';
  out += fmt(recall_eq1);
  out += ',';
  out += fmt(precision);
  out += ',';
  out += fmt(lambda_hat);
  out += ',';
  out += fmt(gamma_hat);
  out += ',';
  out += fmt(feasible_size);
  out += '\n';
}

}  // namespace

std::size_t RunTable::feasible_count() const {
  std::size_t count = 0;
  for (const ReplicationRow& row : rows) {
    if (row.feasible) ++count;
  }
  return count;
}

RunTable run_experiment(const std::vector<QueryRecord>& queries, const ExperimentConfig& config) {
  config.validate();
  if (queries.size() < 2) {
    throw data_error("run_experiment: need at least two queries to split");
  }
  RunTable table;
  table.rows.resize(config.replications);

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(config.threads, config.replications));
  if (threads == 1) {
    for (std::size_t r = 0; r < config.replications; ++r) {
      table.rows[r] = run_one_replication(queries, config, r);
    }
  } else {
    // replications are independent and seeded by index, so the assignment
    // of replications to threads cannot change any row
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w]() {
        for (std::size_t r = w; r < config.replications; r += threads) {
          table.rows[r] = run_one_replication(queries, config, r);
        }
      });
    }
    for (auto& worker : workers) {
      worker.join();
    }
  }
  return table;
}

std::string run_table_to_csv(const RunTable& table, const ExperimentConfig& config) {
  std::string out = "# schema riskcal.run.v1\n";
  out +=
      "replication,method,alpha1,alpha2,risk1,risk2,set_size,recall_ge2,recall_eq1,precision,"
      "lambda_hat,gamma_hat,feasible_size\n";
  const std::string prefix =
      config.calibrator + ',' + fmt(config.levels.alpha1) + ',' + fmt(config.levels.alpha2) + ',';

  double sums[9] = {0};
  std::size_t feasible = 0;
  for (const ReplicationRow& row : table.rows) {
    out += std::to_string(row.replication);
    out += ',';
    out += prefix;
    if (row.feasible) {
      const EvalReport& r = row.report;
      append_metrics(out, r.risk1, r.risk2, r.set_size, r.recall_ge2, r.recall_eq1, r.precision,
                     row.lambda_hat, row.gamma_hat, static_cast<double>(row.feasible_size));
      const double values[9] = {r.risk1,
                                r.risk2,
                                r.set_size,
                                r.recall_ge2,
                                r.recall_eq1,
                                r.precision,
                                row.lambda_hat,
                                row.gamma_hat,
                                static_cast<double>(row.feasible_size)};
      for (int k = 0; k < 9; ++k) sums[k] += values[k];
      ++feasible;
    } else {
      out += "nan,nan,nan,nan,nan,nan,nan,nan,0\n";
    }
  }

  out += "mean,";
  out += prefix;
  if (feasible > 0) {
    const auto d = static_cast<double>(feasible);
    append_metrics(out, sums[0] / d, sums[1] / d, sums[2] / d, sums[3] / d, sums[4] / d,
                   sums[5] / d, sums[6] / d, sums[7] / d, sums[8] / d);
  } else {
    out += "nan,nan,nan,nan,nan,nan,nan,nan,0\n";
  }
  out += "# feasible " + std::to_string(feasible) + "/" + std::to_string(table.rows.size()) + "\n";
  return out;
}

}  // namespace riskcal
