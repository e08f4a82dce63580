// Command-line surface for the two-stage risk calibration library.
//
// Exit codes: 0 success, 1 usage/config error, 2 data validation error,
// 3 infeasible calibration (calibrate only).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskcal/config.hpp"
#include "riskcal/dataset.hpp"
#include "riskcal/errors.hpp"
#include "riskcal/experiment.hpp"
#include "riskcal/mc.hpp"
#include "riskcal/retrieval.hpp"
#include "riskcal/selection.hpp"
#include "riskcal/synth.hpp"

namespace {

using riskcal::Dataset;
using riskcal::DatasetFormat;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

nlohmann::json load_config(const GlobalOptions& global) {
  if (global.config_path.empty()) {
    return nlohmann::json::object();
  }
  return riskcal::load_json_file(global.config_path);
}

void write_output(const GlobalOptions& global, const std::string& text) {
  if (global.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(global.out_path, std::ios::binary);
  if (!out) {
    throw riskcal::data_error("cannot write " + global.out_path);
  }
  out << text;
}

DatasetFormat parse_format(const std::string& format, const std::string& data_path) {
  if (format == "tsv") return DatasetFormat::kTsv;
  if (format == "jsonl") return DatasetFormat::kJsonl;
  if (format == "auto") return riskcal::format_from_path(data_path);
  throw riskcal::config_error("unknown format: " + format);
}

Dataset load_data(const std::string& path, const std::string& format) {
  Dataset data = riskcal::load_dataset(path, parse_format(format, path));
  std::cerr << "loaded " << data.report.n_rows << " rows, " << data.report.n_queries
            << " queries (" << data.report.n_queries_without_relevant << " without relevant docs)"
            << std::endl;
  if (data.report.n_queries > 0 &&
      data.report.n_queries_top_scored_relevant * 100 > data.report.n_queries) {
    std::cerr << "warning: " << data.report.n_queries_top_scored_relevant
              << " queries have a relevant doc scored exactly 1.0; the stage-1 loss at "
                 "lambda = 0 is below 1 there"
              << std::endl;
  }
  return data;
}

void log_cutoff_coverage(const Dataset& data, int r0) {
  std::size_t no_cutoff_docs = 0;
  for (const auto& q : data.queries) {
    bool any = false;
    for (const auto& d : q.docs) {
      if (d.relevance >= r0) any = true;
    }
    if (!any) ++no_cutoff_docs;
  }
  if (no_cutoff_docs > 0) {
    std::cerr << no_cutoff_docs << " queries have no document at relevance >= " << r0
              << "; their ranking loss is 0 by convention" << std::endl;
  }
}

int cmd_calibrate(const GlobalOptions& global, const std::string& data_path,
                  const std::string& format) {
  const auto root = load_config(global);
  auto config = riskcal::experiment_config_from_json(root);
  if (global.seed) config.seed = *global.seed;

  const Dataset data = load_data(data_path, format);
  log_cutoff_coverage(data, config.r0.r0);
  const auto [t1, t2] =
      riskcal::build_loss_tables(data.queries, config.grid_lambda, config.grid_gamma, config.r0);

  nlohmann::json result;
  result["calibrator"] = config.calibrator;
  result["alpha1"] = config.levels.alpha1;
  result["alpha2"] = config.levels.alpha2;
  result["n_queries"] = data.queries.size();
  try {
    riskcal::FeasibleSet feasible({}, config.grid_lambda.size(), config.grid_gamma.size(), "");
    if (config.calibrator == "ltt") {
      const auto families = riskcal::compute_pvalue_families(t1, t2, config.levels);
      feasible = riskcal::ltt_feasible_set(families, config.ltt);
      result["procedure"] = riskcal::to_string(config.ltt.procedure);
      result["delta"] = config.ltt.delta;
    } else if (config.calibrator == "tcrc") {
      feasible = riskcal::crc_feasible_set(t1, t2, config.levels);
    } else {
      const riskcal::SplitConfig split{config.split_fraction,
                                       riskcal::derive_seed(config.seed, 1)};
      const auto cal = riskcal::crc_split_calibrate(t1, t2, config.levels, split, config.lambda0);
      feasible = cal.set;
      result["lambda0"] = cal.lambda0;
      result["lambda0_estimated"] = cal.lambda0_estimated;
    }
    result["feasible_size"] = feasible.size();
    const auto selected = riskcal::select_pair(feasible, data.queries, config.grid_lambda,
                                               config.grid_gamma, config.objective);
    result["lambda_hat"] = selected.lambda;
    result["gamma_hat"] = selected.gamma;
    result["objective"] = selected.objective;
  } catch (const riskcal::infeasible_error& e) {
    std::cerr << "infeasible at the requested risk levels: " << e.what() << std::endl;
    return 3;
  }
  write_output(global, result.dump(2) + "\n");
  return 0;
}

int cmd_evaluate(const GlobalOptions& global, const std::string& data_path,
                 const std::string& format, double lambda, double gamma, int r0) {
  const Dataset data = load_data(data_path, format);
  const auto report = riskcal::evaluate(data.queries, lambda, gamma, riskcal::RelevanceCutoff{r0});
  nlohmann::json result{{"lambda", lambda},
                        {"gamma", gamma},
                        {"r0", r0},
                        {"risk1", report.risk1},
                        {"risk2", report.risk2},
                        {"set_size", report.set_size},
                        {"recall_ge2", report.recall_ge2},
                        {"recall_eq1", report.recall_eq1},
                        {"precision", report.precision},
                        {"n_queries", report.n_queries},
                        {"skipped_recall_ge2", report.n_skipped_recall_ge2},
                        {"skipped_recall_eq1", report.n_skipped_recall_eq1},
                        {"skipped_precision", report.n_skipped_precision}};
  write_output(global, result.dump(2) + "\n");
  return 0;
}

int cmd_run(const GlobalOptions& global, const std::string& data_path, const std::string& format,
            std::size_t threads_override) {
  const auto root = load_config(global);
  auto config = riskcal::experiment_config_from_json(root);
  if (global.seed) config.seed = *global.seed;
  if (threads_override > 0) config.threads = threads_override;

  const Dataset data = load_data(data_path, format);
  log_cutoff_coverage(data, config.r0.r0);
  const auto table = riskcal::run_experiment(data.queries, config);
  write_output(global, riskcal::run_table_to_csv(table, config));
  std::cerr << "feasible replications: " << table.feasible_count() << "/" << table.rows.size()
            << std::endl;
  return 0;
}

int cmd_simulate(const GlobalOptions& global) {
  const auto root = load_config(global);
  auto config = riskcal::synth_config_from_json(root);
  if (global.seed) config.seed = *global.seed;
  const auto queries = riskcal::synth_generate(config);
  if (global.out_path.empty()) {
    throw riskcal::config_error("simulate requires --out <path>");
  }
  riskcal::save_tsv(global.out_path, queries);
  std::size_t docs = 0;
  for (const auto& q : queries) docs += q.docs.size();
  std::cerr << "wrote " << queries.size() << " queries / " << docs << " docs to "
            << global.out_path << std::endl;
  return 0;
}

int cmd_validate(const GlobalOptions& global) {
  const auto root = load_config(global);
  auto config = riskcal::mc_config_from_json(root);
  if (global.seed) config.seed = *global.seed;
  const auto report = riskcal::mc_validate(config);
  write_output(global, report.to_text());
  return 0;
}

int cmd_losses(const GlobalOptions& global, const std::string& data_path,
               const std::string& format) {
  const auto root = load_config(global);
  const auto config = riskcal::experiment_config_from_json(root);
  const Dataset data = load_data(data_path, format);
  const auto [t1, t2] =
      riskcal::build_loss_tables(data.queries, config.grid_lambda, config.grid_gamma, config.r0);

  std::string out = "stage,query_id,lambda,gamma,loss\n";
  char buf[160];
  for (std::size_t i = 0; i < t1.n_samples(); ++i) {
    for (std::size_t a = 0; a < t1.n_lambda(); ++a) {
      std::snprintf(buf, sizeof(buf), "1,%s,%.10g,,%.10g\n", data.queries[i].query_id.c_str(),
                    t1.grid()[a], t1.at(i, a));
      out += buf;
    }
  }
  for (std::size_t i = 0; i < t2.n_samples(); ++i) {
    for (std::size_t a = 0; a < t2.n_lambda(); ++a) {
      for (std::size_t b = 0; b < t2.n_gamma(); ++b) {
        std::snprintf(buf, sizeof(buf), "2,%s,%.10g,%.10g,%.10g\n",
                      data.queries[i].query_id.c_str(), t2.grid_lambda()[a], t2.grid_gamma()[b],
                      t2.at(i, a, b));
        out += buf;
      }
    }
  }
  write_output(global, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-stage risk calibration for retrieve-then-rank pipelines"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "JSON config file")->expected(1);
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "master seed override");
  app.add_option("--out", global.out_path, "output path (default: stdout)");

  std::string data_path;
  std::string format = "auto";
  double lambda = 1.0;
  double gamma = 1.0;
  int r0 = 1;
  std::size_t threads = 0;

  auto* calibrate = app.add_subcommand("calibrate", "choose a parameter pair on calibration data");
  calibrate->add_option("--data", data_path, "dataset file")->required();
  calibrate->add_option("--format", format, "tsv | jsonl | auto");

  auto* evaluate = app.add_subcommand("evaluate", "score a parameter pair on test data");
  evaluate->add_option("--data", data_path, "dataset file")->required();
  evaluate->add_option("--format", format, "tsv | jsonl | auto");
  evaluate->add_option("--lambda", lambda, "retrieval threshold parameter")->required();
  evaluate->add_option("--gamma", gamma, "ranking threshold parameter")->required();
  evaluate->add_option("--r0", r0, "relevance cutoff for the ranking stage");

  auto* run = app.add_subcommand("run", "replicated calibrate/evaluate experiment, CSV output");
  run->add_option("--data", data_path, "dataset file")->required();
  run->add_option("--format", format, "tsv | jsonl | auto");
  run->add_option("--threads", threads, "worker threads for replications");

  auto* simulate = app.add_subcommand("simulate", "generate synthetic scored queries as TSV");

  auto* validate = app.add_subcommand("validate", "Monte Carlo check of the guarantees");

  auto* losses = app.add_subcommand("losses", "dump the loss tables for inspection");
  losses->add_option("--data", data_path, "dataset file")->required();
  losses->add_option("--format", format, "tsv | jsonl | auto");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message; --help lands here with code 0
    return code == 0 ? 0 : 1;
  }
  if (seed_opt->count() > 0) {
    global.seed = seed_value;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(global, data_path, format);
    if (evaluate->parsed()) return cmd_evaluate(global, data_path, format, lambda, gamma, r0);
    if (run->parsed()) return cmd_run(global, data_path, format, threads);
    if (simulate->parsed()) return cmd_simulate(global);
    if (validate->parsed()) return cmd_validate(global);
    if (losses->parsed()) return cmd_losses(global, data_path, format);
  } catch (const riskcal::config_error& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 1;
  } catch (const riskcal::data_error& e) {
    std::cerr << "data error: " << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
