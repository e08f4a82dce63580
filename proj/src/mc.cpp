#include "riskcal/mc.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "riskcal/rng.hpp"

namespace riskcal {

void McConfig::validate() const {
  if (check != "ltt-fwer" && check != "tcrc" && check != "tcrc-s") {
    throw std::invalid_argument("McConfig: check must be ltt-fwer, tcrc, or tcrc-s");
  }
  if (trials == 0 || n < 2) {
    throw std::invalid_argument("McConfig: need trials >= 1 and n >= 2");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("McConfig: delta must lie in (0, 1)");
  }
  for (double t : t_values) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::invalid_argument("McConfig: t values must lie in [0, 1]");
    }
  }
  model.validate();
}

namespace {

struct MeanTracker {
  double sum = 0.0;
  double sumsq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++count;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double se() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, sumsq / static_cast<double>(count) - m * m);
    return std::sqrt(var / static_cast<double>(count));
  }
};

McCheck held_out_check(const std::string& name, const MeanTracker& tracker, double target,
                       double slack_ses, double fixed_slack) {
  McCheck check;
  check.name = name;
  check.observed = tracker.mean();
  check.se = tracker.se();
  check.bound = target + slack_ses * tracker.se() + fixed_slack;
  check.pass = check.observed <= check.bound;
  return check;
}

McReport validate_ltt_fwer(const McConfig& config) {
  const std::vector<LttProcedure> procedures = {
      LttProcedure::kBonferroniFixedSequence, LttProcedure::kFixedSequenceFixedSequence,
      LttProcedure::kBonferroniBonferroni, LttProcedure::kFixedSequenceBonferroni};
  std::vector<std::size_t> violations(procedures.size(), 0);
  std::vector<std::size_t> nonempty(procedures.size(), 0);
  std::vector<double> total_size(procedures.size(), 0.0);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng trial_rng(derive_seed(config.seed, trial));
    const auto samples = config.model.sample_many(config.n, trial_rng);
    const auto t1 = config.model.table1(samples, config.grid_lambda);
    const auto t2 = config.model.table2(samples, config.grid_lambda, config.grid_gamma);
    const auto families = compute_pvalue_families(t1, t2, config.levels);
    for (std::size_t pi = 0; pi < procedures.size(); ++pi) {
      LttConfig ltt;
      ltt.delta = config.delta;
      ltt.w = config.w;
      ltt.procedure = procedures[pi];
      const auto set = ltt_feasible_set(families, ltt);
      if (!set.empty()) {
        ++nonempty[pi];
      }
      total_size[pi] += static_cast<double>(set.size());
      bool violated = false;
      for (const GridPair& p : set.pairs()) {
        const double r1 = config.model.risk1(config.grid_lambda[p.lambda_index]);
        const double r2 = config.model.risk2(config.grid_lambda[p.lambda_index],
                                             config.grid_gamma[p.gamma_index]);
        if (r1 > config.levels.alpha1 || r2 > config.levels.alpha2) {
          violated = true;
          break;
        }
      }
      if (violated) {
        ++violations[pi];
      }
    }
  }
  McReport report;
  const auto trials = static_cast<double>(config.trials);
  const double se = std::sqrt(config.delta * (1.0 - config.delta) / trials);
  for (std::size_t pi = 0; pi < procedures.size(); ++pi) {
    McCheck check;
    char name[96];
    std::snprintf(name, sizeof(name), "fwer %s (|R|~%.0f, nonempty %.0f%%)",
                  to_string(procedures[pi]), total_size[pi] / trials,
                  100.0 * static_cast<double>(nonempty[pi]) / trials);
    check.name = name;
    check.observed = static_cast<double>(violations[pi]) / trials;
    check.se = se;
    check.bound = config.delta + 3.0 * se;
    check.pass = check.observed <= check.bound;
    report.checks.push_back(check);
  }
  return report;
}

McReport validate_crc(const McConfig& config, bool split) {
  std::vector<MeanTracker> held1(config.t_values.size());
  std::vector<MeanTracker> held2(config.t_values.size());
  const std::optional<double> lambda0 =
      split ? std::optional<double>(config.lambda0.has_value()
                                        ? *config.lambda0
                                        : config.model.valid_lambda0(config.levels.alpha2))
            : std::nullopt;
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng trial_rng(derive_seed(config.seed, trial));
    const auto samples = config.model.sample_many(config.n + 1, trial_rng);
    const std::span<const SimSample> calibration(samples.data(), config.n);
    const SimSample& held_out = samples[config.n];
    const auto t1 = config.model.table1(calibration, config.grid_lambda);
    const auto t2 = config.model.table2(calibration, config.grid_lambda, config.grid_gamma);

    // calibrate once per trial; the t sweep only moves the lambda ceiling
    double floor_value = 1.0;
    std::vector<std::size_t> part2;
    CrcThresholds thresholds;
    if (split) {
      const SplitConfig split_config{config.split_fraction, derive_seed(config.seed, trial) ^ 1};
      const auto cal = crc_split_calibrate(t1, t2, config.levels, split_config, lambda0);
      floor_value = std::max(cal.lambda_tilde0, cal.lambda0);
      part2 = split_indices(config.n, split_config).second;
    } else {
      thresholds = compute_crc_thresholds(t1, t2, config.levels);
      floor_value = std::max(thresholds.lambda0_stage1, thresholds.lambda0_stage2);
    }
    for (std::size_t ti = 0; ti < config.t_values.size(); ++ti) {
      const double t = config.t_values[ti];
      const double lam = ceil_to_grid(t * floor_value + (1.0 - t), config.grid_lambda);
      const std::size_t a = config.grid_lambda.ceil_index(lam);
      const double gam = split ? gamma_floor(t2, part2, a, config.levels.alpha2)
                               : thresholds.gamma0_by_lambda[a];
      held1[ti].add(config.model.loss1(held_out, lam));
      held2[ti].add(config.model.loss2(held_out, lam, gam));
    }
  }
  McReport report;
  char name[64];
  for (std::size_t ti = 0; ti < config.t_values.size(); ++ti) {
    const double t = config.t_values[ti];
    std::snprintf(name, sizeof(name), "%s stage1 t=%g", split ? "tcrc-s" : "tcrc", t);
    report.checks.push_back(held_out_check(name, held1[ti], config.levels.alpha1, 3.0, 0.0));
    std::snprintf(name, sizeof(name), "%s stage2 t=%g", split ? "tcrc-s" : "tcrc", t);
    if (split) {
      report.checks.push_back(held_out_check(name, held2[ti], config.levels.alpha2, 3.0, 0.0));
    } else {
      // asymptotic guarantee: fixed slack instead of a shrinking SE band
      report.checks.push_back(
          held_out_check(name, held2[ti], config.levels.alpha2, 0.0, config.stage2_slack));
    }
  }
  return report;
}

}  // namespace

bool McReport::all_pass() const {
  for (const McCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string McReport::to_text() const {
  std::string out;
  char line[160];
  for (const McCheck& c : checks) {
    std::snprintf(line, sizeof(line), "[%s] %-24s observed=%.6f bound=%.6f se=%.6f\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.observed, c.bound, c.se);
    out += line;
  }
  out += all_pass() ? "all checks passed\n" : "CHECK FAILURES PRESENT\n";
  return out;
}

McReport mc_validate(const McConfig& config) {
  config.validate();
  if (config.check == "ltt-fwer") {
    return validate_ltt_fwer(config);
  }
  return validate_crc(config, config.check == "tcrc-s");
}

}  // namespace riskcal
