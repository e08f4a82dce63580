// Acceptance suite: runs every guarantee and equivalence criterion at its
// pinned tolerance and prints one PASS/FAIL line per criterion. Exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riskcal/crc.hpp"
#include "riskcal/experiment.hpp"
#include "riskcal/ltt.hpp"
#include "riskcal/mc.hpp"
#include "riskcal/pvalue.hpp"
#include "riskcal/retrieval.hpp"
#include "riskcal/rng.hpp"
#include "riskcal/selection.hpp"
#include "riskcal/simloss.hpp"
#include "riskcal/synth.hpp"

using namespace riskcal;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

// --- 1. exact equivalence with exhaustive enumeration -----------------------

Criterion criterion_equivalence() {
  Rng rng(101);
  const int instances = 1000;
  int checked = 0;
  std::string failure;
  for (int inst = 0; inst < instances && failure.empty(); ++inst) {
    const std::size_t n = 4 + uniform_index(rng, 17);  // 4..20
    const std::size_t m = 2 + uniform_index(rng, 9);   // 2..10
    const auto gl = ParameterGrid::linspace(uniform_in(rng, 0.0, 0.3), 1.0, m);
    const auto gg = ParameterGrid::linspace(uniform_in(rng, 0.0, 0.3), 1.0, m);
    const auto t1 = oracle::random_monotone_table1(rng, n, gl);
    const auto t2 = oracle::random_monotone_table2(rng, n, gl, gg);

    const SplitConfig split{uniform_in(rng, 0.3, 0.7), rng()};
    const auto [part1, part2] = split_indices(n, split);
    const double level_floor =
        1.0 / (1.0 + static_cast<double>(std::min(part1.size(), part2.size())));
    const RiskLevels levels(uniform_in(rng, std::min(level_floor + 0.05, 0.9), 0.97),
                            uniform_in(rng, std::min(level_floor + 0.05, 0.9), 0.97));

    // uniform CRC set
    const auto crc_set = crc_feasible_set(t1, t2, levels);
    if (oracle::to_pair_set(crc_set) !=
        oracle::crc_predicate_set(t1, t2, levels.alpha1, levels.alpha2)) {
      failure = "tcrc mismatch at instance " + std::to_string(inst);
      break;
    }
    ++checked;

    // split CRC set, alternating known and estimated feasibility constants
    const bool estimate = uniform01(rng) < 0.5;
    const std::optional<double> lambda0 =
        estimate ? std::nullopt : std::optional<double>(uniform01(rng));
    const auto split_set = crc_split_feasible_set(t1, t2, levels, split, lambda0);
    const double used_lambda0 =
        estimate ? oracle::scan_estimate_lambda0(t2, part1, levels.alpha2) : *lambda0;
    if (oracle::to_pair_set(split_set) !=
        oracle::crc_split_predicate_set(t1, t2, levels.alpha1, levels.alpha2, part1, part2,
                                        used_lambda0)) {
      failure = "tcrc-s mismatch at instance " + std::to_string(inst);
      break;
    }
    ++checked;

    // all four FWER procedures against the level-table oracle
    const auto families = compute_pvalue_families(t1, t2, levels);
    LttConfig ltt;
    ltt.delta = uniform_in(rng, 0.02, 0.6);
    ltt.w = uniform_in(rng, 0.2, 0.8);
    ltt.procedure = LttProcedure::kBonferroniFixedSequence;
    if (oracle::to_pair_set(ltt_feasible_set(families, ltt)) !=
        oracle::ltt_bonf_fs(families, ltt.delta)) {
      failure = "bonf-fs mismatch at instance " + std::to_string(inst);
      break;
    }
    ltt.procedure = LttProcedure::kFixedSequenceFixedSequence;
    if (oracle::to_pair_set(ltt_feasible_set(families, ltt)) !=
        oracle::ltt_fs_fs(families, ltt.delta, ltt.w)) {
      failure = "fs-fs mismatch at instance " + std::to_string(inst);
      break;
    }
    ltt.procedure = LttProcedure::kBonferroniBonferroni;
    if (oracle::to_pair_set(ltt_feasible_set(families, ltt)) !=
        oracle::ltt_bonf_bonf(families, ltt.delta)) {
      failure = "bonf-bonf mismatch at instance " + std::to_string(inst);
      break;
    }
    ltt.procedure = LttProcedure::kFixedSequenceBonferroni;
    if (oracle::to_pair_set(ltt_feasible_set(families, ltt)) !=
        oracle::ltt_fs_bonf(families, ltt.delta, ltt.w)) {
      failure = "fs-bonf mismatch at instance " + std::to_string(inst);
      break;
    }
    checked += 4;
  }
  Criterion c{1, "brute-force equivalence (1000 instances, 6 calibrators)", failure.empty(), "",
              0};
  c.detail = failure.empty() ? std::to_string(checked) + " set comparisons, all identical"
                             : failure;
  return c;
}

// --- 2/3/4. conformal guarantees via held-out Monte Carlo -------------------

bool collect_checks(const McReport& report, const char* substr, std::string& detail) {
  bool pass = true;
  char buf[96];
  for (const auto& check : report.checks) {
    if (check.name.find(substr) == std::string::npos) {
      continue;
    }
    std::snprintf(buf, sizeof(buf), " [%s %.4f<=%.4f]", check.name.c_str(), check.observed,
                  check.bound);
    detail += buf;
    pass = pass && check.pass;
  }
  return pass;
}

Criterion criterion_crc_stage1() {
  McConfig config;
  config.check = "tcrc";
  config.trials = 10000;
  config.n = 100;
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.0, 1.0, 21);
  config.grid_gamma = ParameterGrid::linspace(0.0, 1.0, 21);
  config.model.kind = SimLossKind::kThreshold;
  config.model.u_hi = 0.98;  // keeps the t = 0.5 point strictly inside the support
  config.model.v_hi = 0.98;
  config.seed = 2;
  const auto report = mc_validate(config);
  Criterion c{2, "tcrc stage-1 exchangeability (n=100, 10000 trials, t in {0,.5,1})", false, "",
              0};
  c.pass = collect_checks(report, "stage1", c.detail);
  return c;
}

Criterion criterion_split_guarantee() {
  McConfig config;
  config.check = "tcrc-s";
  config.trials = 10000;
  config.n = 100;
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.0, 1.0, 21);
  config.grid_gamma = ParameterGrid::linspace(0.0, 1.0, 21);
  config.model.kind = SimLossKind::kBlend;
  config.seed = 3;  // lambda0 defaults to the model's valid constant
  const auto report = mc_validate(config);
  Criterion c{3, "tcrc-s finite-sample stage-2 (n=100, 10000 trials, known lambda0)", false, "",
              0};
  c.pass = collect_checks(report, "stage2", c.detail);
  return c;
}

Criterion criterion_crc_stage2_asymptotic() {
  McConfig config;
  config.check = "tcrc";
  config.trials = 1000;
  config.n = 2000;
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.0, 1.0, 51);
  config.grid_gamma = ParameterGrid::linspace(0.0, 1.0, 51);
  config.model.kind = SimLossKind::kThreshold;
  config.model.v_hi = 0.98;
  config.stage2_slack = 0.015;
  config.seed = 4;
  const auto report = mc_validate(config);
  Criterion c{4, "tcrc stage-2 asymptotic (n=2000, slack 0.015)", false, "", 0};
  c.pass = collect_checks(report, "stage2", c.detail);
  return c;
}

// --- 5. family-wise error rate ----------------------------------------------

Criterion criterion_fwer() {
  McConfig config;
  config.check = "ltt-fwer";
  config.trials = 500;
  config.n = 200;
  config.delta = 0.1;
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.0, 1.0, 21);
  config.grid_gamma = ParameterGrid::linspace(0.0, 1.0, 21);
  config.model.kind = SimLossKind::kThreshold;
  config.seed = 5;
  const auto report = mc_validate(config);
  Criterion c{5, "ltt FWER (500 trials, n=200, delta=0.1, 4 procedures)", false, "", 0};
  c.pass = collect_checks(report, "fwer", c.detail);
  return c;
}

// --- 6. p-value super-uniformity --------------------------------------------

Criterion criterion_super_uniformity() {
  const int trials = 10000;
  const long long n = 100;
  const double us[3] = {0.05, 0.1, 0.2};
  bool pass = true;
  std::string detail;
  char buf[64];
  for (const double alpha : {0.1, 0.3}) {
    int hits[3] = {0, 0, 0};
    Rng rng(600 + static_cast<std::uint64_t>(alpha * 100));
    for (int t = 0; t < trials; ++t) {
      long long sum = 0;
      for (long long i = 0; i < n; ++i) {
        sum += uniform01(rng) < alpha ? 1 : 0;
      }
      const double p = hb_pvalue_from_sum(static_cast<double>(sum), n, alpha);
      for (int ui = 0; ui < 3; ++ui) {
        if (p <= us[ui]) ++hits[ui];
      }
    }
    for (int ui = 0; ui < 3; ++ui) {
      const double frac = static_cast<double>(hits[ui]) / trials;
      const double bound = us[ui] + 3.0 * std::sqrt(us[ui] * (1.0 - us[ui]) / trials);
      std::snprintf(buf, sizeof(buf), " [a=%g u=%g %.4f<=%.4f]", alpha, us[ui], frac, bound);
      detail += buf;
      pass = pass && frac <= bound;
    }
  }
  return Criterion{6, "hb p-value super-uniformity (10000 trials, a in {0.1,0.3})", pass, detail,
                   0};
}

// --- 7. loss identities ------------------------------------------------------

Criterion criterion_loss_identities() {
  bool pass = true;
  std::string detail;

  QueryRecord hand;
  hand.query_id = "hand";
  hand.docs = {{"p1", 3, 1.0, 1.0}, {"p2", 2, 1.0, 0.0}, {"p3", 1, 1.0, 1.0}};
  const double loss = ranking_loss(hand, 1.0, 0.5, RelevanceCutoff{1});
  const double published = 1.0 - 2.1640 / 3.0742;
  char buf[96];
  std::snprintf(buf, sizeof(buf), " [hand case %.6f vs %.6f]", loss, published);
  detail += buf;
  pass = pass && std::fabs(loss - published) <= 1e-4;

  // base-2 transcription must agree (log-base invariance)
  double gain = 0.0, ideal = 0.0;
  const bool member[3] = {true, false, true};
  for (int j = 0; j < 3; ++j) {
    const double w = 1.0 / std::log2(j + 2.0);
    ideal += w;
    if (member[j]) gain += w;
  }
  pass = pass && std::fabs((1.0 - gain / ideal) - loss) <= 1e-12;

  SynthConfig synth;
  synth.n_queries = 1000;
  synth.docs_min = 1;
  synth.docs_max = 25;
  synth.seed = 7;
  const auto queries = synth_generate(synth);
  int bad = 0;
  for (const auto& q : queries) {
    if (retrieval_loss(q, 1.0) != 0.0) ++bad;
    if (ranking_loss(q, 1.0, 1.0, RelevanceCutoff{1}) != 0.0) ++bad;
    if (ranking_loss(q, 1.0, 1.0, RelevanceCutoff{2}) != 0.0) ++bad;
  }
  std::snprintf(buf, sizeof(buf), " [top-threshold losses: %d nonzero of 1000 queries]", bad);
  detail += buf;
  pass = pass && bad == 0;
  return Criterion{7, "loss identities (hand case to 1e-4, exact zeros at the top)", pass, detail,
                   0};
}

// --- 8. monotonization -------------------------------------------------------

Criterion criterion_monotonization() {
  Rng rng(8);
  const auto grid = ParameterGrid::linspace(0.0, 1.0, 5);
  int failures = 0;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> entries(25);
    for (auto& v : entries) v = uniform01(rng);
    const LossTable2 raw(entries, grid, grid, false);
    const auto mono = monotonize2(raw);
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) {
        double sup = 0.0;
        for (std::size_t ap = a; ap < 5; ++ap) {
          for (std::size_t bp = b; bp < 5; ++bp) {
            sup = std::max(sup, raw.at(0, ap, bp));
          }
        }
        if (mono.at(0, a, b) != sup) ++failures;              // exact oracle match
        if (mono.at(0, a, b) < raw.at(0, a, b)) ++failures;   // dominance
      }
    }
    if (monotonize2(mono).entries() != mono.entries()) ++failures;  // idempotence

    std::vector<double> row(5);
    for (auto& v : row) v = uniform01(rng);
    const LossTable1 raw1(row, grid, false);
    const auto mono1 = monotonize1(raw1);
    for (std::size_t j = 0; j < 5; ++j) {
      double sup = 0.0;
      for (std::size_t jp = j; jp < 5; ++jp) sup = std::max(sup, raw1.at(0, jp));
      if (mono1.at(0, j) != sup) ++failures;
    }
    if (monotonize1(mono1).entries() != mono1.entries()) ++failures;
  }
  return Criterion{8, "monotonization vs O(m^4) suffix-sup oracle (500 slices)", failures == 0,
                   failures == 0 ? "exact on all slices" : std::to_string(failures) + " mismatches",
                   0};
}

// --- 9. qualitative method ordering on synthetic data ------------------------

SynthConfig structure_synth_config() {
  SynthConfig config;
  config.n_queries = 2400;
  config.docs_min = 6;
  config.docs_max = 24;
  config.grade_probs = {0.55, 0.20, 0.15, 0.10};
  config.retrieval = {{0.15, 0.30}, {0.45, 0.50}, {0.60, 0.50}, {0.70, 0.40}};
  config.rank = {{0.20, 0.30}, {0.45, 0.50}, {0.65, 0.40}, {0.80, 0.30}};
  config.seed = 909;
  return config;
}

Criterion criterion_structure() {
  const auto queries = synth_generate(structure_synth_config());
  ExperimentConfig base;
  base.levels = RiskLevels(0.1, 0.1);
  base.grid_lambda = ParameterGrid::linspace(0.5, 1.0, 26);
  base.grid_gamma = ParameterGrid::linspace(0.5, 1.0, 26);
  base.r0 = RelevanceCutoff{1};
  base.replications = 50;
  base.calibration_fraction = 0.5;
  base.seed = 9;
  base.threads = 4;

  auto ltt_config = base;
  ltt_config.calibrator = "ltt";
  ltt_config.ltt.delta = 0.01;
  auto crc_config = base;
  crc_config.calibrator = "tcrc";

  const auto ltt_table = run_experiment(queries, ltt_config);
  const auto crc_table = run_experiment(queries, crc_config);

  int both = 0, risk_ok = 0, size_ok = 0;
  for (std::size_t r = 0; r < base.replications; ++r) {
    const auto& lrow = ltt_table.rows[r];
    const auto& crow = crc_table.rows[r];
    if (!lrow.feasible || !crow.feasible) {
      continue;
    }
    ++both;
    if (lrow.report.risk2 <= crow.report.risk2) ++risk_ok;
    if (crow.report.set_size <= lrow.report.set_size) ++size_ok;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "feasible %d/50; risk2(ltt)<=risk2(tcrc) in %d, size(tcrc)<=size(ltt) in %d",
                both, risk_ok, size_ok);
  const bool pass = both >= 45 && risk_ok * 5 >= both * 4 && size_ok * 5 >= both * 4;
  return Criterion{9, "method ordering: ltt conservative, tcrc smallest sets (50 reps)", pass,
                   buf, 0};
}

// --- 10. determinism ----------------------------------------------------------

Criterion criterion_determinism() {
  auto synth = structure_synth_config();
  synth.n_queries = 400;
  const auto queries = synth_generate(synth);
  ExperimentConfig config;
  config.calibrator = "tcrc-s";
  config.levels = RiskLevels(0.1, 0.1);
  config.grid_lambda = ParameterGrid::linspace(0.5, 1.0, 26);
  config.grid_gamma = ParameterGrid::linspace(0.5, 1.0, 26);
  config.replications = 8;
  config.seed = 10;

  const auto first = run_table_to_csv(run_experiment(queries, config), config);
  const auto second = run_table_to_csv(run_experiment(queries, config), config);
  auto threaded = config;
  threaded.threads = 5;
  const auto third = run_table_to_csv(run_experiment(queries, threaded), threaded);
  auto reseeded = config;
  reseeded.seed = 11;
  const auto fourth = run_table_to_csv(run_experiment(queries, reseeded), reseeded);

  const bool pass = first == second && first == third && first != fourth;
  return Criterion{10, "byte-identical CSV across reruns and thread counts", pass,
                   pass ? "8 replications, 1 vs 5 threads" : "output differs", 0};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::vector<Criterion (*)()> runners = {
      criterion_equivalence,    criterion_crc_stage1, criterion_split_guarantee,
      criterion_crc_stage2_asymptotic, criterion_fwer, criterion_super_uniformity,
      criterion_loss_identities, criterion_monotonization, criterion_structure,
      criterion_determinism};

  bool all_pass = true;
  for (auto runner : runners) {
    const auto start = Clock::now();
    Criterion c = runner();
    c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] %2d. %s (%.1fs)%s%s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.seconds, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && c.pass;
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                               : "acceptance: CRITERIA FAILED");
  return all_pass ? 0 : 1;
}
