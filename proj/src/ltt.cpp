#include "riskcal/ltt.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "riskcal/pvalue.hpp"

namespace riskcal {

void PValueFamilies::validate() const {
  if (stage1.size() != m_lambda || stage2.size() != m_lambda * m_gamma || m_lambda == 0 ||
      m_gamma == 0) {
    throw std::invalid_argument("PValueFamilies: dimensions do not match the value lists");
  }
  for (double p : stage1) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("PValueFamilies: stage-1 p-value outside [0, 1]");
    }
  }
  for (double p : stage2) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("PValueFamilies: stage-2 p-value outside [0, 1]");
    }
  }
}

const char* to_string(LttProcedure p) {
  switch (p) {
    case LttProcedure::kBonferroniFixedSequence: return "bonf-fs";
    case LttProcedure::kFixedSequenceFixedSequence: return "fs-fs";
    case LttProcedure::kBonferroniBonferroni: return "bonf-bonf";
    case LttProcedure::kFixedSequenceBonferroni: return "fs-bonf";
  }
  return "?";
}

LttProcedure ltt_procedure_from_string(const std::string& name) {
  if (name == "bonf-fs" || name == "main") return LttProcedure::kBonferroniFixedSequence;
  if (name == "fs-fs") return LttProcedure::kFixedSequenceFixedSequence;
  if (name == "bonf-bonf") return LttProcedure::kBonferroniBonferroni;
  if (name == "fs-bonf") return LttProcedure::kFixedSequenceBonferroni;
  throw std::invalid_argument("unknown LTT procedure: " + name);
}

void LttConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("LttConfig: delta must lie in (0, 1)");
  }
  const bool needs_w = procedure == LttProcedure::kFixedSequenceFixedSequence ||
                       procedure == LttProcedure::kFixedSequenceBonferroni;
  if (needs_w && !(w > 0.0 && w < 1.0)) {
    throw std::invalid_argument("LttConfig: w must lie in (0, 1) for fixed-sequence budgets");
  }
}

PValueFamilies compute_pvalue_families(const LossTable1& table1, const LossTable2& table2,
                                       const RiskLevels& levels) {
  if (table1.n_samples() != table2.n_samples()) {
    throw std::invalid_argument("compute_pvalue_families: tables must share the sample count");
  }
  if (!table1.monotone() || !table2.monotone()) {
    // fixed-sequence scans are only valid on monotone losses
    throw std::invalid_argument("compute_pvalue_families: loss tables must be monotone");
  }
  const auto n = static_cast<long long>(table1.n_samples());
  const std::size_t ml = table1.n_lambda();
  const std::size_t mg = table2.n_gamma();
  if (table2.n_lambda() != ml) {
    throw std::invalid_argument("compute_pvalue_families: lambda grids disagree");
  }

  PValueFamilies families;
  families.m_lambda = ml;
  families.m_gamma = mg;
  families.stage1.resize(ml);
  families.stage2.resize(ml * mg);
  for (std::size_t i = 0; i < ml; ++i) {
    families.stage1[i] = hb_pvalue_from_sum(loss_sum1(table1, i), n, levels.alpha1);
  }
  for (std::size_t i = 0; i < ml; ++i) {
    for (std::size_t j = 0; j < mg; ++j) {
      families.stage2[i * mg + j] = hb_pvalue_from_sum(loss_sum2(table2, i, j), n, levels.alpha2);
    }
  }
  return families;
}

namespace {

// Geometric budget w^(m-i)*delta for the 1-based index i = idx + 1.
double geometric_level(double delta, double w, std::size_t m, std::size_t idx) {
  return delta * std::pow(w, static_cast<double>(m - 1 - idx));
}

// First index of the maximal suffix on which pred holds everywhere, or
// `size` when even the last element fails.
template <typename Pred>
std::size_t maximal_suffix_start(std::size_t size, Pred pred) {
  std::size_t start = size;
  while (start > 0 && pred(start - 1)) {
    --start;
  }
  return start;
}

// Stage-2 scan shared by the two row policies: either the maximal suffix
// at a flat level (fixed-sequence) or every cell below a level (Bonferroni).
void append_row_suffix(std::vector<GridPair>& out, const PValueFamilies& f, std::size_t i,
                       double level) {
  const std::size_t start = maximal_suffix_start(
      f.m_gamma, [&](std::size_t j) { return f.stage2_at(i, j) <= level; });
  for (std::size_t j = start; j < f.m_gamma; ++j) {
    out.push_back({i, j});
  }
}

void append_row_bonferroni(std::vector<GridPair>& out, const PValueFamilies& f, std::size_t i,
                           double level) {
  for (std::size_t j = 0; j < f.m_gamma; ++j) {
    if (f.stage2_at(i, j) <= level) {
      out.push_back({i, j});
    }
  }
}

}  // namespace

FeasibleSet ltt_bonferroni_fixed_sequence(const PValueFamilies& f, const LttConfig& config) {
  config.validate();
  f.validate();
  const double level = config.delta / static_cast<double>(f.m_lambda);
  std::vector<GridPair> pairs;
  for (std::size_t i = 0; i < f.m_lambda; ++i) {
    if (f.stage1[i] <= level) {
      append_row_suffix(pairs, f, i, level);
    }
  }
  return FeasibleSet(std::move(pairs), f.m_lambda, f.m_gamma, "ltt:bonf-fs");
}

FeasibleSet ltt_fixed_sequence_fixed_sequence(const PValueFamilies& f, const LttConfig& config) {
  config.validate();
  f.validate();
  const std::size_t start = maximal_suffix_start(f.m_lambda, [&](std::size_t i) {
    return f.stage1[i] <= geometric_level(config.delta, config.w, f.m_lambda, i);
  });
  std::vector<GridPair> pairs;
  for (std::size_t i = start; i < f.m_lambda; ++i) {
    const double row_level =
        (1.0 - config.w) * geometric_level(config.delta, config.w, f.m_lambda, i);
    append_row_suffix(pairs, f, i, row_level);
  }
  return FeasibleSet(std::move(pairs), f.m_lambda, f.m_gamma, "ltt:fs-fs");
}

FeasibleSet ltt_bonferroni_bonferroni(const PValueFamilies& f, const LttConfig& config) {
  config.validate();
  f.validate();
  const double level1 = config.delta / static_cast<double>(f.m_lambda);
  const double level2 = config.delta / static_cast<double>(f.m_lambda * f.m_gamma);
  std::vector<GridPair> pairs;
  for (std::size_t i = 0; i < f.m_lambda; ++i) {
    if (f.stage1[i] <= level1) {
      append_row_bonferroni(pairs, f, i, level2);
    }
  }
  return FeasibleSet(std::move(pairs), f.m_lambda, f.m_gamma, "ltt:bonf-bonf");
}

FeasibleSet ltt_fixed_sequence_bonferroni(const PValueFamilies& f, const LttConfig& config) {
  config.validate();
  f.validate();
  const std::size_t start = maximal_suffix_start(f.m_lambda, [&](std::size_t i) {
    return f.stage1[i] <= geometric_level(config.delta, config.w, f.m_lambda, i);
  });
  std::vector<GridPair> pairs;
  for (std::size_t i = start; i < f.m_lambda; ++i) {
    const double row_level = (1.0 - config.w) *
                             geometric_level(config.delta, config.w, f.m_lambda, i) /
                             static_cast<double>(f.m_gamma);
    append_row_bonferroni(pairs, f, i, row_level);
  }
  return FeasibleSet(std::move(pairs), f.m_lambda, f.m_gamma, "ltt:fs-bonf");
}

FeasibleSet ltt_feasible_set(const PValueFamilies& families, const LttConfig& config) {
  switch (config.procedure) {
    case LttProcedure::kBonferroniFixedSequence:
      return ltt_bonferroni_fixed_sequence(families, config);
    case LttProcedure::kFixedSequenceFixedSequence:
      return ltt_fixed_sequence_fixed_sequence(families, config);
    case LttProcedure::kBonferroniBonferroni:
      return ltt_bonferroni_bonferroni(families, config);
    case LttProcedure::kFixedSequenceBonferroni:
      return ltt_fixed_sequence_bonferroni(families, config);
  }
  throw std::invalid_argument("ltt_feasible_set: unknown procedure");
}

}  // namespace riskcal
