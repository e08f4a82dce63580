#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskcal/loss_table.hpp"

namespace riskcal {

// p-values for the two stage-wise hypothesis families; stage2 is row-major
// m_lambda x m_gamma. Values lie in [0, 1].
struct PValueFamilies {
  std::vector<double> stage1;
  std::vector<double> stage2;
  std::size_t m_lambda = 0;
  std::size_t m_gamma = 0;

  double stage2_at(std::size_t i, std::size_t j) const { return stage2[i * m_gamma + j]; }
  void validate() const;
};

// How the global error budget is split across the two families. The first
// word names the stage-1 scan, the second the per-row stage-2 scan.
enum class LttProcedure {
  kBonferroniFixedSequence,     // stage 1 at delta/m_lambda each; rows scanned top-down at delta/m_lambda
  kFixedSequenceFixedSequence,  // geometric budgets w^(m-i)*delta; rows at (1-w)*w^(m-i)*delta
  kBonferroniBonferroni,        // stage 1 at delta/m_lambda; cells at delta/(m_lambda*m_gamma)
  kFixedSequenceBonferroni,     // geometric stage 1; cells at (1-w)*w^(m-i)*delta/m_gamma
};

const char* to_string(LttProcedure p);
LttProcedure ltt_procedure_from_string(const std::string& name);

struct LttConfig {
  double delta = 0.01;                                          // global FWER budget
  LttProcedure procedure = LttProcedure::kBonferroniFixedSequence;
  double w = 0.5;  // geometric budget ratio, used by the fixed-sequence stage-1 variants

  void validate() const;
};

// One Hoeffding-Bentkus p-value per grid cell, from the exact loss sums.
PValueFamilies compute_pvalue_families(const LossTable1& table1, const LossTable2& table2,
                                       const RiskLevels& levels);

FeasibleSet ltt_bonferroni_fixed_sequence(const PValueFamilies& families, const LttConfig& config);
FeasibleSet ltt_fixed_sequence_fixed_sequence(const PValueFamilies& families,
                                              const LttConfig& config);
FeasibleSet ltt_bonferroni_bonferroni(const PValueFamilies& families, const LttConfig& config);
FeasibleSet ltt_fixed_sequence_bonferroni(const PValueFamilies& families, const LttConfig& config);

// Dispatch on config.procedure.
FeasibleSet ltt_feasible_set(const PValueFamilies& families, const LttConfig& config);

}  // namespace riskcal
