#pragma once

#include <cstdint>
#include <vector>

#include "riskcal/retrieval.hpp"

namespace riskcal {

// Per-grade score model: location plus uniform noise of the given width,
// clipped to [0, 1]. Zero width is the degenerate point mass.
struct GradeScoreModel {
  double location = 0.5;
  double width = 0.0;
};

// P(score >= tau) under the clipped model, exact.
double exceed_prob(const GradeScoreModel& model, double tau);

struct SynthConfig {
  std::size_t n_queries = 1000;
  std::size_t docs_min = 5;
  std::size_t docs_max = 30;
  std::vector<double> grade_probs = {0.6, 0.2, 0.15, 0.05};  // over grades 0..R
  std::vector<GradeScoreModel> retrieval = {
      {0.30, 0.40}, {0.62, 0.35}, {0.72, 0.30}, {0.80, 0.25}};
  std::vector<GradeScoreModel> rank = {{0.25, 0.40}, {0.58, 0.35}, {0.72, 0.30}, {0.82, 0.25}};
  std::uint64_t seed = 0;

  void validate() const;
  int max_grade() const { return static_cast<int>(grade_probs.size()) - 1; }
};

// Deterministic for a fixed seed. Draw order per query: doc count, then
// per doc grade, retrieval score, rank score.
std::vector<QueryRecord> synth_generate(const SynthConfig& config);

}  // namespace riskcal
