#include "riskcal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "riskcal/rng.hpp"

namespace riskcal {

double exceed_prob(const GradeScoreModel& model, double tau) {
  if (tau <= 0.0) {
    return 1.0;  // clipped scores are never below 0
  }
  if (tau > 1.0) {
    return 0.0;
  }
  if (model.width == 0.0) {
    return model.location >= tau ? 1.0 : 0.0;
  }
  // clipping at 1 keeps raw >= tau equivalent to score >= tau for tau in (0, 1]
  const double raw = (model.location + 0.5 * model.width - tau) / model.width;
  return std::clamp(raw, 0.0, 1.0);
}

void SynthConfig::validate() const {
  if (n_queries == 0) {
    throw std::invalid_argument("SynthConfig: n_queries must be positive");
  }
  if (docs_min < 1 || docs_max < docs_min) {
    throw std::invalid_argument("SynthConfig: need 1 <= docs_min <= docs_max");
  }
  if (grade_probs.empty()) {
    throw std::invalid_argument("SynthConfig: grade_probs must be nonempty");
  }
  double total = 0.0;
  for (double p : grade_probs) {
    if (p < 0.0) {
      throw std::invalid_argument("SynthConfig: grade probabilities must be nonnegative");
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("SynthConfig: grade probabilities must sum to 1");
  }
  if (retrieval.size() != grade_probs.size() || rank.size() != grade_probs.size()) {
    throw std::invalid_argument("SynthConfig: one score model per grade required");
  }
  for (const auto* models : {&retrieval, &rank}) {
    for (const GradeScoreModel& m : *models) {
      if (m.width < 0.0 || m.location < 0.0 || m.location > 1.0) {
        throw std::invalid_argument("SynthConfig: score locations in [0, 1], widths >= 0");
      }
    }
  }
}

namespace {

int sample_grade(const std::vector<double>& probs, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t g = 0; g + 1 < probs.size(); ++g) {
    acc += probs[g];
    if (u < acc) {
      return static_cast<int>(g);
    }
  }
  return static_cast<int>(probs.size()) - 1;
}

double sample_score(const GradeScoreModel& model, Rng& rng) {
  const double raw = model.location + model.width * (uniform01(rng) - 0.5);
  return std::clamp(raw, 0.0, 1.0);
}

}  // namespace

std::vector<QueryRecord> synth_generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<QueryRecord> queries;
  queries.reserve(config.n_queries);
  char buf[48];
  for (std::size_t qi = 0; qi < config.n_queries; ++qi) {
    QueryRecord q;
    std::snprintf(buf, sizeof(buf), "q%06zu", qi);
    q.query_id = buf;
    const std::size_t n_docs =
        config.docs_min + uniform_index(rng, config.docs_max - config.docs_min + 1);
    q.docs.reserve(n_docs);
    for (std::size_t di = 0; di < n_docs; ++di) {
      DocRecord d;
      std::snprintf(buf, sizeof(buf), "q%06zu-d%03zu", qi, di);
      d.doc_id = buf;
      const int grade = sample_grade(config.grade_probs, rng);
      d.relevance = grade;
      d.score_retrieval = sample_score(config.retrieval[static_cast<std::size_t>(grade)], rng);
      d.score_rank = sample_score(config.rank[static_cast<std::size_t>(grade)], rng);
      q.docs.push_back(std::move(d));
    }
    queries.push_back(std::move(q));
  }
  return queries;
}

}  // namespace riskcal
