#include "riskcal/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "riskcal/errors.hpp"

namespace riskcal {

void ObjectiveConfig::validate() const {
  if (!(weight_c1 >= 0.0) || !(weight_c2 >= 0.0)) {
    throw std::invalid_argument("ObjectiveConfig: weights must be nonnegative");
  }
  if (weight_c1 == 0.0 && weight_c2 == 0.0) {
    throw std::invalid_argument("ObjectiveConfig: at least one weight must be positive");
  }
}

SelectedPair select_pair(const FeasibleSet& feasible, const std::vector<QueryRecord>& calibration,
                         const ParameterGrid& grid_lambda, const ParameterGrid& grid_gamma,
                         const ObjectiveConfig& objective) {
  objective.validate();
  if (feasible.empty()) {
    throw infeasible_error("select_pair: feasible set is empty");
  }
  if (calibration.empty()) {
    throw std::invalid_argument("select_pair: no calibration queries");
  }
  if (feasible.m_lambda() != grid_lambda.size() || feasible.m_gamma() != grid_gamma.size()) {
    throw std::invalid_argument("select_pair: feasible set does not match the grids");
  }
  const std::size_t ml = grid_lambda.size();
  const std::size_t mg = grid_gamma.size();

  // Cumulative doc counts: counts1[a] = docs entering the retrieval set by
  // lambda index a; counts2[a][b] the same for the intersected set. Counts
  // are integers, so the means below do not depend on summation order.
  std::vector<std::int64_t> counts1(ml, 0);
  std::vector<std::int64_t> counts2(ml * mg, 0);
  const auto first_index = [](const ParameterGrid& grid, double score) {
    const auto& v = grid.values();
    auto it = std::partition_point(v.begin(), v.end(),
                                   [&](double threshold) { return !(score >= 1.0 - threshold); });
    return static_cast<std::size_t>(it - v.begin());
  };
  for (const QueryRecord& q : calibration) {
    for (const DocRecord& d : q.docs) {
      const std::size_t a = first_index(grid_lambda, d.score_retrieval);
      const std::size_t b = first_index(grid_gamma, d.score_rank);
      counts1[a] += 1;
      counts2[a * mg + b] += 1;
    }
  }
  for (std::size_t a = 1; a < ml; ++a) {
    counts1[a] += counts1[a - 1];
  }
  for (std::size_t a = 0; a < ml; ++a) {
    for (std::size_t b = 1; b < mg; ++b) {
      counts2[a * mg + b] += counts2[a * mg + b - 1];
    }
  }
  for (std::size_t a = 1; a < ml; ++a) {
    for (std::size_t b = 0; b < mg; ++b) {
      counts2[a * mg + b] += counts2[(a - 1) * mg + b];
    }
  }

  const auto n = static_cast<double>(calibration.size());
  const auto objective_at = [&](GridPair p) {
    const double mean_c1 = static_cast<double>(counts1[p.lambda_index]) / n;
    const double mean_c2 = static_cast<double>(counts2[p.lambda_index * mg + p.gamma_index]) / n;
    return objective.weight_c2 * mean_c2 + objective.weight_c1 * mean_c1;
  };

  // pairs() is sorted by (lambda, gamma), so strict < gives the tie rule.
  GridPair best = feasible.pairs().front();
  double best_value = objective_at(best);
  for (const GridPair& p : feasible.pairs()) {
    const double value = objective_at(p);
    if (value < best_value) {
      best = p;
      best_value = value;
    }
  }
  return SelectedPair{grid_lambda[best.lambda_index], grid_gamma[best.gamma_index],
                      best.lambda_index, best.gamma_index, best_value};
}

namespace {

double kahan_mean(const std::vector<double>& values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : values) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return values.empty() ? 0.0 : (sum + comp) / static_cast<double>(values.size());
}

}  // namespace

EvalReport evaluate(const std::vector<QueryRecord>& test, double lambda, double gamma,
                    RelevanceCutoff r0) {
  if (test.empty()) {
    throw std::invalid_argument("evaluate: no test queries");
  }
  EvalReport report;
  report.n_queries = test.size();

  std::vector<double> risk1_terms, risk2_terms, size_terms;
  std::vector<double> recall_ge2_terms, recall_eq1_terms, precision_terms;
  risk1_terms.reserve(test.size());
  risk2_terms.reserve(test.size());
  size_terms.reserve(test.size());

  for (const QueryRecord& q : test) {
    risk1_terms.push_back(retrieval_loss(q, lambda));
    risk2_terms.push_back(ranking_loss(q, lambda, gamma, r0));

    std::size_t set_size = 0;
    std::size_t hit_ge2 = 0, total_ge2 = 0;
    std::size_t hit_eq1 = 0, total_eq1 = 0;
    std::size_t hit_rel = 0;
    for (const DocRecord& d : q.docs) {
      const bool member = d.score_retrieval >= 1.0 - lambda && d.score_rank >= 1.0 - gamma;
      if (member) {
        ++set_size;
      }
      if (d.relevance >= 2) {
        ++total_ge2;
        if (member) ++hit_ge2;
      }
      if (d.relevance == 1) {
        ++total_eq1;
        if (member) ++hit_eq1;
      }
      if (d.relevance >= 1 && member) {
        ++hit_rel;
      }
    }
    size_terms.push_back(static_cast<double>(set_size));
    if (total_ge2 > 0) {
      recall_ge2_terms.push_back(static_cast<double>(hit_ge2) / static_cast<double>(total_ge2));
    } else {
      ++report.n_skipped_recall_ge2;
    }
    if (total_eq1 > 0) {
      recall_eq1_terms.push_back(static_cast<double>(hit_eq1) / static_cast<double>(total_eq1));
    } else {
      ++report.n_skipped_recall_eq1;
    }
    if (set_size > 0) {
      precision_terms.push_back(static_cast<double>(hit_rel) / static_cast<double>(set_size));
    } else {
      ++report.n_skipped_precision;
    }
  }

  report.risk1 = kahan_mean(risk1_terms);
  report.risk2 = kahan_mean(risk2_terms);
  report.set_size = kahan_mean(size_terms);
  report.recall_ge2 = kahan_mean(recall_ge2_terms);
  report.recall_eq1 = kahan_mean(recall_eq1_terms);
  report.precision = kahan_mean(precision_terms);
  return report;
}

}  // namespace riskcal
