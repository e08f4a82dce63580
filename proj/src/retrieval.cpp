#include "riskcal/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "riskcal/errors.hpp"

namespace riskcal {

void validate_queries(const std::vector<QueryRecord>& queries) {
  for (const QueryRecord& q : queries) {
    if (q.docs.empty()) {
      throw data_error("query '" + q.query_id + "' has no documents");
    }
    std::unordered_set<std::string> seen;
    for (const DocRecord& d : q.docs) {
      if (d.relevance < 0) {
        throw data_error("query '" + q.query_id + "' doc '" + d.doc_id +
                         "': negative relevance");
      }
      if (!(d.score_retrieval >= 0.0 && d.score_retrieval <= 1.0) ||
          !(d.score_rank >= 0.0 && d.score_rank <= 1.0)) {
        throw data_error("query '" + q.query_id + "' doc '" + d.doc_id +
                         "': scores must lie in [0, 1]");
      }
      if (!seen.insert(d.doc_id).second) {
        throw data_error("query '" + q.query_id + "': duplicate doc id '" + d.doc_id + "'");
      }
    }
  }
}

namespace {

void check_threshold(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

bool in_retrieval(const DocRecord& d, double lambda) { return d.score_retrieval >= 1.0 - lambda; }

bool in_ranking(const DocRecord& d, double lambda, double gamma) {
  return d.score_retrieval >= 1.0 - lambda && d.score_rank >= 1.0 - gamma;
}

// Cutoff-relevant documents sorted by descending relevance; stable, so
// equal grades keep their input order.
std::vector<const DocRecord*> ordered_cutoff_docs(const QueryRecord& query, int r0) {
  std::vector<const DocRecord*> docs;
  for (const DocRecord& d : query.docs) {
    if (d.relevance >= r0) {
      docs.push_back(&d);
    }
  }
  std::stable_sort(docs.begin(), docs.end(),
                   [](const DocRecord* a, const DocRecord* b) { return a->relevance > b->relevance; });
  return docs;
}

double position_weight(std::size_t position_1based) {
  return 1.0 / std::log(static_cast<double>(position_1based) + 1.0);
}

}  // namespace

std::vector<std::string> retrieval_set(const QueryRecord& query, double lambda) {
  check_threshold(lambda, "lambda");
  std::vector<std::string> ids;
  for (const DocRecord& d : query.docs) {
    if (in_retrieval(d, lambda)) {
      ids.push_back(d.doc_id);
    }
  }
  return ids;
}

std::vector<std::string> ranking_set(const QueryRecord& query, double lambda, double gamma) {
  check_threshold(lambda, "lambda");
  check_threshold(gamma, "gamma");
  std::vector<std::string> ids;
  for (const DocRecord& d : query.docs) {
    if (in_ranking(d, lambda, gamma)) {
      ids.push_back(d.doc_id);
    }
  }
  return ids;
}

double retrieval_loss(const QueryRecord& query, double lambda) {
  check_threshold(lambda, "lambda");
  std::size_t relevant = 0;
  std::size_t covered = 0;
  for (const DocRecord& d : query.docs) {
    if (d.relevance > 0) {
      ++relevant;
      if (in_retrieval(d, lambda)) {
        ++covered;
      }
    }
  }
  if (relevant == 0) {
    return 0.0;  // nothing to retrieve, no risk
  }
  return 1.0 - static_cast<double>(covered) / static_cast<double>(relevant);
}

double ranking_loss(const QueryRecord& query, double lambda, double gamma, RelevanceCutoff r0) {
  check_threshold(lambda, "lambda");
  check_threshold(gamma, "gamma");
  const auto ordered = ordered_cutoff_docs(query, r0.r0);
  if (ordered.empty()) {
    return 0.0;
  }
  double gain = 0.0;
  double ideal = 0.0;
  for (std::size_t j = 0; j < ordered.size(); ++j) {
    const double w = position_weight(j + 1);
    ideal += w;
    if (in_ranking(*ordered[j], lambda, gamma)) {
      gain += w;
    }
  }
  return 1.0 - gain / ideal;
}

std::pair<LossTable1, LossTable2> build_loss_tables(const std::vector<QueryRecord>& queries,
                                                    const ParameterGrid& grid_lambda,
                                                    const ParameterGrid& grid_gamma,
                                                    RelevanceCutoff r0) {
  if (queries.empty()) {
    throw std::invalid_argument("build_loss_tables: no queries");
  }
  const std::size_t ml = grid_lambda.size();
  const std::size_t mg = grid_gamma.size();
  std::vector<double> t1(queries.size() * ml);
  std::vector<double> t2(queries.size() * ml * mg);

  // First grid index at which the document enters the threshold set. The
  // grids end at 1.0, so an index always exists. partition_point uses the
  // same >= predicate as the direct loss evaluation above, keeping table
  // cells bit-identical to per-query loss calls.
  const auto first_index = [](const ParameterGrid& grid, double score) {
    const auto& v = grid.values();
    auto it = std::partition_point(v.begin(), v.end(),
                                   [&](double threshold) { return !(score >= 1.0 - threshold); });
    return static_cast<std::size_t>(it - v.begin());
  };

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryRecord& q = queries[qi];

    // Stage 1: covered counts per lambda from each relevant doc's entry index.
    std::vector<std::size_t> enter_counts(ml + 1, 0);
    std::size_t relevant = 0;
    for (const DocRecord& d : q.docs) {
      if (d.relevance > 0) {
        ++relevant;
        ++enter_counts[first_index(grid_lambda, d.score_retrieval)];
      }
    }
    double* row1 = t1.data() + qi * ml;
    std::size_t covered = 0;
    for (std::size_t a = 0; a < ml; ++a) {
      covered += enter_counts[a];
      row1[a] = relevant == 0
                    ? 0.0
                    : 1.0 - static_cast<double>(covered) / static_cast<double>(relevant);
    }

    // Stage 2: per-position entry indices for the ordered cutoff docs.
    const auto ordered = ordered_cutoff_docs(q, r0.r0);
    double* slice = t2.data() + qi * ml * mg;
    if (ordered.empty()) {
      std::fill(slice, slice + ml * mg, 0.0);
      continue;
    }
    std::vector<std::size_t> enter_lambda(ordered.size());
    std::vector<std::size_t> enter_gamma(ordered.size());
    std::vector<double> weights(ordered.size());
    double ideal = 0.0;
    for (std::size_t j = 0; j < ordered.size(); ++j) {
      enter_lambda[j] = first_index(grid_lambda, ordered[j]->score_retrieval);
      enter_gamma[j] = first_index(grid_gamma, ordered[j]->score_rank);
      weights[j] = position_weight(j + 1);
      ideal += weights[j];
    }
    for (std::size_t a = 0; a < ml; ++a) {
      for (std::size_t b = 0; b < mg; ++b) {
        double gain = 0.0;
        for (std::size_t j = 0; j < ordered.size(); ++j) {
          if (enter_lambda[j] <= a && enter_gamma[j] <= b) {
            gain += weights[j];
          }
        }
        slice[a * mg + b] = 1.0 - gain / ideal;
      }
    }
  }
  return {LossTable1(std::move(t1), grid_lambda, /*monotone=*/true),
          LossTable2(std::move(t2), grid_lambda, grid_gamma, /*monotone=*/true)};
}

LossTable1 monotonize1(const LossTable1& table) {
  const std::size_t m = table.n_lambda();
  std::vector<double> entries = table.entries();
  for (std::size_t i = 0; i < table.n_samples(); ++i) {
    double* row = entries.data() + i * m;
    for (std::size_t j = m - 1; j-- > 0;) {
      row[j] = std::max(row[j], row[j + 1]);
    }
  }
  return LossTable1(std::move(entries), table.grid(), /*monotone=*/true);
}

LossTable2 monotonize2(const LossTable2& table) {
  const std::size_t ml = table.n_lambda();
  const std::size_t mg = table.n_gamma();
  std::vector<double> entries = table.entries();
  for (std::size_t i = 0; i < table.n_samples(); ++i) {
    double* slice = entries.data() + i * ml * mg;
    for (std::size_t a = ml; a-- > 0;) {
      for (std::size_t b = mg; b-- > 0;) {
        double v = slice[a * mg + b];
        if (a + 1 < ml) {
          v = std::max(v, slice[(a + 1) * mg + b]);
        }
        if (b + 1 < mg) {
          v = std::max(v, slice[a * mg + b + 1]);
        }
        slice[a * mg + b] = v;
      }
    }
  }
  return LossTable2(std::move(entries), table.grid_lambda(), table.grid_gamma(),
                    /*monotone=*/true);
}

}  // namespace riskcal
