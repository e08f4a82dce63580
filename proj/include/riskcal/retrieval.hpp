#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riskcal/loss_table.hpp"

namespace riskcal {

// One scored candidate document. Scores come from the two pipeline models
// and must lie in [0, 1]; relevance is an integer grade >= 0.
struct DocRecord {
  std::string doc_id;
  int relevance = 0;
  double score_retrieval = 0.0;
  double score_rank = 0.0;
};

// A query with its candidate documents. Doc ids are unique per query.
struct QueryRecord {
  std::string query_id;
  std::vector<DocRecord> docs;
};

// Throws data_error naming the offending query/document when scores are
// out of range, relevance is negative, docs are missing, or ids repeat.
void validate_queries(const std::vector<QueryRecord>& queries);

// Minimum relevance grade a document needs to count for the ranking stage.
struct RelevanceCutoff {
  int r0 = 1;
};

// Documents whose retrieval score is >= 1 - lambda.
std::vector<std::string> retrieval_set(const QueryRecord& query, double lambda);

// Documents passing both thresholds: rank score >= 1 - gamma intersected
// with the retrieval set.
std::vector<std::string> ranking_set(const QueryRecord& query, double lambda, double gamma);

// Missed fraction of relevant documents (relevance > 0); 0 when the query
// has none.
double retrieval_loss(const QueryRecord& query, double lambda);

// One minus the position-discounted coverage of the cutoff-relevant
// documents, ordered by descending relevance with stable ties; 0 when the
// query has none. Log-base invariant; natural log internally.
double ranking_loss(const QueryRecord& query, double lambda, double gamma, RelevanceCutoff r0);

// Loss tables over the grid product, flagged monotone (threshold sets are
// nested, so the per-query losses are non-increasing in each threshold).
std::pair<LossTable1, LossTable2> build_loss_tables(const std::vector<QueryRecord>& queries,
                                                    const ParameterGrid& grid_lambda,
                                                    const ParameterGrid& grid_gamma,
                                                    RelevanceCutoff r0);

// Suffix running maximum per row; restores monotonicity for loss tables
// that were not built from nested threshold sets.
LossTable1 monotonize1(const LossTable1& table);

// Two-dimensional suffix maximum per slice, filled from the top-right
// corner: M[a][b] = max(L[a][b], M[a+1][b], M[a][b+1]).
LossTable2 monotonize2(const LossTable2& table);

}  // namespace riskcal
