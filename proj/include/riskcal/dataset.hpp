#pragma once

#include <string>
#include <vector>

#include "riskcal/retrieval.hpp"

namespace riskcal {

enum class DatasetFormat { kTsv, kJsonl };

// Picks the format from the file extension; .jsonl/.json map to JSONL,
// everything else to TSV.
DatasetFormat format_from_path(const std::string& path);

struct LoadReport {
  std::size_t n_rows = 0;
  std::size_t n_queries = 0;
  std::size_t n_queries_without_relevant = 0;
  // queries where a relevant doc carries a retrieval score of exactly 1.0,
  // i.e. the stage-1 loss at lambda = 0 is already below 1
  std::size_t n_queries_top_scored_relevant = 0;
};

struct Dataset {
  std::vector<QueryRecord> queries;
  LoadReport report;
};

// Rows are grouped by query id in first-appearance order and validated.
// TSV columns: query_id, doc_id, relevance, score_retrieval, score_rank
// (header optional); JSONL carries one object per row with the same keys.
Dataset load_dataset(const std::string& path, DatasetFormat format);

void save_tsv(const std::string& path, const std::vector<QueryRecord>& queries);
void save_jsonl(const std::string& path, const std::vector<QueryRecord>& queries);

}  // namespace riskcal
