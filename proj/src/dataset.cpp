#include "riskcal/dataset.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "riskcal/errors.hpp"

namespace riskcal {

namespace {

std::string where(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

bool parse_double(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_int(std::string_view text, int& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

struct Row {
  std::string query_id;
  DocRecord doc;
};

void check_row(const Row& row, const std::string& context) {
  if (row.doc.relevance < 0) {
    throw data_error(context + ": relevance must be >= 0");
  }
  if (!(row.doc.score_retrieval >= 0.0 && row.doc.score_retrieval <= 1.0)) {
    throw data_error(context + ": score_retrieval outside [0, 1]");
  }
  if (!(row.doc.score_rank >= 0.0 && row.doc.score_rank <= 1.0)) {
    throw data_error(context + ": score_rank outside [0, 1]");
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

Dataset group_rows(const std::string& path, std::vector<Row> rows) {
  if (rows.empty()) {
    throw data_error(path + ": no data rows");
  }
  Dataset out;
  out.report.n_rows = rows.size();
  std::unordered_map<std::string, std::size_t> index_of;
  for (Row& row : rows) {
    auto [it, inserted] = index_of.try_emplace(row.query_id, out.queries.size());
    if (inserted) {
      out.queries.push_back(QueryRecord{row.query_id, {}});
    }
    out.queries[it->second].docs.push_back(std::move(row.doc));
  }
  validate_queries(out.queries);
  out.report.n_queries = out.queries.size();
  for (const QueryRecord& q : out.queries) {
    bool any_relevant = false;
    bool top_scored = false;
    for (const DocRecord& d : q.docs) {
      if (d.relevance > 0) {
        any_relevant = true;
        if (d.score_retrieval == 1.0) {
          top_scored = true;
        }
      }
    }
    if (!any_relevant) {
      ++out.report.n_queries_without_relevant;
    }
    if (top_scored) {
      ++out.report.n_queries_top_scored_relevant;
    }
  }
  return out;
}

std::vector<Row> read_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw data_error("cannot open " + path);
  }
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 5) {
      throw data_error(where(path, line_no) + ": expected 5 tab-separated fields, got " +
                       std::to_string(fields.size()));
    }
    Row row;
    row.query_id = std::string(fields[0]);
    row.doc.doc_id = std::string(fields[1]);
    const bool numeric = parse_int(fields[2], row.doc.relevance) &&
                         parse_double(fields[3], row.doc.score_retrieval) &&
                         parse_double(fields[4], row.doc.score_rank);
    if (!numeric) {
      if (line_no == 1) {
        continue;  // header line
      }
      throw data_error(where(path, line_no) + ": cannot parse numeric fields");
    }
    check_row(row, where(path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Row> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw data_error("cannot open " + path);
  }
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw data_error(where(path, line_no) + ": " + e.what());
    }
    Row row;
    try {
      row.query_id = obj.at("query_id").get<std::string>();
      row.doc.doc_id = obj.at("doc_id").get<std::string>();
      row.doc.relevance = obj.at("relevance").get<int>();
      row.doc.score_retrieval = obj.at("score_retrieval").get<double>();
      row.doc.score_rank = obj.at("score_rank").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw data_error(where(path, line_no) + ": " + e.what());
    }
    check_row(row, where(path, line_no));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

DatasetFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = path.substr(dot + 1);
    if (ext == "jsonl" || ext == "json") {
      return DatasetFormat::kJsonl;
    }
  }
  return DatasetFormat::kTsv;
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
  return group_rows(path, format == DatasetFormat::kTsv ? read_tsv(path) : read_jsonl(path));
}

void save_tsv(const std::string& path, const std::vector<QueryRecord>& queries) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) {
    throw data_error("cannot write " + path);
  }
  out << "query_id\tdoc_id\trelevance\tscore_retrieval\tscore_rank\n";
  for (const QueryRecord& q : queries) {
    for (const DocRecord& d : q.docs) {
      out << q.query_id << '\t' << d.doc_id << '\t' << d.relevance << '\t'
          << format_score(d.score_retrieval) << '\t' << format_score(d.score_rank) << '\n';
    }
  }
}

void save_jsonl(const std::string& path, const std::vector<QueryRecord>& queries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw data_error("cannot write " + path);
  }
  for (const QueryRecord& q : queries) {
    for (const DocRecord& d : q.docs) {
      nlohmann::json obj{{"query_id", q.query_id},
                         {"doc_id", d.doc_id},
                         {"relevance", d.relevance},
                         {"score_retrieval", d.score_retrieval},
                         {"score_rank", d.score_rank}};
      out << obj.dump() << '\n';
    }
  }
}

}  // namespace riskcal
