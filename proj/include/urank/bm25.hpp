#pragma once

#include "urank/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace urank {

// Lowercase, split on any non-alphanumeric character, drop empties.
std::vector<std::string> tokenize(std::string_view text);

// The text BM25 indexes for an example: question, statement and option texts.
// Answers are excluded so similarity never leaks label information.
std::string retrieval_text(const Example& example);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Bm25TermStats {
    std::size_t doc_frequency = 0;
    // (document index, term frequency), ascending by document index.
    std::vector<std::pair<std::size_t, std::size_t>> postings;
};

struct Bm25Index {
    std::vector<std::string> doc_ids;
    std::unordered_map<std::string, Bm25TermStats> term_stats;
    std::vector<std::size_t> doc_lengths;
    double avg_doc_length = 0.0;
    Bm25Params params;

    std::size_t size() const { return doc_ids.size(); }
};

Bm25Index build_index(const std::vector<Example>& pool, Bm25Params params = {});

struct Preselection {
    std::string query_id;
    std::vector<std::string> candidate_ids;  // descending BM25 score
    std::vector<double> scores;
};

// Top-min(n, pool size) documents by Okapi BM25 score
//   sum_t idf(t) * tf / (tf + k1 * (1 - b + b * len/avglen)),
//   idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1).
// Ties break by ascending insertion order; the query never retrieves itself.
Preselection preselect(const Bm25Index& index, const Example& query, std::size_t n);

// JSON persistence with magic header "URANK-BM25-v1".
void save_index(const std::filesystem::path& path, const Bm25Index& index);
Bm25Index load_index(const std::filesystem::path& path);

}  // namespace urank
