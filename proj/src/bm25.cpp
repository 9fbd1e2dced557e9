#include "urank/bm25.hpp"

#include "urank/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace urank {

namespace {

using json = nlohmann::json;

constexpr const char* kIndexMagic = "URANK-BM25-v1";

void validate_params(const Bm25Params& params) {
    if (!(params.k1 > 0.0))
        throw ValidationError("bm25: k1 must be positive, got " + std::to_string(params.k1));
    if (params.b < 0.0 || params.b > 1.0)
        throw ValidationError("bm25: b must lie in [0, 1], got " + std::to_string(params.b));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string retrieval_text(const Example& example) {
    std::string text = example.question;
    if (example.statement) {
        text += ' ';
        text += *example.statement;
    }
    for (const auto& [label, option_text] : example.options) {
        text += ' ';
        text += option_text;
    }
    return text;
}

Bm25Index build_index(const std::vector<Example>& pool, Bm25Params params) {
    if (pool.empty()) throw ValidationError("bm25: cannot build an index over an empty pool");
    validate_params(params);

    Bm25Index index;
    index.params = params;
    index.doc_ids.reserve(pool.size());
    index.doc_lengths.reserve(pool.size());

    std::unordered_set<std::string> seen;
    std::size_t total_tokens = 0;
    for (std::size_t doc = 0; doc < pool.size(); ++doc) {
        const Example& e = pool[doc];
        if (!seen.insert(e.id).second)
            throw ValidationError("bm25: duplicate document id '" + e.id + "'");
        index.doc_ids.push_back(e.id);

        std::unordered_map<std::string, std::size_t> counts;
        const auto tokens = tokenize(retrieval_text(e));
        for (const auto& token : tokens) ++counts[token];
        index.doc_lengths.push_back(tokens.size());
        total_tokens += tokens.size();

        for (const auto& [term, tf] : counts) {
            auto& stats = index.term_stats[term];
            stats.doc_frequency += 1;
            stats.postings.emplace_back(doc, tf);
        }
    }
    index.avg_doc_length = static_cast<double>(total_tokens) / static_cast<double>(pool.size());
    return index;
}

Preselection preselect(const Bm25Index& index, const Example& query, std::size_t n) {
    if (n < 1) throw ValidationError("bm25: preselection size must be at least 1");
    const std::size_t n_docs = index.size();
    const double k1 = index.params.k1;
    const double b = index.params.b;
    const double avg = index.avg_doc_length;

    std::vector<double> scores(n_docs, 0.0);
    for (const auto& token : tokenize(retrieval_text(query))) {
        auto it = index.term_stats.find(token);
        if (it == index.term_stats.end()) continue;
        const auto& stats = it->second;
        const double df = static_cast<double>(stats.doc_frequency);
        const double idf =
            std::log((static_cast<double>(n_docs) - df + 0.5) / (df + 0.5) + 1.0);
        for (const auto& [doc, tf_count] : stats.postings) {
            const double tf = static_cast<double>(tf_count);
            const double len_norm =
                avg > 0.0 ? static_cast<double>(index.doc_lengths[doc]) / avg : 0.0;
            scores[doc] += idf * tf / (tf + k1 * (1.0 - b + b * len_norm));
        }
    }

    std::vector<std::size_t> order(n_docs);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return scores[a] > scores[c]; });

    Preselection result;
    result.query_id = query.id;
    for (std::size_t doc : order) {
        if (index.doc_ids[doc] == query.id) continue;
        result.candidate_ids.push_back(index.doc_ids[doc]);
        result.scores.push_back(scores[doc]);
        if (result.candidate_ids.size() == n) break;
    }
    return result;
}

void save_index(const std::filesystem::path& path, const Bm25Index& index) {
    json j;
    j["magic"] = kIndexMagic;
    j["k1"] = index.params.k1;
    j["b"] = index.params.b;
    j["doc_ids"] = index.doc_ids;
    j["doc_lengths"] = index.doc_lengths;
    j["avg_doc_length"] = index.avg_doc_length;
    json terms = json::object();
    for (const auto& [term, stats] : index.term_stats) {
        json postings = json::array();
        for (const auto& [doc, tf] : stats.postings) postings.push_back({doc, tf});
        terms[term] = {{"df", stats.doc_frequency}, {"postings", postings}};
    }
    j["terms"] = std::move(terms);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("bm25: cannot write index file " + path.string());
    out << j.dump() << '\n';
}

Bm25Index load_index(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("bm25: cannot open index file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ParseError("bm25: malformed index file " + path.string() + ": " + ex.what());
    }
    if (!j.is_object() || j.value("magic", "") != kIndexMagic)
        throw ValidationError("bm25: " + path.string() + " is not a " + kIndexMagic + " file");

    Bm25Index index;
    index.params.k1 = j.at("k1").get<double>();
    index.params.b = j.at("b").get<double>();
    validate_params(index.params);
    index.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    index.doc_lengths = j.at("doc_lengths").get<std::vector<std::size_t>>();
    index.avg_doc_length = j.at("avg_doc_length").get<double>();
    if (index.doc_ids.size() != index.doc_lengths.size())
        throw ValidationError("bm25: index file has inconsistent document tables");
    for (const auto& [term, entry] : j.at("terms").items()) {
        Bm25TermStats stats;
        stats.doc_frequency = entry.at("df").get<std::size_t>();
        if (stats.doc_frequency > index.doc_ids.size())
            throw ValidationError("bm25: term '" + term +
                                  "' has document frequency above the corpus size");
        for (const auto& p : entry.at("postings")) {
            stats.postings.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
        }
        index.term_stats.emplace(term, std::move(stats));
    }
    return index;
}

}  // namespace urank
