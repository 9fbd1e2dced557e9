#include "urank/evaluation.hpp"

#include "urank/common.hpp"
#include "urank/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

namespace urank {

namespace {

using json = nlohmann::json;

std::vector<Example> resolve(const std::vector<std::string>& ids, const EvalDeps& deps) {
    std::vector<Example> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        auto it = deps.pool_by_id.find(id);
        if (it == deps.pool_by_id.end())
            throw ValidationError("evaluation: retrieved id '" + id + "' is not in the pool");
        out.push_back(*it->second);
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

RetrievalMode parse_retrieval_mode(std::string_view name) {
    std::string n(name);
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == "zero-shot" || n == "zeroshot" || n == "zero_shot") return RetrievalMode::ZeroShot;
    if (n == "random") return RetrievalMode::RandomSampling;
    if (n == "bm25") return RetrievalMode::Bm25Only;
    if (n == "ranker") return RetrievalMode::TrainedRanker;
    throw ValidationError("evaluation: unknown retrieval mode '" + std::string(name) + "'");
}

std::string retrieval_mode_name(RetrievalMode mode) {
    switch (mode) {
        case RetrievalMode::ZeroShot: return "zero-shot";
        case RetrievalMode::RandomSampling: return "random";
        case RetrievalMode::Bm25Only: return "bm25";
        case RetrievalMode::TrainedRanker: return "ranker";
    }
    return "zero-shot";
}

EvalDeps::EvalDeps(const std::vector<Example>& pool_in, const Bm25Index& index_in,
                   const EmbeddingTable& embeddings_in, LlmBackend& backend_in)
    : pool(pool_in), index(index_in), embeddings(embeddings_in), backend(backend_in) {
    pool_by_id.reserve(pool.size());
    for (const auto& e : pool) pool_by_id.emplace(e.id, &e);
}

Inference infer(const Example& query, RetrievalMode mode, std::size_t k, const EvalDeps& deps) {
    Inference result;
    if (mode != RetrievalMode::ZeroShot && k > 0) {
        switch (mode) {
            case RetrievalMode::RandomSampling: {
                if (k > deps.pool.size())
                    throw ValidationError("evaluation: cannot sample " + std::to_string(k) +
                                          " shots from a pool of " +
                                          std::to_string(deps.pool.size()));
                std::vector<std::size_t> indices(deps.pool.size());
                std::iota(indices.begin(), indices.end(), 0);
                std::mt19937_64 rng(derive_seed(deps.sampling_seed, query.id));
                std::shuffle(indices.begin(), indices.end(), rng);
                for (std::size_t idx : indices) {
                    if (deps.pool[idx].id == query.id) continue;
                    result.retrieved_ids.push_back(deps.pool[idx].id);
                    if (result.retrieved_ids.size() == k) break;
                }
                break;
            }
            case RetrievalMode::Bm25Only: {
                if (k > deps.n_preselect)
                    throw ValidationError("evaluation: k exceeds the preselection size");
                const Preselection pre = preselect(deps.index, query, deps.n_preselect);
                const std::size_t take = std::min(k, pre.candidate_ids.size());
                result.retrieved_ids.assign(pre.candidate_ids.begin(),
                                            pre.candidate_ids.begin() +
                                                static_cast<std::ptrdiff_t>(take));
                break;
            }
            case RetrievalMode::TrainedRanker: {
                if (k > deps.n_preselect)
                    throw ValidationError("evaluation: k exceeds the preselection size");
                if (!deps.params)
                    throw ValidationError("evaluation: ranker mode needs trained params");
                const Preselection pre = preselect(deps.index, query, deps.n_preselect);
                std::vector<Candidate> candidates;
                candidates.reserve(pre.candidate_ids.size());
                for (const auto& id : pre.candidate_ids)
                    candidates.push_back({id, deps.embeddings.at(id)});
                const RankedCandidates ranked =
                    rank(*deps.params, deps.embeddings.at(query.id), candidates, query.id);
                result.retrieved_ids = top_k(ranked, std::min(k, ranked.size()));
                break;
            }
            case RetrievalMode::ZeroShot: break;
        }
    }

    const std::vector<Example> shots = resolve(result.retrieved_ids, deps);
    try {
        result.prediction =
            deps.backend.complete(build_prompt(shots, query, deps.format), query, shots);
    } catch (const Error& ex) {
        result.failed = true;
        result.error = ex.what();
    }
    return result;
}

EvalResult evaluate(const std::vector<Example>& test, RetrievalMode mode, std::size_t k,
                    const EvalDeps& deps) {
    if (test.empty()) throw ValidationError("evaluation: test set is empty");

    EvalResult result;
    std::size_t correct_easy = 0;
    std::size_t correct_hard = 0;
    std::size_t flips = 0;

    for (const auto& query : test) {
        QueryEval qe;
        qe.query_id = query.id;

        // 0-shot probe decides easy vs hard; a probe failure counts as hard.
        bool probe_correct = false;
        try {
            const std::string probe =
                deps.backend.complete(build_prompt({}, query, deps.format), query, {});
            probe_correct = match_answer(probe, query, deps.format);
        } catch (const Error&) {
            qe.failed = true;
        }
        qe.easy = probe_correct;

        Inference inf = infer(query, mode, k, deps);
        qe.prediction = inf.prediction;
        qe.retrieved_ids = inf.retrieved_ids;
        qe.failed = qe.failed || inf.failed;
        qe.correct = !inf.failed && match_answer(inf.prediction, query, deps.format);
        qe.flipped = qe.correct != probe_correct;

        result.total_shots += qe.retrieved_ids.size();
        if (qe.easy) {
            ++result.n_easy;
            correct_easy += qe.correct ? 1 : 0;
        } else {
            ++result.n_hard;
            correct_hard += qe.correct ? 1 : 0;
        }
        flips += qe.flipped ? 1 : 0;
        result.per_query.push_back(std::move(qe));
    }

    const auto total = static_cast<double>(test.size());
    result.accuracy_easy =
        result.n_easy ? static_cast<double>(correct_easy) / static_cast<double>(result.n_easy)
                      : 0.0;
    result.accuracy_hard =
        result.n_hard ? static_cast<double>(correct_hard) / static_cast<double>(result.n_hard)
                      : 0.0;
    result.accuracy_overall = static_cast<double>(correct_easy + correct_hard) / total;
    result.flip_rate = static_cast<double>(flips) / total;
    return result;
}

void write_eval_json(const std::filesystem::path& path, const EvalResult& result,
                     const nlohmann::json& config_json) {
    json j;
    j["config"] = config_json;
    j["aggregate"] = {{"accuracy_overall", result.accuracy_overall},
                      {"accuracy_easy", result.accuracy_easy},
                      {"accuracy_hard", result.accuracy_hard},
                      {"flip_rate", result.flip_rate},
                      {"n_easy", result.n_easy},
                      {"n_hard", result.n_hard}};
    j["cost"] = {{"total_shots", result.total_shots}};
    json per_query = json::array();
    for (const auto& qe : result.per_query) {
        per_query.push_back({{"query_id", qe.query_id},
                             {"prediction", qe.prediction},
                             {"correct", qe.correct},
                             {"difficulty", qe.easy ? "easy" : "hard"},
                             {"flipped", qe.flipped},
                             {"failed", qe.failed},
                             {"retrieved_ids", qe.retrieved_ids}});
    }
    j["per_query"] = std::move(per_query);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("evaluation: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_eval_csv(const std::filesystem::path& path, const EvalResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("evaluation: cannot write " + path.string());
    out << "query_id,prediction,correct,difficulty,flipped,failed,retrieved_ids\n";
    for (const auto& qe : result.per_query) {
        std::string ids;
        for (const auto& id : qe.retrieved_ids) {
            if (!ids.empty()) ids += '|';
            ids += id;
        }
        out << csv_escape(qe.query_id) << ',' << csv_escape(qe.prediction) << ','
            << (qe.correct ? 1 : 0) << ',' << (qe.easy ? "easy" : "hard") << ','
            << (qe.flipped ? 1 : 0) << ',' << (qe.failed ? 1 : 0) << ',' << csv_escape(ids)
            << '\n';
    }
}

std::vector<CostRow> cost_report(const TrainingReport& report) {
    if (report.batch_size == 0 || report.shot_budget == 0)
        throw ValidationError("evaluation: training report lacks batch size or shot budget");
    const double fixed_cost =
        static_cast<double>(report.batch_size) * static_cast<double>(report.shot_budget);
    std::vector<CostRow> rows;
    rows.reserve(report.per_batch.size());
    for (std::size_t i = 0; i < report.per_batch.size(); ++i) {
        CostRow row;
        row.batch = i;
        row.shots = report.per_batch[i].shots;
        row.ratio_vs_fixed_k = static_cast<double>(row.shots) / fixed_cost;
        rows.push_back(row);
    }
    return rows;
}

void write_cost_csv(const std::filesystem::path& path, const std::vector<CostRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("evaluation: cannot write " + path.string());
    out << "batch,shots,ratio_vs_fixed_k\n";
    for (const auto& row : rows)
        out << row.batch << ',' << row.shots << ',' << row.ratio_vs_fixed_k << '\n';
}

EvalResult transfer_eval(const std::filesystem::path& params_path,
                         const std::vector<Example>& test, EvalDeps deps, std::size_t k) {
    const ScorerParams params = load_params(params_path);
    if (params.embedding_dim() != deps.embeddings.dim)
        throw ValidationError("evaluation: params expect embedding dimension " +
                              std::to_string(params.embedding_dim()) +
                              " but the provider serves " + std::to_string(deps.embeddings.dim));
    deps.params = &params;
    return evaluate(test, RetrievalMode::TrainedRanker, k, deps);
}

}  // namespace urank
