#pragma once

#include "urank/bm25.hpp"
#include "urank/corpus.hpp"
#include "urank/embedding.hpp"
#include "urank/llm.hpp"
#include "urank/scorer.hpp"
#include "urank/trainer.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace urank {

enum class RetrievalMode { ZeroShot, RandomSampling, Bm25Only, TrainedRanker };

RetrievalMode parse_retrieval_mode(std::string_view name);
std::string retrieval_mode_name(RetrievalMode mode);

struct EvalDeps {
    EvalDeps(const std::vector<Example>& pool_in, const Bm25Index& index_in,
             const EmbeddingTable& embeddings_in, LlmBackend& backend_in);

    const std::vector<Example>& pool;
    const Bm25Index& index;
    const EmbeddingTable& embeddings;
    LlmBackend& backend;
    const ScorerParams* params = nullptr;  // required for TrainedRanker
    PromptFormat format = PromptFormat::QA;
    std::size_t n_preselect = 20;
    std::uint64_t sampling_seed = 0;  // RandomSampling draws
    std::unordered_map<std::string, const Example*> pool_by_id;
};

struct Inference {
    std::string prediction;
    std::vector<std::string> retrieved_ids;
    bool failed = false;
    std::string error;
};

// Test-time retrieval + one completion, per the configured mode.
Inference infer(const Example& query, RetrievalMode mode, std::size_t k, const EvalDeps& deps);

struct QueryEval {
    std::string query_id;
    std::string prediction;
    bool correct = false;
    bool easy = false;  // 0-shot probe verdict
    bool flipped = false;
    bool failed = false;
    std::vector<std::string> retrieved_ids;
};

struct EvalResult {
    std::vector<QueryEval> per_query;
    double accuracy_overall = 0.0;
    double accuracy_easy = 0.0;
    double accuracy_hard = 0.0;
    double flip_rate = 0.0;
    std::size_t n_easy = 0;
    std::size_t n_hard = 0;
    std::size_t total_shots = 0;
};

// Classifies each query easy/hard by a 0-shot probe, runs the configured
// retrieval mode at k shots, and aggregates accuracies plus the fraction of
// queries whose correctness differs between 0-shot and k-shot.
EvalResult evaluate(const std::vector<Example>& test, RetrievalMode mode, std::size_t k,
                    const EvalDeps& deps);

void write_eval_json(const std::filesystem::path& path, const EvalResult& result,
                     const nlohmann::json& config_json = nlohmann::json::object());
void write_eval_csv(const std::filesystem::path& path, const EvalResult& result);

struct CostRow {
    std::size_t batch = 0;
    std::size_t shots = 0;
    double ratio_vs_fixed_k = 0.0;
};

// Per-batch shot counts relative to the fixed-K baseline (batch_size * K).
std::vector<CostRow> cost_report(const TrainingReport& report);
void write_cost_csv(const std::filesystem::path& path, const std::vector<CostRow>& rows);

// Loads foreign params and evaluates them with the TrainedRanker mode; the
// params' embedding dimension must match the target provider's.
EvalResult transfer_eval(const std::filesystem::path& params_path,
                         const std::vector<Example>& test, EvalDeps deps, std::size_t k);

}  // namespace urank
