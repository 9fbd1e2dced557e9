#pragma once

#include "urank/bm25.hpp"
#include "urank/corpus.hpp"
#include "urank/embedding.hpp"
#include "urank/llm.hpp"
#include "urank/scorer.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace urank {

// +1 if the prediction matches the gold answer, -1 otherwise.
int reward(std::string_view prediction, const Example& gold, PromptFormat format);

struct TrainConfig {
    std::size_t shot_budget = 5;  // K
    std::size_t n_preselect = 20;
    std::size_t batch_size = 20;
    std::size_t epochs = 1;
    double learning_rate = 1e-3;
    Eigen::Index projection_dim = 128;
    PromptFormat format = PromptFormat::QA;
    std::uint64_t init_seed = 0;
    std::uint64_t shuffle_seed = 0;
    // PromptPG-style comparator: constant shot count, a single K-shot
    // inference per sample, whole-set reward, no threshold updates.
    bool fixed_shots = false;
};

struct TrainerDeps {
    TrainerDeps(const std::vector<Example>& pool_in, const Bm25Index& index_in,
                const EmbeddingTable& embeddings_in, LlmBackend& backend_in);

    const std::vector<Example>& pool;
    const Bm25Index& index;
    const EmbeddingTable& embeddings;
    LlmBackend& backend;
    std::unordered_map<std::string, const Example*> pool_by_id;
};

struct SigmaUpdate {
    std::size_t shot = 0;  // the j at which the true->false flip happened
    double value = 0.0;
};

struct ShotTrace {
    std::string query_id;
    std::size_t k_i = 0;
    std::vector<int> rewards;                // indexed j = 0..k_i (dynamic mode)
    std::vector<std::string> retrieved_ids;  // the top-k_i ranking
    std::vector<SigmaUpdate> sigma_updates;
    std::size_t shot_cost = 0;
    bool failed = false;
    std::string error;
};

struct TrainerState {
    double sigma = 0.0;
    ScorerParams params;
    Matrix grad_w_acc;
    Vector grad_b_acc;
    double loss_acc = 0.0;
    std::size_t loss_terms = 0;
    std::size_t shots_queried_this_batch = 0;
    std::vector<std::size_t> per_batch_shot_history;
    std::size_t epoch = 0;

    explicit TrainerState(ScorerParams initial);
    void reset_batch_accumulators();
};

struct BatchStats {
    double loss = 0.0;  // mean over accumulated terms
    std::size_t shots = 0;
    double sigma_after = 0.0;
};

struct TrainingReport {
    std::vector<BatchStats> per_batch;
    std::vector<ShotTrace> traces;
    double final_sigma = 0.0;
    std::size_t failed_samples = 0;
    std::size_t total_shots = 0;
    std::size_t batch_size = 0;
    std::size_t shot_budget = 0;
    bool fixed_shots = false;
};

// One validation sample: preselect, rank, incremental 0..k_i-shot inference,
// per-shot rewards, marginal-sample loss terms, threshold updates on
// true->false flips. The threshold in effect is the one at sample start.
ShotTrace process_sample(TrainerState& state, const Example& sample, const TrainerDeps& deps,
                         const TrainConfig& config);

// Processes the batch in order, then applies one averaged parameter update.
BatchStats run_batch(TrainerState& state, const std::vector<Example>& batch,
                     const TrainerDeps& deps, const TrainConfig& config,
                     std::vector<ShotTrace>& traces);

std::pair<ScorerParams, TrainingReport> train(const std::vector<Example>& validation,
                                              const TrainerDeps& deps,
                                              const TrainConfig& config);

void write_shot_traces(const std::filesystem::path& path, const std::vector<ShotTrace>& traces);

// {config, per_batch: [{loss, shots, sigma_after}], traces_path}.
void write_training_report(const std::filesystem::path& path, const TrainingReport& report,
                           const std::string& traces_path,
                           const nlohmann::json& config_json = nlohmann::json::object());

TrainingReport load_training_report(const std::filesystem::path& path);

}  // namespace urank
