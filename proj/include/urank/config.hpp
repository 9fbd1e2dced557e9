#pragma once

#include "urank/common.hpp"
#include "urank/corpus.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace urank {

// Resolved experiment configuration. Defaults reproduce the reference
// experimental constants (1000/200 split, 20 pre-selected, K = 5, batch 20).
struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path out_dir = "out";

    // Datasets. train_path feeds the split commands; pool/validation/test
    // paths are used directly when set, and default to the fixture artifacts
    // under out_dir when left empty.
    std::string train_path;
    std::string pool_path;
    std::string validation_path;
    std::string test_path;
    PromptFormat format = PromptFormat::QA;

    std::size_t n_candidate = 1000;
    std::size_t n_validation = 200;

    std::size_t n_preselect = 20;
    double bm25_k1 = 1.2;
    double bm25_b = 0.75;

    Eigen::Index projection_dim = 128;

    std::size_t shot_budget = 5;  // K
    std::size_t batch_size = 20;
    std::size_t epochs = 1;
    double learning_rate = 1e-3;
    std::string train_mode = "dynamic";  // or "fixed-k"

    std::size_t k_eval = 5;
    std::string eval_mode = "ranker";

    std::string backend_kind = "oracle";  // oracle | http | replay
    std::string backend_model = "gpt-4";
    std::string backend_endpoint;
    std::string backend_api_key_env = "OPENAI_API_KEY";
    std::string transcript_path;  // empty -> out_dir/transcript.jsonl
    int backend_timeout_ms = 30000;
    int backend_retries = 3;
    int oracle_easy_slack = 1;
    int oracle_hard_min_helpful = 1;

    std::string provider_kind = "file";  // file | http
    std::string provider_path;           // empty -> fixture embeddings
    std::string provider_endpoint;
    std::string provider_api_key_env;
    std::string provider_cache_dir;  // empty -> out_dir/embed_cache
    int provider_dimension = 0;
    int provider_timeout_ms = 30000;
    int provider_retries = 3;

    int fixtures_n_topics = 4;
    int fixtures_n_examples = 1000;
    int fixtures_n_queries = 200;
    int fixtures_dim = 16;

    std::string transfer_params_path;

    // Named sub-seeds so each randomized component has its own stream.
    std::uint64_t split_seed() const;
    std::uint64_t shuffle_seed() const;
    std::uint64_t init_seed() const;
    std::uint64_t sampling_seed() const;
    std::uint64_t fixtures_seed() const;

    // Paths with out_dir-relative fallbacks applied.
    std::filesystem::path resolved_pool_path() const;
    std::filesystem::path resolved_validation_path() const;
    std::filesystem::path resolved_test_path() const;
    std::filesystem::path resolved_provider_path() const;
    std::filesystem::path resolved_transcript_path() const;
    std::filesystem::path resolved_cache_dir() const;
};

// The full default configuration as JSON; doubles as the schema skeleton.
nlohmann::json default_config_json();

// Deep-merges `overrides` into `base`; unknown or mistyped keys are rejected
// with a message listing every offending key.
nlohmann::json merge_config(nlohmann::json base, const nlohmann::json& overrides);

// Applies one "dotted.key=value" override; values parse as JSON when
// possible, otherwise as strings.
void apply_override(nlohmann::json& config, const std::string& assignment);

// Validates and converts; throws ValidationError listing offending keys.
RunConfig parse_config(const nlohmann::json& config);

nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace urank
