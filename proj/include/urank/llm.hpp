#pragma once

#include "urank/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace urank {

// Hex digest of (model_name || prompt); keys transcript records.
std::string prompt_hash(std::string_view model, std::string_view prompt);

// Deterministic completion interface. Temperature is pinned to 0 for every
// backend; repeated identical calls must return identical strings.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string complete(const std::string& prompt, const Example& query,
                                 const std::vector<Example>& shots) = 0;
    virtual std::string model_name() const = 0;
};

struct OracleRule {
    int easy_slack = 1;        // easy queries tolerate this many extra misleaders
    int hard_min_helpful = 1;  // hard queries need at least this many helpers
};

// Deterministic stand-in LLM for desk-scale runs. Correctness is a rule over
// the same-topic helpful/misleading counts in the shots:
//   easy: gold iff misleading <= helpful + easy_slack
//   hard: gold iff helpful >= hard_min_helpful and helpful > misleading
// Wrong answers are always the fixed string "unknown". Queries must carry
// meta.difficulty; shots without meta roles count as neutral.
class SyntheticOracleBackend : public LlmBackend {
public:
    explicit SyntheticOracleBackend(OracleRule rule = {});

    std::string complete(const std::string& prompt, const Example& query,
                         const std::vector<Example>& shots) override;
    std::string model_name() const override { return "synthetic-oracle"; }

    static constexpr const char* kWrongAnswer = "unknown";

private:
    OracleRule rule_;
};

// Serves recorded responses by prompt hash; never queries anything. A miss is
// an error carrying the missing hash.
class ReplayBackend : public LlmBackend {
public:
    ReplayBackend(const std::filesystem::path& transcript_path, std::string model);

    std::string complete(const std::string& prompt, const Example& query,
                         const std::vector<Example>& shots) override;
    std::string model_name() const override { return model_; }
    std::size_t entries() const { return responses_.size(); }

private:
    std::string model_;
    std::unordered_map<std::string, std::string> responses_;
};

struct HttpBackendConfig {
    std::string endpoint;  // base URL
    std::string model = "gpt-4";
    std::string api_key_env = "OPENAI_API_KEY";
    std::filesystem::path transcript_path;
    int timeout_ms = 30000;
    int retries = 3;
};

// OpenAI-compatible chat completions client. Every completion is appended to
// the transcript file so the run can be replayed bit-for-bit.
class HttpChatBackend : public LlmBackend {
public:
    explicit HttpChatBackend(HttpBackendConfig config);

    std::string complete(const std::string& prompt, const Example& query,
                         const std::vector<Example>& shots) override;
    std::string model_name() const override { return config_.model; }

private:
    HttpBackendConfig config_;
    std::mutex transcript_mutex_;
};

struct TranscriptStats {
    std::size_t entries = 0;
    std::size_t unique_prompts = 0;
};

TranscriptStats transcript_stats(const std::filesystem::path& path);

}  // namespace urank
