#pragma once

#include "urank/common.hpp"
#include "urank/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace urank {

// Frozen-encoder abstraction: every provider serves fixed-dimension vectors
// and is deterministic per (provider contents, key).
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    // `key` identifies the text (example id, or a content hash for ad-hoc
    // text); `text` is what gets encoded when the provider computes vectors.
    virtual Vector embed(const std::string& key, const std::string& text) = 0;
};

// Serves vectors from an embedding JSONL file: {"id": ..., "vector": [...]}.
// Dimension is inferred from the first record and enforced thereafter.
class FileEmbeddingProvider : public EmbeddingProvider {
public:
    explicit FileEmbeddingProvider(const std::filesystem::path& path);

    int dimension() const override { return dimension_; }
    Vector embed(const std::string& key, const std::string& text) override;
    std::size_t size() const { return vectors_.size(); }

private:
    std::unordered_map<std::string, Vector> vectors_;
    int dimension_ = 0;
};

struct HttpEmbeddingConfig {
    std::string endpoint;  // base URL, e.g. "http://127.0.0.1:8080"
    std::string api_key_env;
    std::optional<std::filesystem::path> cache_dir;
    int dimension = 0;  // 0 = infer from the first response
    int timeout_ms = 30000;
    int retries = 3;
};

// POST /embed {"input": [text]} -> {"data": [{"embedding": [...]}]}.
// Responses are cached to cache_dir under the content hash of the text, so a
// repeated text never hits the service twice.
class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HttpEmbeddingProvider(HttpEmbeddingConfig config);

    int dimension() const override { return dimension_; }
    Vector embed(const std::string& key, const std::string& text) override;

private:
    Vector fetch(const std::string& text);
    void check_dimension(const Vector& v);

    HttpEmbeddingConfig config_;
    int dimension_ = 0;
};

// All vectors a run needs, keyed by example id.
struct EmbeddingTable {
    std::unordered_map<std::string, Vector> vectors;
    int dim = 0;

    const Vector& at(const std::string& id) const;
};

// Embeds every example's retrieval text under its id.
void add_embeddings(EmbeddingTable& table, EmbeddingProvider& provider,
                    const std::vector<Example>& examples);

struct FixtureSpec {
    int n_topics = 4;
    int n_examples = 1000;  // candidate pool size
    int n_queries = 200;    // each of validation and test
    int dim = 16;
    std::uint64_t seed = 0;
};

struct FixturePaths {
    std::filesystem::path pool;
    std::filesystem::path validation;
    std::filesystem::path test;
    std::filesystem::path embeddings;
};

// Synthetic topic-clustered corpus for desk-scale runs. Pool examples carry
// meta.topic and meta.role (helpful/misleading/neutral, round-robin per
// topic); queries carry meta.topic and meta.difficulty (easy/hard). Vectors
// are normalize(one_hot(topic) + 0.3 * role_offset + 0.05 * noise), with role
// offsets a fixed function of (role, dim) so fixtures from different seeds
// share the same geometry.
FixturePaths emit_fixtures(const FixtureSpec& spec, const std::filesystem::path& out_dir);

}  // namespace urank
