#include "urank/config.hpp"

#include "urank/errors.hpp"

#include <fstream>
#include <vector>

namespace urank {

namespace {

using json = nlohmann::json;

void collect_unknown_keys(const json& schema, const json& candidate, const std::string& prefix,
                          std::vector<std::string>& offending) {
    for (const auto& [key, value] : candidate.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!schema.contains(key)) {
            offending.push_back(path);
            continue;
        }
        const json& expected = schema.at(key);
        if (expected.is_object()) {
            if (!value.is_object()) {
                offending.push_back(path);
            } else {
                collect_unknown_keys(expected, value, path, offending);
            }
        } else if (expected.is_string() != value.is_string() ||
                   expected.is_boolean() != value.is_boolean() ||
                   (expected.is_number() && !value.is_number())) {
            offending.push_back(path);
        }
    }
}

void deep_merge(json& base, const json& overrides) {
    for (const auto& [key, value] : overrides.items()) {
        if (value.is_object() && base.contains(key) && base.at(key).is_object()) {
            deep_merge(base.at(key), value);
        } else {
            base[key] = value;
        }
    }
}

}  // namespace

json default_config_json() {
    return json{
        {"seed", 0},
        {"out_dir", "out"},
        {"dataset",
         {{"train_path", ""},
          {"pool_path", ""},
          {"validation_path", ""},
          {"test_path", ""},
          {"format", "qa"}}},
        {"split", {{"n_candidate", 1000}, {"n_validation", 200}}},
        {"retrieval", {{"n_preselect", 20}, {"k1", 1.2}, {"b", 0.75}}},
        {"scorer", {{"projection_dim", 128}}},
        {"train",
         {{"shot_budget", 5},
          {"batch_size", 20},
          {"epochs", 1},
          {"learning_rate", 1e-3},
          {"mode", "dynamic"}}},
        {"eval", {{"k", 5}, {"mode", "ranker"}}},
        {"backend",
         {{"kind", "oracle"},
          {"model", "gpt-4"},
          {"endpoint", ""},
          {"api_key_env", "OPENAI_API_KEY"},
          {"transcript_path", ""},
          {"timeout_ms", 30000},
          {"retries", 3},
          {"oracle", {{"easy_slack", 1}, {"hard_min_helpful", 1}}}}},
        {"provider",
         {{"kind", "file"},
          {"path", ""},
          {"endpoint", ""},
          {"api_key_env", ""},
          {"cache_dir", ""},
          {"dimension", 0},
          {"timeout_ms", 30000},
          {"retries", 3}}},
        {"fixtures",
         {{"n_topics", 4}, {"n_examples", 1000}, {"n_queries", 200}, {"dim", 16}}},
        {"transfer", {{"params_path", ""}}}};
}

json merge_config(json base, const json& overrides) {
    if (!overrides.is_object())
        throw ValidationError("config: configuration must be a JSON object");
    std::vector<std::string> offending;
    collect_unknown_keys(base, overrides, "", offending);
    if (!offending.empty()) {
        std::string message = "config: unknown or mistyped keys:";
        for (const auto& key : offending) message += " " + key;
        throw ValidationError(message);
    }
    deep_merge(base, overrides);
    return base;
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("config: override must look like key.path=value, got '" +
                              assignment + "'");
    std::string key = assignment.substr(0, eq);
    const std::string raw_value = assignment.substr(eq + 1);
    for (auto& c : key)
        if (c == '.') c = '/';
    json value;
    try {
        value = json::parse(raw_value);
    } catch (const json::exception&) {
        value = raw_value;  // plain string
    }
    json patch;
    patch[json::json_pointer("/" + key)] = value;
    config = merge_config(config, patch);
}

RunConfig parse_config(const json& merged) {
    std::vector<std::string> offending;
    auto check = [&](bool ok, const char* key) {
        if (!ok) offending.push_back(key);
    };

    RunConfig cfg;
    cfg.seed = merged.at("seed").get<std::uint64_t>();
    cfg.out_dir = merged.at("out_dir").get<std::string>();

    const auto& dataset = merged.at("dataset");
    cfg.train_path = dataset.at("train_path").get<std::string>();
    cfg.pool_path = dataset.at("pool_path").get<std::string>();
    cfg.validation_path = dataset.at("validation_path").get<std::string>();
    cfg.test_path = dataset.at("test_path").get<std::string>();
    cfg.format = parse_prompt_format(dataset.at("format").get<std::string>());

    cfg.n_candidate = merged.at("split").at("n_candidate").get<std::size_t>();
    cfg.n_validation = merged.at("split").at("n_validation").get<std::size_t>();
    check(cfg.n_candidate >= 1, "split.n_candidate");
    check(cfg.n_validation >= 1, "split.n_validation");

    cfg.n_preselect = merged.at("retrieval").at("n_preselect").get<std::size_t>();
    cfg.bm25_k1 = merged.at("retrieval").at("k1").get<double>();
    cfg.bm25_b = merged.at("retrieval").at("b").get<double>();
    check(cfg.n_preselect >= 1, "retrieval.n_preselect");
    check(cfg.bm25_k1 > 0.0, "retrieval.k1");
    check(cfg.bm25_b >= 0.0 && cfg.bm25_b <= 1.0, "retrieval.b");

    cfg.projection_dim = merged.at("scorer").at("projection_dim").get<Eigen::Index>();
    check(cfg.projection_dim >= 1, "scorer.projection_dim");

    const auto& train = merged.at("train");
    cfg.shot_budget = train.at("shot_budget").get<std::size_t>();
    cfg.batch_size = train.at("batch_size").get<std::size_t>();
    cfg.epochs = train.at("epochs").get<std::size_t>();
    cfg.learning_rate = train.at("learning_rate").get<double>();
    cfg.train_mode = train.at("mode").get<std::string>();
    check(cfg.shot_budget >= 1, "train.shot_budget");
    check(cfg.shot_budget <= cfg.n_preselect, "train.shot_budget<=retrieval.n_preselect");
    check(cfg.batch_size >= 1, "train.batch_size");
    check(cfg.epochs >= 1, "train.epochs");
    check(cfg.learning_rate > 0.0, "train.learning_rate");
    check(cfg.train_mode == "dynamic" || cfg.train_mode == "fixed-k", "train.mode");

    cfg.k_eval = merged.at("eval").at("k").get<std::size_t>();
    cfg.eval_mode = merged.at("eval").at("mode").get<std::string>();
    check(cfg.k_eval <= cfg.n_preselect, "eval.k<=retrieval.n_preselect");

    const auto& backend = merged.at("backend");
    cfg.backend_kind = backend.at("kind").get<std::string>();
    cfg.backend_model = backend.at("model").get<std::string>();
    cfg.backend_endpoint = backend.at("endpoint").get<std::string>();
    cfg.backend_api_key_env = backend.at("api_key_env").get<std::string>();
    cfg.transcript_path = backend.at("transcript_path").get<std::string>();
    cfg.backend_timeout_ms = backend.at("timeout_ms").get<int>();
    cfg.backend_retries = backend.at("retries").get<int>();
    cfg.oracle_easy_slack = backend.at("oracle").at("easy_slack").get<int>();
    cfg.oracle_hard_min_helpful = backend.at("oracle").at("hard_min_helpful").get<int>();
    check(cfg.backend_kind == "oracle" || cfg.backend_kind == "http" ||
              cfg.backend_kind == "replay",
          "backend.kind");
    check(cfg.backend_retries >= 0, "backend.retries");
    check(cfg.oracle_easy_slack >= 0, "backend.oracle.easy_slack");
    check(cfg.oracle_hard_min_helpful >= 1, "backend.oracle.hard_min_helpful");

    const auto& provider = merged.at("provider");
    cfg.provider_kind = provider.at("kind").get<std::string>();
    cfg.provider_path = provider.at("path").get<std::string>();
    cfg.provider_endpoint = provider.at("endpoint").get<std::string>();
    cfg.provider_api_key_env = provider.at("api_key_env").get<std::string>();
    cfg.provider_cache_dir = provider.at("cache_dir").get<std::string>();
    cfg.provider_dimension = provider.at("dimension").get<int>();
    cfg.provider_timeout_ms = provider.at("timeout_ms").get<int>();
    cfg.provider_retries = provider.at("retries").get<int>();
    check(cfg.provider_kind == "file" || cfg.provider_kind == "http", "provider.kind");

    const auto& fixtures = merged.at("fixtures");
    cfg.fixtures_n_topics = fixtures.at("n_topics").get<int>();
    cfg.fixtures_n_examples = fixtures.at("n_examples").get<int>();
    cfg.fixtures_n_queries = fixtures.at("n_queries").get<int>();
    cfg.fixtures_dim = fixtures.at("dim").get<int>();
    check(cfg.fixtures_n_topics >= 1, "fixtures.n_topics");
    check(cfg.fixtures_n_examples >= 1, "fixtures.n_examples");
    check(cfg.fixtures_n_queries >= 1, "fixtures.n_queries");
    check(cfg.fixtures_dim >= cfg.fixtures_n_topics, "fixtures.dim>=fixtures.n_topics");

    cfg.transfer_params_path = merged.at("transfer").at("params_path").get<std::string>();

    if (!offending.empty()) {
        std::string message = "config: invalid values for keys:";
        for (const auto& key : offending) message += " " + key;
        throw ValidationError(message);
    }
    return cfg;
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ParseError("config: malformed config file " + path.string() + ": " + ex.what());
    }
    return j;
}

std::uint64_t RunConfig::split_seed() const { return derive_seed(seed, "split"); }
std::uint64_t RunConfig::shuffle_seed() const { return derive_seed(seed, "shuffle"); }
std::uint64_t RunConfig::init_seed() const { return derive_seed(seed, "init"); }
std::uint64_t RunConfig::sampling_seed() const { return derive_seed(seed, "sampling"); }
std::uint64_t RunConfig::fixtures_seed() const { return derive_seed(seed, "fixtures"); }

std::filesystem::path RunConfig::resolved_pool_path() const {
    return pool_path.empty() ? out_dir / "fixtures" / "pool.jsonl"
                             : std::filesystem::path(pool_path);
}
std::filesystem::path RunConfig::resolved_validation_path() const {
    return validation_path.empty() ? out_dir / "fixtures" / "validation.jsonl"
                                   : std::filesystem::path(validation_path);
}
std::filesystem::path RunConfig::resolved_test_path() const {
    return test_path.empty() ? out_dir / "fixtures" / "test.jsonl"
                             : std::filesystem::path(test_path);
}
std::filesystem::path RunConfig::resolved_provider_path() const {
    return provider_path.empty() ? out_dir / "fixtures" / "embeddings.jsonl"
                                 : std::filesystem::path(provider_path);
}
std::filesystem::path RunConfig::resolved_transcript_path() const {
    return transcript_path.empty() ? out_dir / "transcript.jsonl"
                                   : std::filesystem::path(transcript_path);
}
std::filesystem::path RunConfig::resolved_cache_dir() const {
    return provider_cache_dir.empty() ? out_dir / "embed_cache"
                                      : std::filesystem::path(provider_cache_dir);
}

}  // namespace urank
