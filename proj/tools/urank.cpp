// urank: reinforcement-trained example reranking for retrieval-augmented
// in-context learning. Subcommands cover the full experiment pipeline:
// fixtures -> split/index -> train -> eval/cost/transfer.

#include "urank/bm25.hpp"
#include "urank/config.hpp"
#include "urank/corpus.hpp"
#include "urank/embedding.hpp"
#include "urank/errors.hpp"
#include "urank/evaluation.hpp"
#include "urank/llm.hpp"
#include "urank/scorer.hpp"
#include "urank/trainer.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using namespace urank;

std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& cfg) {
    if (cfg.provider_kind == "file")
        return std::make_unique<FileEmbeddingProvider>(cfg.resolved_provider_path());
    HttpEmbeddingConfig http;
    http.endpoint = cfg.provider_endpoint;
    http.api_key_env = cfg.provider_api_key_env;
    http.cache_dir = cfg.resolved_cache_dir();
    http.dimension = cfg.provider_dimension;
    http.timeout_ms = cfg.provider_timeout_ms;
    http.retries = cfg.provider_retries;
    return std::make_unique<HttpEmbeddingProvider>(std::move(http));
}

std::unique_ptr<LlmBackend> make_backend(const RunConfig& cfg) {
    if (cfg.backend_kind == "oracle") {
        OracleRule rule;
        rule.easy_slack = cfg.oracle_easy_slack;
        rule.hard_min_helpful = cfg.oracle_hard_min_helpful;
        return std::make_unique<SyntheticOracleBackend>(rule);
    }
    if (cfg.backend_kind == "replay")
        return std::make_unique<ReplayBackend>(cfg.resolved_transcript_path(),
                                               cfg.backend_model);
    HttpBackendConfig http;
    http.endpoint = cfg.backend_endpoint;
    http.model = cfg.backend_model;
    http.api_key_env = cfg.backend_api_key_env;
    http.transcript_path = cfg.resolved_transcript_path();
    http.timeout_ms = cfg.backend_timeout_ms;
    http.retries = cfg.backend_retries;
    return std::make_unique<HttpChatBackend>(std::move(http));
}

EmbeddingTable build_table(EmbeddingProvider& provider,
                           const std::vector<const std::vector<Example>*>& sets) {
    EmbeddingTable table;
    for (const auto* set : sets) add_embeddings(table, provider, *set);
    return table;
}

// Loads the candidate pool and validation set: either directly from
// configured paths, or by splitting the training file when one is given.
std::pair<std::vector<Example>, std::vector<Example>> load_pool_and_validation(
    const RunConfig& cfg) {
    if (!cfg.train_path.empty()) {
        const auto training = load_dataset(cfg.train_path, cfg.format);
        auto splits =
            split_training(training, cfg.n_candidate, cfg.n_validation, cfg.split_seed());
        return {std::move(splits.candidate_pool), std::move(splits.validation)};
    }
    return {load_dataset(cfg.resolved_pool_path(), cfg.format),
            load_dataset(cfg.resolved_validation_path(), cfg.format)};
}

std::vector<Example> load_pool(const RunConfig& cfg) {
    if (!cfg.train_path.empty())
        return std::move(load_pool_and_validation(cfg).first);
    return load_dataset(cfg.resolved_pool_path(), cfg.format);
}

TrainConfig make_train_config(const RunConfig& cfg) {
    TrainConfig train;
    train.shot_budget = cfg.shot_budget;
    train.n_preselect = cfg.n_preselect;
    train.batch_size = cfg.batch_size;
    train.epochs = cfg.epochs;
    train.learning_rate = cfg.learning_rate;
    train.projection_dim = cfg.projection_dim;
    train.format = cfg.format;
    train.init_seed = cfg.init_seed();
    train.shuffle_seed = cfg.shuffle_seed();
    train.fixed_shots = cfg.train_mode == "fixed-k";
    return train;
}

int cmd_fixtures(const RunConfig& cfg, const json& resolved) {
    FixtureSpec spec;
    spec.n_topics = cfg.fixtures_n_topics;
    spec.n_examples = cfg.fixtures_n_examples;
    spec.n_queries = cfg.fixtures_n_queries;
    spec.dim = cfg.fixtures_dim;
    spec.seed = cfg.fixtures_seed();
    const FixturePaths paths = emit_fixtures(spec, cfg.out_dir / "fixtures");
    json meta;
    meta["config"] = resolved;
    meta["seed"] = cfg.seed;
    meta["paths"] = {{"pool", paths.pool.string()},
                     {"validation", paths.validation.string()},
                     {"test", paths.test.string()},
                     {"embeddings", paths.embeddings.string()}};
    std::ofstream out(cfg.out_dir / "fixtures" / "fixtures_meta.json");
    out << meta.dump(2) << '\n';
    std::cout << "fixtures written to " << (cfg.out_dir / "fixtures").string() << "\n";
    return 0;
}

int cmd_split(const RunConfig& cfg, const json& resolved) {
    if (cfg.train_path.empty())
        throw ValidationError("cli: split needs dataset.train_path");
    const auto training = load_dataset(cfg.train_path, cfg.format);
    const auto splits =
        split_training(training, cfg.n_candidate, cfg.n_validation, cfg.split_seed());
    std::filesystem::create_directories(cfg.out_dir);
    save_dataset(cfg.out_dir / "candidate_pool.jsonl", splits.candidate_pool);
    save_dataset(cfg.out_dir / "validation.jsonl", splits.validation);
    write_split_report(cfg.out_dir / "split_report.json", splits);
    json meta;
    meta["config"] = resolved;
    meta["discarded"] = splits.discarded.size();
    std::ofstream out(cfg.out_dir / "split_meta.json");
    out << meta.dump(2) << '\n';
    std::cout << "split: " << splits.candidate_pool.size() << " candidates, "
              << splits.validation.size() << " validation, " << splits.discarded.size()
              << " discarded\n";
    return 0;
}

int cmd_index(const RunConfig& cfg, const json& resolved) {
    const auto pool = load_pool(cfg);
    const auto index = build_index(pool, {cfg.bm25_k1, cfg.bm25_b});
    std::filesystem::create_directories(cfg.out_dir);
    save_index(cfg.out_dir / "bm25_index.json", index);
    json meta;
    meta["config"] = resolved;
    meta["documents"] = index.size();
    meta["terms"] = index.term_stats.size();
    std::ofstream out(cfg.out_dir / "index_meta.json");
    out << meta.dump(2) << '\n';
    std::cout << "indexed " << index.size() << " documents, " << index.term_stats.size()
              << " terms\n";
    return 0;
}

int cmd_train(const RunConfig& cfg, const json& resolved) {
    auto [pool, validation] = load_pool_and_validation(cfg);
    const auto index = build_index(pool, {cfg.bm25_k1, cfg.bm25_b});
    auto provider = make_provider(cfg);
    const auto table = build_table(*provider, {&pool, &validation});
    auto backend = make_backend(cfg);
    const TrainerDeps deps(pool, index, table, *backend);

    auto [params, report] = train(validation, deps, make_train_config(cfg));

    std::filesystem::create_directories(cfg.out_dir);
    save_params(cfg.out_dir / "params.json", params);
    write_shot_traces(cfg.out_dir / "traces.jsonl", report.traces);
    write_training_report(cfg.out_dir / "training_report.json", report, "traces.jsonl",
                          resolved);
    std::cout << "trained on " << validation.size() << " samples over "
              << report.per_batch.size() << " batches; total shots " << report.total_shots
              << "; final sigma " << report.final_sigma << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const json& resolved) {
    const auto pool = load_pool(cfg);
    const auto test = load_dataset(cfg.resolved_test_path(), cfg.format);
    const auto index = build_index(pool, {cfg.bm25_k1, cfg.bm25_b});
    auto provider = make_provider(cfg);
    const auto table = build_table(*provider, {&pool, &test});
    auto backend = make_backend(cfg);

    EvalDeps deps(pool, index, table, *backend);
    deps.format = cfg.format;
    deps.n_preselect = cfg.n_preselect;
    deps.sampling_seed = cfg.sampling_seed();

    const RetrievalMode mode = parse_retrieval_mode(cfg.eval_mode);
    ScorerParams params;
    if (mode == RetrievalMode::TrainedRanker) {
        params = load_params(cfg.out_dir / "params.json");
        deps.params = &params;
    }
    const EvalResult result = evaluate(test, mode, cfg.k_eval, deps);

    std::filesystem::create_directories(cfg.out_dir);
    write_eval_json(cfg.out_dir / "eval.json", result, resolved);
    write_eval_csv(cfg.out_dir / "eval.csv", result);
    std::cout << "eval mode=" << retrieval_mode_name(mode) << " k=" << cfg.k_eval
              << ": overall " << result.accuracy_overall << ", easy " << result.accuracy_easy
              << ", hard " << result.accuracy_hard << ", flip rate " << result.flip_rate
              << "\n";
    return 0;
}

int cmd_cost(const RunConfig& cfg, const json& resolved) {
    const auto report = load_training_report(cfg.out_dir / "training_report.json");
    const auto rows = cost_report(report);
    write_cost_csv(cfg.out_dir / "cost.csv", rows);
    json meta;
    meta["config"] = resolved;
    json table = json::array();
    for (const auto& row : rows)
        table.push_back({{"batch", row.batch},
                         {"shots", row.shots},
                         {"ratio_vs_fixed_k", row.ratio_vs_fixed_k}});
    meta["rows"] = std::move(table);
    std::ofstream out(cfg.out_dir / "cost.json");
    out << meta.dump(2) << '\n';
    std::cout << "cost report for " << rows.size() << " batches written\n";
    return 0;
}

int cmd_transfer(const RunConfig& cfg, const json& resolved) {
    if (cfg.transfer_params_path.empty())
        throw ValidationError("cli: transfer needs transfer.params_path");
    const auto pool = load_pool(cfg);
    const auto test = load_dataset(cfg.resolved_test_path(), cfg.format);
    const auto index = build_index(pool, {cfg.bm25_k1, cfg.bm25_b});
    auto provider = make_provider(cfg);
    const auto table = build_table(*provider, {&pool, &test});
    auto backend = make_backend(cfg);

    EvalDeps deps(pool, index, table, *backend);
    deps.format = cfg.format;
    deps.n_preselect = cfg.n_preselect;
    deps.sampling_seed = cfg.sampling_seed();

    const EvalResult result = transfer_eval(cfg.transfer_params_path, test, deps, cfg.k_eval);
    std::filesystem::create_directories(cfg.out_dir);
    write_eval_json(cfg.out_dir / "transfer_eval.json", result, resolved);
    write_eval_csv(cfg.out_dir / "transfer_eval.csv", result);
    std::cout << "transfer eval: overall " << result.accuracy_overall << ", hard "
              << result.accuracy_hard << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic uncertainty ranking for retrieval-augmented in-context learning"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string backend_kind, eval_mode, out_dir;
    std::int64_t k_flag = -1;
    std::int64_t seed_flag = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--set", overrides, "Override config keys: key.path=value")->take_all();
    app.add_option("--backend", backend_kind, "Backend kind: http, replay or oracle");
    app.add_option("--mode", eval_mode, "Eval retrieval mode: zero-shot, random, bm25, ranker");
    app.add_option("--k", k_flag, "Eval shot count");
    app.add_option("--seed", seed_flag, "Root seed");
    app.add_option("--out", out_dir, "Output directory");

    for (const char* name :
         {"fixtures", "split", "index", "train", "eval", "cost", "transfer"})
        app.add_subcommand(name)->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        json merged = default_config_json();
        if (!config_path.empty())
            merged = merge_config(std::move(merged), load_config_file(config_path));
        for (const auto& assignment : overrides) apply_override(merged, assignment);
        if (!backend_kind.empty()) apply_override(merged, "backend.kind=" + backend_kind);
        if (!eval_mode.empty()) apply_override(merged, "eval.mode=" + eval_mode);
        if (k_flag >= 0) apply_override(merged, "eval.k=" + std::to_string(k_flag));
        if (seed_flag >= 0) apply_override(merged, "seed=" + std::to_string(seed_flag));
        if (!out_dir.empty()) apply_override(merged, "out_dir=" + out_dir);

        const RunConfig cfg = parse_config(merged);
        std::filesystem::create_directories(cfg.out_dir);

        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "fixtures") return cmd_fixtures(cfg, merged);
        if (command == "split") return cmd_split(cfg, merged);
        if (command == "index") return cmd_index(cfg, merged);
        if (command == "train") return cmd_train(cfg, merged);
        if (command == "eval") return cmd_eval(cfg, merged);
        if (command == "cost") return cmd_cost(cfg, merged);
        if (command == "transfer") return cmd_transfer(cfg, merged);
        throw ValidationError("cli: unknown command " + command);
    } catch (const std::exception& ex) {
        json err;
        err["error"] = ex.what();
        std::cerr << err.dump() << std::endl;
        return 1;
    }
}
