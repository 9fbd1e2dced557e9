#include "urank/trainer.hpp"

#include "urank/errors.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

namespace urank {

namespace {

using json = nlohmann::json;

std::vector<Candidate> gather_candidates(const Preselection& pre, const EmbeddingTable& table) {
    std::vector<Candidate> candidates;
    candidates.reserve(pre.candidate_ids.size());
    for (const auto& id : pre.candidate_ids) candidates.push_back({id, table.at(id)});
    return candidates;
}

std::vector<Example> resolve_examples(const std::vector<std::string>& ids,
                                      const std::unordered_map<std::string, const Example*>& by_id) {
    std::vector<Example> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw ValidationError("trainer: retrieved id '" + id + "' is not in the pool");
        out.push_back(*it->second);
    }
    return out;
}

}  // namespace

int reward(std::string_view prediction, const Example& gold, PromptFormat format) {
    return match_answer(prediction, gold, format) ? 1 : -1;
}

TrainerDeps::TrainerDeps(const std::vector<Example>& pool_in, const Bm25Index& index_in,
                         const EmbeddingTable& embeddings_in, LlmBackend& backend_in)
    : pool(pool_in), index(index_in), embeddings(embeddings_in), backend(backend_in) {
    pool_by_id.reserve(pool.size());
    for (const auto& e : pool) pool_by_id.emplace(e.id, &e);
}

TrainerState::TrainerState(ScorerParams initial) : params(std::move(initial)) {
    grad_w_acc = Matrix::Zero(params.W.rows(), params.W.cols());
    grad_b_acc = Vector::Zero(params.b.size());
}

void TrainerState::reset_batch_accumulators() {
    grad_w_acc.setZero();
    grad_b_acc.setZero();
    loss_acc = 0.0;
    loss_terms = 0;
    shots_queried_this_batch = 0;
}

ShotTrace process_sample(TrainerState& state, const Example& sample, const TrainerDeps& deps,
                         const TrainConfig& config) {
    ShotTrace trace;
    trace.query_id = sample.id;

    const Preselection pre = preselect(deps.index, sample, config.n_preselect);
    if (pre.candidate_ids.empty())
        throw ValidationError("trainer: preselection for '" + sample.id + "' is empty");
    const std::vector<Candidate> candidates = gather_candidates(pre, deps.embeddings);
    const Vector& query_embedding = deps.embeddings.at(sample.id);
    const RankedCandidates ranked = rank(state.params, query_embedding, candidates, sample.id);

    // The threshold as of sample start decides this sample's budget; updates
    // made below only affect later samples.
    const std::size_t k_i = config.fixed_shots
                                ? std::min(config.shot_budget, ranked.size())
                                : max_shots(ranked, state.sigma, config.shot_budget);
    trace.k_i = k_i;
    trace.retrieved_ids = top_k(ranked, k_i);
    const std::vector<Example> retrieved = resolve_examples(trace.retrieved_ids, deps.pool_by_id);

    if (config.fixed_shots) {
        // Single K-shot inference; the whole retrieved set shares the reward.
        std::string prediction;
        try {
            prediction = deps.backend.complete(build_prompt(retrieved, sample, config.format),
                                               sample, retrieved);
        } catch (const Error& ex) {
            trace.failed = true;
            trace.error = ex.what();
            return trace;
        }
        const int r = reward(prediction, sample, config.format);
        trace.rewards.push_back(r);
        if (k_i > 0) {
            double loss = 0.0;
            for (std::size_t pos = 0; pos < k_i; ++pos) {
                LossGrad lg = loss_and_grad(state.params, query_embedding, candidates,
                                            ranked.source_indices[pos], r, sample.id);
                loss += lg.loss;
                state.grad_w_acc += lg.grad_w;
                state.grad_b_acc += lg.grad_b;
            }
            state.loss_acc += loss;
            state.loss_terms += 1;
        }
        trace.shot_cost = k_i;
        state.shots_queried_this_batch += k_i;
        return trace;
    }

    int previous_reward = 0;
    for (std::size_t j = 0; j <= k_i; ++j) {
        const std::vector<Example> shots(retrieved.begin(),
                                         retrieved.begin() + static_cast<std::ptrdiff_t>(j));
        std::string prediction;
        try {
            prediction = deps.backend.complete(build_prompt(shots, sample, config.format),
                                               sample, shots);
        } catch (const Error& ex) {
            trace.failed = true;
            trace.error = ex.what();
            return trace;
        }
        const int r = reward(prediction, sample, config.format);
        trace.rewards.push_back(r);
        trace.shot_cost += j;
        state.shots_queried_this_batch += j;

        if (j >= 1) {
            // The marginal sample at shot j is the candidate at ranked
            // position j; no loss term exists for the 0-shot round.
            LossGrad lg = loss_and_grad(state.params, query_embedding, candidates,
                                        ranked.source_indices[j - 1], r, sample.id);
            state.loss_acc += lg.loss;
            state.grad_w_acc += lg.grad_w;
            state.grad_b_acc += lg.grad_b;
            state.loss_terms += 1;

            if (previous_reward == 1 && r == -1) {
                // True->false flip: the threshold becomes the top ranking
                // score among the budgeted-but-unkept positions j..k_i.
                double new_sigma = 0.0;
                for (std::size_t pos = j; pos <= k_i; ++pos)
                    new_sigma = std::max(new_sigma, ranked.scores[pos - 1]);
                state.sigma = new_sigma;
                trace.sigma_updates.push_back({j, new_sigma});
            }
        }
        previous_reward = r;
    }
    return trace;
}

BatchStats run_batch(TrainerState& state, const std::vector<Example>& batch,
                     const TrainerDeps& deps, const TrainConfig& config,
                     std::vector<ShotTrace>& traces) {
    if (batch.empty()) throw ValidationError("trainer: empty batch");
    for (const auto& sample : batch) traces.push_back(process_sample(state, sample, deps, config));

    BatchStats stats;
    stats.shots = state.shots_queried_this_batch;
    if (state.loss_terms > 0) {
        state.params = apply_update(state.params, state.grad_w_acc, state.grad_b_acc,
                                    state.loss_terms, config.learning_rate);
        stats.loss = state.loss_acc / static_cast<double>(state.loss_terms);
    }
    stats.sigma_after = state.sigma;
    state.per_batch_shot_history.push_back(state.shots_queried_this_batch);
    state.reset_batch_accumulators();
    return stats;
}

std::pair<ScorerParams, TrainingReport> train(const std::vector<Example>& validation,
                                              const TrainerDeps& deps,
                                              const TrainConfig& config) {
    if (validation.empty()) throw ValidationError("trainer: validation set is empty");
    if (config.batch_size < 1) throw ValidationError("trainer: batch size must be at least 1");
    if (deps.embeddings.dim == 0)
        throw ValidationError("trainer: embedding table is empty");
    for (const auto& e : deps.pool) deps.embeddings.at(e.id);
    for (const auto& e : validation) deps.embeddings.at(e.id);

    TrainerState state(init_params(config.projection_dim, deps.embeddings.dim, config.init_seed));
    TrainingReport report;
    report.batch_size = config.batch_size;
    report.shot_budget = config.shot_budget;
    report.fixed_shots = config.fixed_shots;

    std::mt19937_64 rng(config.shuffle_seed);
    std::vector<std::size_t> order(validation.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        state.epoch = epoch;
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            std::vector<Example> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) batch.push_back(validation[order[i]]);
            report.per_batch.push_back(run_batch(state, batch, deps, config, report.traces));
        }
    }

    report.final_sigma = state.sigma;
    for (const auto& stats : report.per_batch) report.total_shots += stats.shots;
    for (const auto& trace : report.traces)
        if (trace.failed) ++report.failed_samples;
    return {std::move(state.params), std::move(report)};
}

void write_shot_traces(const std::filesystem::path& path, const std::vector<ShotTrace>& traces) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("trainer: cannot write traces file " + path.string());
    for (const auto& trace : traces) {
        json j;
        j["query_id"] = trace.query_id;
        j["k_i"] = trace.k_i;
        j["rewards"] = trace.rewards;
        j["retrieved_ids"] = trace.retrieved_ids;
        json updates = json::array();
        for (const auto& u : trace.sigma_updates)
            updates.push_back({{"shot", u.shot}, {"sigma", u.value}});
        j["sigma_updates"] = std::move(updates);
        j["shot_cost"] = trace.shot_cost;
        if (trace.failed) {
            j["failed"] = true;
            j["error"] = trace.error;
        }
        out << j.dump() << '\n';
    }
}

void write_training_report(const std::filesystem::path& path, const TrainingReport& report,
                           const std::string& traces_path, const nlohmann::json& config_json) {
    json j;
    j["config"] = config_json;
    j["batch_size"] = report.batch_size;
    j["shot_budget"] = report.shot_budget;
    j["fixed_shots"] = report.fixed_shots;
    json batches = json::array();
    for (const auto& stats : report.per_batch)
        batches.push_back({{"loss", stats.loss},
                           {"shots", stats.shots},
                           {"sigma_after", stats.sigma_after}});
    j["per_batch"] = std::move(batches);
    j["final_sigma"] = report.final_sigma;
    j["failed_samples"] = report.failed_samples;
    j["total_shots"] = report.total_shots;
    j["traces_path"] = traces_path;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("trainer: cannot write report file " + path.string());
    out << j.dump(2) << '\n';
}

TrainingReport load_training_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("trainer: cannot open report file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ParseError("trainer: malformed report file " + path.string() + ": " + ex.what());
    }
    TrainingReport report;
    report.batch_size = j.value("batch_size", std::size_t{0});
    report.shot_budget = j.value("shot_budget", std::size_t{0});
    report.fixed_shots = j.value("fixed_shots", false);
    report.final_sigma = j.value("final_sigma", 0.0);
    report.failed_samples = j.value("failed_samples", std::size_t{0});
    report.total_shots = j.value("total_shots", std::size_t{0});
    for (const auto& b : j.at("per_batch")) {
        BatchStats stats;
        stats.loss = b.at("loss").get<double>();
        stats.shots = b.at("shots").get<std::size_t>();
        stats.sigma_after = b.at("sigma_after").get<double>();
        report.per_batch.push_back(stats);
    }
    return report;
}

}  // namespace urank
