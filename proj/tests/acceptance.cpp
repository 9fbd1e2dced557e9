// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line. Exits non-zero if any criterion fails.

#include "urank/bm25.hpp"
#include "urank/config.hpp"
#include "urank/corpus.hpp"
#include "urank/embedding.hpp"
#include "urank/errors.hpp"
#include "urank/evaluation.hpp"
#include "urank/llm.hpp"
#include "urank/scorer.hpp"
#include "urank/trainer.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <thread>

using namespace urank;
using json = nlohmann::json;

namespace {

struct Criterion {
    int number;
    std::string summary;
    double max_seconds;  // 0 = no budget
    std::function<std::string()> run;  // returns a short detail string
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define EXPECT(cond, message)                                     \
    do {                                                          \
        if (!(cond)) throw Failure(std::string("expect failed: ") + message); \
    } while (0)

std::string format_seconds(double s) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2fs", s);
    return buffer;
}

// ---------------------------------------------------------------------------
// Criterion 1: analytic gradients vs central finite differences.

void criterion_gradients() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim_dist(1, 8);
    std::uniform_int_distribution<int> n_dist(1, 6);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index m = dim_dist(rng);
        const Eigen::Index d = dim_dist(rng);
        auto params = init_params(m, d, 9000 + trial);
        std::vector<Candidate> candidates;
        const int n = n_dist(rng);
        for (int i = 0; i < n; ++i) {
            Vector v(d);
            for (Eigen::Index j = 0; j < d; ++j) v[j] = gauss(rng);
            candidates.push_back({"c" + std::to_string(i), std::move(v)});
        }
        Vector q(d);
        for (Eigen::Index j = 0; j < d; ++j) q[j] = gauss(rng);
        const std::size_t chosen = rng() % candidates.size();
        const int reward = (rng() % 2 == 0) ? 1 : -1;

        auto lg = loss_and_grad(params, q, candidates, chosen, reward, "acc");
        Matrix fd_w;
        Vector fd_b;
        oracles::finite_diff_grads(params, q, candidates, chosen, reward, 1e-5, fd_w, fd_b);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                const double denom = std::max(std::abs(fd_w(i, j)), 1e-8);
                EXPECT(std::abs(lg.grad_w(i, j) - fd_w(i, j)) / denom < 1e-4,
                       "grad_w relative error >= 1e-4");
            }
            const double denom = std::max(std::abs(fd_b[i]), 1e-8);
            EXPECT(std::abs(lg.grad_b[i] - fd_b[i]) / denom < 1e-4,
                   "grad_b relative error >= 1e-4");
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 2: softmax normalization, shift invariance, top-k prefixes.

void criterion_ranking_invariants() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim_dist(1, 6);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> shift_dist(-5.0, 5.0);

    for (int trial = 0; trial < 1000; ++trial) {
        const Eigen::Index m = dim_dist(rng);
        const Eigen::Index d = dim_dist(rng);
        auto params = init_params(m, d, 100 + trial);
        const int n = n_dist(rng);
        std::vector<Candidate> candidates;
        for (int i = 0; i < n; ++i) {
            Vector v(d);
            for (Eigen::Index j = 0; j < d; ++j) v[j] = gauss(rng);
            candidates.push_back({"c" + std::to_string(i), std::move(v)});
        }
        Vector q(d);
        for (Eigen::Index j = 0; j < d; ++j) q[j] = gauss(rng);

        auto ranked = rank(params, q, candidates, "acc");
        double sum = 0.0;
        for (double s : ranked.scores) sum += s;
        EXPECT(std::abs(sum - 1.0) <= 1e-9, "scores do not sum to 1 within 1e-9");

        // Shift every logit by a constant via an appended coordinate.
        const double shift = shift_dist(rng);
        ScorerParams lifted;
        lifted.W = Matrix::Zero(m + 1, d + 1);
        lifted.W.topLeftCorner(m, d) = params.W;
        lifted.W(m, d) = 1.0;
        lifted.b = Vector::Zero(m + 1);
        std::vector<Candidate> lifted_candidates;
        for (const auto& c : candidates) {
            Vector v(d + 1);
            v << c.embedding, 1.0;
            lifted_candidates.push_back({c.id, std::move(v)});
        }
        Vector lifted_q(d + 1);
        lifted_q << q, shift;
        auto shifted = rank(lifted, lifted_q, lifted_candidates, "acc");
        EXPECT(shifted.candidate_ids == ranked.candidate_ids,
               "argsort changed under a constant logit shift");

        // top_k prefix property at every k.
        for (std::size_t k = 0; k + 1 <= ranked.size(); ++k) {
            auto shorter = top_k(ranked, k);
            auto longer = top_k(ranked, k + 1);
            EXPECT(std::equal(shorter.begin(), shorter.end(), longer.begin()),
                   "top_k(k) is not a prefix of top_k(k+1)");
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 3: BM25 vs a naive rescoring oracle.

void criterion_bm25_oracle() {
    // The hand-computed four-document case first.
    auto doc = [](std::string id, std::string text) {
        Example e;
        e.id = std::move(id);
        e.question = std::move(text);
        e.answer = "x";
        return e;
    };
    {
        std::vector<Example> pool = {doc("d1", "apple banana"), doc("d2", "apple apple cherry"),
                                     doc("d3", "banana cherry"), doc("d4", "durian")};
        auto index = build_index(pool);
        auto pre = preselect(index, doc("q", "apple cherry"), 4);
        const double ln2 = std::log(2.0);
        const double s1 = ln2 / (1.0 + 1.2 * 1.0);
        const double s2 = ln2 * 2.0 / (2.0 + 1.2 * 1.375) + ln2 / (1.0 + 1.2 * 1.375);
        EXPECT((pre.candidate_ids == std::vector<std::string>{"d2", "d1", "d3", "d4"}),
               "hand-computed ranking mismatch");
        EXPECT(std::abs(pre.scores[0] - s2) <= 1e-9, "hand-computed d2 score mismatch");
        EXPECT(std::abs(pre.scores[1] - s1) <= 1e-9, "hand-computed d1 score mismatch");
    }

    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> n_docs_dist(2, 200);
    std::uniform_int_distribution<int> len_dist(1, 15);
    std::uniform_int_distribution<int> vocab(0, 40);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Example> pool;
        std::vector<std::vector<std::string>> tokens;
        const int n_docs = n_docs_dist(rng);
        for (int d = 0; d < n_docs; ++d) {
            std::string text;
            const int len = len_dist(rng);
            for (int t = 0; t < len; ++t) text += "w" + std::to_string(vocab(rng)) + " ";
            pool.push_back(doc("d" + std::to_string(d), text));
            tokens.push_back(tokenize(text));
        }
        auto index = build_index(pool);
        std::string query_text;
        for (int t = 0; t < 5; ++t) query_text += "w" + std::to_string(vocab(rng)) + " ";
        auto pre = preselect(index, doc("q", query_text), static_cast<std::size_t>(n_docs));
        auto expected =
            oracles::naive_bm25_scores(tokens, tokenize(query_text), 1.2, 0.75);
        for (std::size_t i = 0; i < pre.candidate_ids.size(); ++i) {
            const std::size_t d = std::stoul(pre.candidate_ids[i].substr(1));
            EXPECT(std::abs(pre.scores[i] - expected[d]) <= 1e-9,
                   "preselect score differs from the naive oracle");
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 4: cost arithmetic at sigma = 0.

class AlwaysGoldBackend : public LlmBackend {
public:
    std::string complete(const std::string&, const Example& query,
                         const std::vector<Example>&) override {
        return query.answer;
    }
    std::string model_name() const override { return "always-gold"; }
};

struct World {
    World(const FixtureSpec& spec, const std::filesystem::path& dir) {
        auto paths = emit_fixtures(spec, dir);
        pool = load_dataset(paths.pool, PromptFormat::QA);
        validation = load_dataset(paths.validation, PromptFormat::QA);
        test = load_dataset(paths.test, PromptFormat::QA);
        index = build_index(pool);
        FileEmbeddingProvider provider(paths.embeddings);
        add_embeddings(table, provider, pool);
        add_embeddings(table, provider, validation);
        add_embeddings(table, provider, test);
    }

    std::vector<Example> pool, validation, test;
    Bm25Index index;
    EmbeddingTable table;
};

void criterion_cost_arithmetic() {
    testutil::TempDir dir("acc_cost");
    FixtureSpec spec;
    spec.n_topics = 2;
    spec.n_examples = 80;
    spec.n_queries = 20;
    spec.dim = 8;
    spec.seed = 3;
    World world(spec, dir.path());
    AlwaysGoldBackend backend;
    TrainerDeps deps(world.pool, world.index, world.table, backend);

    TrainConfig config;
    config.shot_budget = 5;
    config.n_preselect = 20;
    config.batch_size = 20;
    config.projection_dim = 16;

    {
        TrainerState state(init_params(16, world.table.dim, 1));
        std::vector<ShotTrace> traces;
        auto stats = run_batch(state, world.validation, deps, config, traces);
        EXPECT(stats.shots == 300, "dynamic batch cost at sigma=0 is not exactly 300");
    }
    {
        TrainConfig fixed = config;
        fixed.fixed_shots = true;
        TrainerState state(init_params(16, world.table.dim, 1));
        std::vector<ShotTrace> traces;
        auto stats = run_batch(state, world.validation, deps, fixed, traces);
        EXPECT(stats.shots == 100, "fixed-K batch cost is not exactly 100");
    }
}

// ---------------------------------------------------------------------------
// Criteria 5-8 share one desk-scale fixture experiment.

struct ExperimentConfig {
    std::uint64_t seed = 32;
    double learning_rate = 6.5;
    Eigen::Index projection_dim = 64;
};

struct ExperimentResult {
    ScorerParams trained;
    ScorerParams untrained;
    TrainingReport dynamic_report;
    TrainingReport fixed_report;
    EvalResult zero_shot;
    EvalResult bm25;
    EvalResult ranker;
    double helpful_improved_fraction = 0.0;
};

TrainConfig experiment_train_config(const ExperimentConfig& cfg) {
    TrainConfig train;
    train.shot_budget = 5;
    train.n_preselect = 20;
    train.batch_size = 20;
    train.epochs = 1;
    train.learning_rate = cfg.learning_rate;
    train.projection_dim = cfg.projection_dim;
    train.init_seed = derive_seed(cfg.seed, "init");
    train.shuffle_seed = derive_seed(cfg.seed, "shuffle");
    return train;
}

double mean_helpful_rank(const ScorerParams& params, const Example& query, const World& world,
                         std::size_t n_preselect,
                         const std::unordered_map<std::string, const Example*>& by_id) {
    auto pre = preselect(world.index, query, n_preselect);
    std::vector<Candidate> candidates;
    for (const auto& id : pre.candidate_ids) candidates.push_back({id, world.table.at(id)});
    auto ranked = rank(params, world.table.at(query.id), candidates, query.id);
    const std::string topic = query.meta_value("topic").value_or("");
    double total = 0.0;
    int count = 0;
    for (std::size_t pos = 0; pos < ranked.size(); ++pos) {
        const Example* e = by_id.at(ranked.candidate_ids[pos]);
        if (e->meta_value("role").value_or("") == "helpful" &&
            e->meta_value("topic").value_or("") == topic) {
            total += static_cast<double>(pos + 1);
            ++count;
        }
    }
    return count > 0 ? total / count : 0.0;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const World& world) {
    ExperimentResult result;
    SyntheticOracleBackend oracle;
    TrainerDeps deps(world.pool, world.index, world.table, oracle);
    const TrainConfig train_config = experiment_train_config(cfg);

    result.untrained =
        init_params(train_config.projection_dim, world.table.dim, train_config.init_seed);
    auto [trained, report] = train(world.validation, deps, train_config);
    result.trained = std::move(trained);
    result.dynamic_report = std::move(report);

    TrainConfig fixed_config = train_config;
    fixed_config.fixed_shots = true;
    auto [fixed_params, fixed_report] = train(world.validation, deps, fixed_config);
    (void)fixed_params;
    result.fixed_report = std::move(fixed_report);

    EvalDeps eval_deps(world.pool, world.index, world.table, oracle);
    eval_deps.n_preselect = 20;
    eval_deps.sampling_seed = derive_seed(cfg.seed, "sampling");
    result.zero_shot = evaluate(world.test, RetrievalMode::ZeroShot, 0, eval_deps);
    result.bm25 = evaluate(world.test, RetrievalMode::Bm25Only, 5, eval_deps);
    eval_deps.params = &result.trained;
    result.ranker = evaluate(world.test, RetrievalMode::TrainedRanker, 5, eval_deps);

    std::unordered_map<std::string, const Example*> by_id;
    for (const auto& e : world.pool) by_id.emplace(e.id, &e);
    int improved = 0;
    for (const auto& query : world.test) {
        const double before = mean_helpful_rank(result.untrained, query, world, 20, by_id);
        const double after = mean_helpful_rank(result.trained, query, world, 20, by_id);
        if (after < before) ++improved;
    }
    result.helpful_improved_fraction =
        static_cast<double>(improved) / static_cast<double>(world.test.size());
    return result;
}

}  // namespace

int main() {
    testutil::TempDir experiment_dir("acc_experiment");
    FixtureSpec experiment_spec;
    experiment_spec.n_topics = 4;
    experiment_spec.n_examples = 1000;
    experiment_spec.n_queries = 200;
    experiment_spec.dim = 16;
    ExperimentConfig experiment_config;
    experiment_spec.seed = derive_seed(experiment_config.seed, "fixtures");

    std::unique_ptr<World> world;
    std::unique_ptr<ExperimentResult> experiment;
    auto ensure_experiment = [&]() {
        if (!world) world = std::make_unique<World>(experiment_spec, experiment_dir.path());
        if (!experiment)
            experiment = std::make_unique<ExperimentResult>(
                run_experiment(experiment_config, *world));
    };

    std::vector<Criterion> criteria;
    criteria.push_back({1, "gradient correctness vs finite differences", 10.0, [] {
        criterion_gradients();
        return std::string("100 instances, m,d <= 8, <= 6 candidates, rel err < 1e-4");
    }});
    criteria.push_back({2, "softmax normalization, shift invariance, top-k prefix", 10.0, [] {
        criterion_ranking_invariants();
        return std::string("1000 random cases");
    }});
    criteria.push_back({3, "BM25 equals the naive rescoring oracle", 5.0, [] {
        criterion_bm25_oracle();
        return std::string("hand-computed 4-doc case + 40 random corpora up to 200 docs");
    }});
    criteria.push_back({4, "cost arithmetic: 300 dynamic / 100 fixed-K", 0.0, [] {
        criterion_cost_arithmetic();
        return std::string("batch 20, K=5, sigma=0");
    }});

    criteria.push_back({5, "end-to-end synthetic learning", 120.0, [&] {
        ensure_experiment();
        const auto& r = *experiment;
        EXPECT(r.ranker.accuracy_hard >= r.bm25.accuracy_hard + 0.10,
               "ranker hard accuracy is not 10 points above bm25");
        EXPECT(r.ranker.accuracy_easy >= r.zero_shot.accuracy_easy - 0.02,
               "easy accuracy dropped more than 2 points vs zero-shot");
        EXPECT(r.helpful_improved_fraction >= 0.90,
               "helpful candidates improved on fewer than 90% of queries");
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "hard %.2f vs bm25 %.2f; easy %.2f vs 0-shot %.2f; helpful rank "
                      "improved on %.0f%% of queries",
                      r.ranker.accuracy_hard, r.bm25.accuracy_hard, r.ranker.accuracy_easy,
                      r.zero_shot.accuracy_easy, 100.0 * r.helpful_improved_fraction);
        return std::string(detail);
    }});

    criteria.push_back({6, "budget controller cuts epoch query cost", 0.0, [&] {
        ensure_experiment();
        const auto& r = *experiment;
        EXPECT(r.dynamic_report.total_shots <
                   static_cast<std::size_t>(0.8 * static_cast<double>(r.fixed_report.total_shots)),
               "dynamic epoch cost is not below 80% of the fixed-K baseline");
        const std::size_t batch0 = r.dynamic_report.per_batch.front().shots;
        for (std::size_t i = 1; i < r.dynamic_report.per_batch.size(); ++i)
            EXPECT(r.dynamic_report.per_batch[i].shots <= batch0,
                   "a later batch exceeded the batch-0 shot count");
        char detail[120];
        std::snprintf(detail, sizeof(detail), "%zu dynamic vs %zu fixed-K shots (%.0f%%)",
                      r.dynamic_report.total_shots, r.fixed_report.total_shots,
                      100.0 * static_cast<double>(r.dynamic_report.total_shots) /
                          static_cast<double>(r.fixed_report.total_shots));
        return std::string(detail);
    }});

    criteria.push_back({7, "determinism and transcript replay", 0.0, [&]() -> std::string {
        ensure_experiment();
        // Re-run the dynamic training with the same seed: bit-identical params.
        SyntheticOracleBackend oracle;
        TrainerDeps deps(world->pool, world->index, world->table, oracle);
        auto [params_again, report_again] =
            train(world->validation, deps, experiment_train_config(experiment_config));
        (void)report_again;
        EXPECT(params_again.W == experiment->trained.W &&
                   params_again.b == experiment->trained.b,
               "re-running training with the same seed changed the params");

        // Http-mode run against a local stub, then replay from its transcript.
        testutil::TempDir dir("acc_replay");
        FixtureSpec spec;
        spec.n_topics = 2;
        spec.n_examples = 60;
        spec.n_queries = 40;
        spec.dim = 8;
        spec.seed = 17;
        World small(spec, dir.file("fixtures"));

        httplib::Server server;
        server.Post("/v1/chat/completions",
                    [&](const httplib::Request& req, httplib::Response& res) {
                        auto body = json::parse(req.body);
                        const std::string prompt =
                            body.at("messages").at(0).at("content").get<std::string>();
                        // Deterministic rule: echo the last shot answer if any.
                        std::string answer = "unknown";
                        const std::string marker = "The answer is ";
                        const auto pos = prompt.rfind(marker);
                        if (pos != std::string::npos) {
                            const auto end = prompt.find('.', pos);
                            answer = prompt.substr(pos + marker.size(),
                                                   end - pos - marker.size());
                        }
                        json out;
                        out["choices"] = json::array(
                            {{{"message", {{"role", "assistant"}, {"content", answer}}}}});
                        res.set_content(out.dump(), "application/json");
                    });
        const int port = server.bind_to_any_port("127.0.0.1");
        std::thread server_thread([&] { server.listen_after_bind(); });
        server.wait_until_ready();

        TrainConfig small_config;
        small_config.shot_budget = 4;
        small_config.n_preselect = 10;
        small_config.batch_size = 10;
        small_config.projection_dim = 16;
        small_config.learning_rate = 0.1;
        small_config.init_seed = 5;
        small_config.shuffle_seed = 6;

        HttpBackendConfig http;
        http.endpoint = "http://127.0.0.1:" + std::to_string(port);
        http.model = "stub-model";
        http.transcript_path = dir.file("transcript.jsonl");
        http.api_key_env = "";
        ScorerParams http_params;
        {
            HttpChatBackend backend(http);
            TrainerDeps small_deps(small.pool, small.index, small.table, backend);
            auto [params, report] = train(small.validation, small_deps, small_config);
            (void)report;
            http_params = std::move(params);
        }
        server.stop();
        server_thread.join();

        // Replay must complete with zero cache misses (a miss throws).
        ReplayBackend replay(http.transcript_path, "stub-model");
        TrainerDeps replay_deps(small.pool, small.index, small.table, replay);
        auto [replay_params, replay_report] =
            train(small.validation, replay_deps, small_config);
        EXPECT(replay_report.failed_samples == 0, "replay run had cache misses");
        EXPECT(replay_params.W == http_params.W && replay_params.b == http_params.b,
               "replayed params differ from the http-mode run");
        return "same-seed rerun and http->replay both bit-identical, zero cache misses";
    }});

    criteria.push_back({8, "zero-shot accuracy equals the easy fraction exactly", 0.0, [&] {
        ensure_experiment();
        const auto& r = *experiment;
        std::size_t tagged_easy = 0;
        for (const auto& q : world->test)
            tagged_easy += q.meta_value("difficulty").value_or("") == "easy" ? 1 : 0;
        EXPECT(r.zero_shot.n_easy == tagged_easy, "probe partition differs from the tags");
        EXPECT(r.zero_shot.n_easy + r.zero_shot.n_hard == world->test.size(),
               "easy/hard counts do not sum to the test size");
        const double easy_fraction =
            static_cast<double>(tagged_easy) / static_cast<double>(world->test.size());
        EXPECT(r.zero_shot.accuracy_overall == easy_fraction,
               "zero-shot accuracy is not exactly the easy fraction");
        char detail[80];
        std::snprintf(detail, sizeof(detail), "%zu easy + %zu hard of %zu", r.zero_shot.n_easy,
                      r.zero_shot.n_hard, world->test.size());
        return std::string(detail);
    }});

    criteria.push_back({9, "answer normalization vectors", 0.0, []() -> std::string {
        const std::vector<std::pair<std::string, std::string>> vectors = {
            {"The answer is Paris.", "paris"},
            {"  An  Apple ", "apple"},
            {"U.S.A.", "usa"},
            {"The answer is 42.", "42"},
            {"THE QUICK BROWN FOX", "quick brown fox"},
            {"a an the", ""},
            {"", ""},
            {"   ", ""},
            {"Ulan-Bator!", "ulanbator"},
            {"The answer is: yes", "yes"},
            {"don't", "dont"},
            {"An apple a day", "apple day"},
            {"answer", "answer"},
            {"The answer", "answer"},
            {"  the  answer  is  b  ", "answer is b"},
            {"The answer is the answer.", "answer"},
            {"(B)", "b"},
            {"one,two , three", "onetwo three"},
            {"THE ANSWER IS NO.", "no"},
            {"42-7", "427"},
            {"'quoted'", "quoted"},
            {"thean swer", "thean swer"},
            {"  mixed   CASE   words ", "mixed case words"}};
        for (const auto& [raw, expected] : vectors) {
            EXPECT(normalize_answer(raw) == expected,
                   "normalize_answer(\"" + raw + "\") != \"" + expected + "\"");
        }
        char detail[48];
        std::snprintf(detail, sizeof(detail), "%zu exact vectors", vectors.size());
        return std::string(detail);
    }});

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        std::string detail;
        try {
            detail = criterion.run();
        } catch (const std::exception& ex) {
            error = ex.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && criterion.max_seconds > 0.0 &&
            elapsed > criterion.max_seconds) {
            error = "runtime " + format_seconds(elapsed) + " exceeds the " +
                    format_seconds(criterion.max_seconds) + " budget";
        }
        if (error.empty()) {
            std::printf("PASS  criterion %d: %s (%s; %s)\n", criterion.number,
                        criterion.summary.c_str(), detail.c_str(),
                        format_seconds(elapsed).c_str());
        } else {
            ++failures;
            std::printf("FAIL  criterion %d: %s (%s)\n      %s\n", criterion.number,
                        criterion.summary.c_str(), format_seconds(elapsed).c_str(),
                        error.c_str());
        }
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
