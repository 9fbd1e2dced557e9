#include "urank/scorer.hpp"

#include "urank/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

namespace urank {

namespace {

using json = nlohmann::json;

constexpr const char* kParamsVersion = "URANK-PARAMS-v1";

void check_dims(const ScorerParams& params, const Vector& query_embedding,
                const std::vector<Candidate>& candidates, const std::string& query_id) {
    const auto d = params.embedding_dim();
    if (params.b.size() != params.projection_dim())
        throw ValidationError("scorer: bias length does not match projection dim");
    if (query_embedding.size() != d)
        throw ValidationError("scorer: query embedding for '" + query_id + "' has dimension " +
                              std::to_string(query_embedding.size()) + ", params expect " +
                              std::to_string(d));
    for (const auto& c : candidates) {
        if (c.embedding.size() != d)
            throw ValidationError("scorer: candidate '" + c.id + "' has dimension " +
                                  std::to_string(c.embedding.size()) + ", params expect " +
                                  std::to_string(d));
    }
}

// Max-subtracted softmax; also returns log(sum exp) for stable log-probs.
std::pair<std::vector<double>, double> softmax(const std::vector<double>& logits) {
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        sum += probs[i];
    }
    for (auto& p : probs) p /= sum;
    return {std::move(probs), max_logit + std::log(sum)};
}

}  // namespace

ScorerParams init_params(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
    if (m < 1 || d < 1) throw ValidationError("scorer: dimensions must be at least 1");
    const double bound = std::sqrt(6.0 / static_cast<double>(m + d));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    ScorerParams params;
    params.W = Matrix(m, d);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < d; ++j) params.W(i, j) = uniform(rng);
    params.b = Vector::Zero(m);
    params.init_seed = seed;
    return params;
}

RankedCandidates rank(const ScorerParams& params, const Vector& query_embedding,
                      const std::vector<Candidate>& candidates, const std::string& query_id) {
    if (candidates.empty())
        throw ValidationError("scorer: cannot rank an empty candidate list for '" + query_id +
                              "'");
    check_dims(params, query_embedding, candidates, query_id);

    const Vector h_query = params.W * query_embedding + params.b;
    std::vector<double> logits(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        logits[i] = (params.W * candidates[i].embedding + params.b).dot(h_query);
        if (!std::isfinite(logits[i]))
            throw NumericError("scorer: non-finite logit for query '" + query_id + "'");
    }
    auto [probs, log_z] = softmax(logits);
    (void)log_z;

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

    RankedCandidates ranked;
    ranked.query_id = query_id;
    ranked.candidate_ids.reserve(candidates.size());
    for (std::size_t idx : order) {
        ranked.candidate_ids.push_back(candidates[idx].id);
        ranked.scores.push_back(probs[idx]);
        ranked.logits.push_back(logits[idx]);
        ranked.source_indices.push_back(idx);
    }
    return ranked;
}

std::vector<std::string> top_k(const RankedCandidates& ranked, std::size_t k) {
    if (k > ranked.size())
        throw ValidationError("scorer: top_k asked for " + std::to_string(k) + " of " +
                              std::to_string(ranked.size()) + " candidates");
    return {ranked.candidate_ids.begin(),
            ranked.candidate_ids.begin() + static_cast<std::ptrdiff_t>(k)};
}

std::size_t max_shots(const RankedCandidates& ranked, double sigma, std::size_t budget) {
    std::size_t above = 0;
    for (double score : ranked.scores) {
        if (score > sigma)
            ++above;
        else
            break;  // scores are sorted descending
    }
    return std::min(budget, above);
}

LossGrad loss_and_grad(const ScorerParams& params, const Vector& query_embedding,
                       const std::vector<Candidate>& candidates, std::size_t chosen_index,
                       int reward, const std::string& query_id) {
    if (chosen_index >= candidates.size())
        throw ValidationError("scorer: chosen index out of range for '" + query_id + "'");
    if (reward != 1 && reward != -1)
        throw ValidationError("scorer: reward must be +1 or -1, got " + std::to_string(reward));
    check_dims(params, query_embedding, candidates, query_id);

    const Vector h_query = params.W * query_embedding + params.b;
    const std::size_t n = candidates.size();
    std::vector<Vector> h(n);
    std::vector<double> logits(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = params.W * candidates[i].embedding + params.b;
        logits[i] = h[i].dot(h_query);
    }
    auto [probs, log_z] = softmax(logits);

    LossGrad out;
    out.loss = -static_cast<double>(reward) * (logits[chosen_index] - log_z);
    out.grad_w = Matrix::Zero(params.W.rows(), params.W.cols());
    out.grad_b = Vector::Zero(params.b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double indicator = (i == chosen_index) ? 1.0 : 0.0;
        const double coeff = -static_cast<double>(reward) * (indicator - probs[i]);
        if (coeff == 0.0) continue;
        out.grad_w.noalias() += coeff * (h_query * candidates[i].embedding.transpose() +
                                         h[i] * query_embedding.transpose());
        out.grad_b += coeff * (h_query + h[i]);
    }
    if (!std::isfinite(out.loss) || !out.grad_w.allFinite() || !out.grad_b.allFinite())
        throw NumericError("scorer: non-finite loss or gradient for query '" + query_id + "'");
    return out;
}

ScorerParams apply_update(const ScorerParams& params, const Matrix& grad_w_sum,
                          const Vector& grad_b_sum, std::size_t count, double learning_rate) {
    if (count < 1) throw ValidationError("scorer: update needs at least one accumulated term");
    if (!(learning_rate > 0.0)) throw ValidationError("scorer: learning rate must be positive");
    if (grad_w_sum.rows() != params.W.rows() || grad_w_sum.cols() != params.W.cols() ||
        grad_b_sum.size() != params.b.size())
        throw ValidationError("scorer: gradient shapes do not match params");
    const double scale = learning_rate / static_cast<double>(count);
    ScorerParams updated;
    updated.W = params.W - scale * grad_w_sum;
    updated.b = params.b - scale * grad_b_sum;
    updated.init_seed = params.init_seed;
    return updated;
}

void save_params(const std::filesystem::path& path, const ScorerParams& params) {
    json j;
    j["format_version"] = kParamsVersion;
    j["m"] = params.projection_dim();
    j["d"] = params.embedding_dim();
    json w = json::array();
    for (Eigen::Index i = 0; i < params.W.rows(); ++i)
        for (Eigen::Index c = 0; c < params.W.cols(); ++c) w.push_back(params.W(i, c));
    j["W"] = std::move(w);
    json b = json::array();
    for (Eigen::Index i = 0; i < params.b.size(); ++i) b.push_back(params.b[i]);
    j["b"] = std::move(b);
    j["init_seed"] = params.init_seed;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("scorer: cannot write params file " + path.string());
    out << j.dump() << '\n';
}

ScorerParams load_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scorer: cannot open params file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ParseError("scorer: malformed params file " + path.string() + ": " + ex.what());
    }
    if (!j.is_object() || j.value("format_version", "") != kParamsVersion)
        throw ValidationError("scorer: " + path.string() + " is not a " + kParamsVersion +
                              " file");
    const auto m = j.at("m").get<Eigen::Index>();
    const auto d = j.at("d").get<Eigen::Index>();
    const auto& w = j.at("W");
    const auto& b = j.at("b");
    if (m < 1 || d < 1 || !w.is_array() || !b.is_array() ||
        w.size() != static_cast<std::size_t>(m * d) || b.size() != static_cast<std::size_t>(m))
        throw ValidationError("scorer: params file " + path.string() +
                              " has inconsistent shapes");
    ScorerParams params;
    params.W = Matrix(m, d);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index c = 0; c < d; ++c) params.W(i, c) = w[k++].get<double>();
    params.b = Vector(m);
    for (Eigen::Index i = 0; i < m; ++i) params.b[i] = b[static_cast<std::size_t>(i)].get<double>();
    params.init_seed = j.value("init_seed", 0ull);
    if (!params.W.allFinite() || !params.b.allFinite())
        throw ValidationError("scorer: params file " + path.string() +
                              " contains non-finite values");
    return params;
}

}  // namespace urank
