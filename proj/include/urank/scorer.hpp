#pragma once

#include "urank/common.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace urank {

// The trainable half of the retriever: a linear map h(x) = W u(x) + b over
// frozen embeddings. Everything else (the encoder) stays fixed.
struct ScorerParams {
    Matrix W;  // projection_dim x embedding_dim
    Vector b;  // projection_dim
    std::uint64_t init_seed = 0;

    Eigen::Index projection_dim() const { return W.rows(); }
    Eigen::Index embedding_dim() const { return W.cols(); }
};

// Xavier-uniform W in [-sqrt(6/(m+d)), sqrt(6/(m+d))], zero bias.
ScorerParams init_params(Eigen::Index m, Eigen::Index d, std::uint64_t seed);

struct Candidate {
    std::string id;
    Vector embedding;
};

struct RankedCandidates {
    std::string query_id;
    std::vector<std::string> candidate_ids;   // descending score
    std::vector<double> scores;               // softmax probabilities
    std::vector<double> logits;               // h(e) . h(p), same order
    std::vector<std::size_t> source_indices;  // ranked position -> input index

    std::size_t size() const { return candidate_ids.size(); }
};

// Softmax ranking over the pre-selected candidates: logit_e = h(e).h(p),
// scores = softmax(logits) over exactly the given list. Ties break by
// ascending insertion order.
RankedCandidates rank(const ScorerParams& params, const Vector& query_embedding,
                      const std::vector<Candidate>& candidates,
                      const std::string& query_id = {});

// First k ids of the ranked order; top_k(r, j) is always a prefix of
// top_k(r, j + 1).
std::vector<std::string> top_k(const RankedCandidates& ranked, std::size_t k);

// min(budget, number of candidates whose score strictly exceeds sigma).
std::size_t max_shots(const RankedCandidates& ranked, double sigma, std::size_t budget);

struct LossGrad {
    double loss = 0.0;
    Matrix grad_w;
    Vector grad_b;
};

// REINFORCE term for one (query, chosen candidate, reward) triple:
//   loss = -reward * log softmax(logits)[chosen]
// with exact analytic gradients through the softmax and the bilinear logits
//   z_e = (W u_e + b) . (W u_p + b).
LossGrad loss_and_grad(const ScorerParams& params, const Vector& query_embedding,
                       const std::vector<Candidate>& candidates, std::size_t chosen_index,
                       int reward, const std::string& query_id = {});

// One averaged gradient-descent step; pure, returns new params.
ScorerParams apply_update(const ScorerParams& params, const Matrix& grad_w_sum,
                          const Vector& grad_b_sum, std::size_t count, double learning_rate);

// JSON persistence, format "URANK-PARAMS-v1". load(save(p)) is bit-exact.
void save_params(const std::filesystem::path& path, const ScorerParams& params);
ScorerParams load_params(const std::filesystem::path& path);

}  // namespace urank
