#pragma once

#include <optional>
#include <span>
#include <vector>

#include "holo/tensor.hpp"

namespace holo {

/// Ordered candidate object distances; true_index marks z* when known
/// (evaluation metadata, never consumed by the optimization itself).
struct CandidateSet {
    std::vector<double> distances;
    std::optional<int> true_index;

    void validate() const;
    int size() const { return static_cast<int>(distances.size()); }

    /// Build {z_min, z_min+step, ..., <= z_max} and locate z_true within it
    /// (tolerant match at step*1e-6).
    static CandidateSet from_range(double z_min, double z_max, double step,
                                   std::optional<double> z_true = std::nullopt);
};

/// Per-epoch record of candidate losses, their attention weights and the
/// combined loss value.
struct CandidateLossReport {
    int epoch = 0;
    std::vector<double> losses;
    std::vector<double> weights;
    double total = 0.0;
};

/// Loss floor below which 1/L is treated as infinite (limit semantics of the
/// attention weights).
inline constexpr double kLossFloor = 1e-12;

/// Softmax over 1/L_i, evaluated in the max-subtracted stabilized form
///   W_i = exp(1/L_i - m) / sum_j exp(1/L_j - m),  m = max_j 1/L_j,
/// which is algebraically identical to the naive form but does not overflow
/// for small losses. Losses at or below kLossFloor take the limit: weight 1
/// split among all floor-hitting candidates. NaN losses are an error.
/// Returned weights are plain constants (no graph attached).
std::vector<double> reverse_attention_weights(std::span<const double> losses);

/// argmax over weights; ties break toward the smaller index.
int predicted_index(std::span<const double> weights);

/// MSE between reproduced and captured hologram (Tensor form, differentiable).
template <typename T>
Tensor<T> hologram_loss(const Tensor<T>& reproduced, const Tensor<T>& captured) {
    return mse(reproduced, captured);
}

/// Combine per-candidate losses into the reverse-attention total
/// sum_i detach(W_i) * L_i. Weights are recomputed from the current loss
/// values and enter the graph as constants, so backward distributes the
/// gradient as sum_i W_i * grad(L_i).
template <typename T>
std::pair<Tensor<T>, CandidateLossReport> reverse_attention_loss(
    const std::vector<Tensor<T>>& candidate_losses, int epoch = 0) {
    if (candidate_losses.empty()) fail("reverse_attention_loss: need at least one candidate");
    CandidateLossReport report;
    report.epoch = epoch;
    for (const auto& l : candidate_losses)
        report.losses.push_back(static_cast<double>(l.item()));
    report.weights = reverse_attention_weights(report.losses);

    Tensor<T> total = scale(candidate_losses[0], static_cast<T>(report.weights[0]));
    for (size_t i = 1; i < candidate_losses.size(); ++i)
        total = add(total, scale(candidate_losses[i], static_cast<T>(report.weights[i])));
    report.total = static_cast<double>(total.item());
    return {std::move(total), std::move(report)};
}

}  // namespace holo
