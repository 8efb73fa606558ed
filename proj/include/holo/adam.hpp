#pragma once

#include <cmath>
#include <vector>

#include "holo/tensor.hpp"

namespace holo {

/// Adam with bias correction. The paper fixes only the learning rate (1e-3);
/// beta/epsilon are the optimizer's canonical defaults.
template <typename T>
struct AdamState {
    T learning_rate = T(1e-3);
    T beta1 = T(0.9);
    T beta2 = T(0.999);
    T epsilon = T(1e-8);
    long step_count = 0;
    std::vector<std::vector<T>> first_moment;
    std::vector<std::vector<T>> second_moment;

    static AdamState for_params(const std::vector<Tensor<T>>& params, T lr = T(1e-3)) {
        AdamState s;
        s.learning_rate = lr;
        for (const auto& p : params) {
            s.first_moment.emplace_back(p.numel(), T(0));
            s.second_moment.emplace_back(p.numel(), T(0));
        }
        return s;
    }
};

/// One Adam update over all parameters, reading each parameter's accumulated
/// gradient (absent gradient = zero). Updates values in place.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params, AdamState<T>& state) {
    if (params.size() != state.first_moment.size())
        fail("adam_step: state tracks " + std::to_string(state.first_moment.size()) +
             " parameters, got " + std::to_string(params.size()));
    state.step_count += 1;
    const T b1 = state.beta1, b2 = state.beta2;
    const T bc1 = T(1) - std::pow(b1, static_cast<T>(state.step_count));
    const T bc2 = T(1) - std::pow(b2, static_cast<T>(state.step_count));
    for (size_t p = 0; p < params.size(); ++p) {
        auto v = params[p].values_mut();
        auto& m1 = state.first_moment[p];
        auto& m2 = state.second_moment[p];
        if (m1.size() != v.size())
            fail("adam_step: parameter " + std::to_string(p) + " shape changed");
        const bool has_g = params[p].has_grad();
        auto g = has_g ? params[p].grad() : std::span<const T>{};
        for (size_t i = 0; i < v.size(); ++i) {
            const T gi = has_g ? g[i] : T(0);
            m1[i] = b1 * m1[i] + (T(1) - b1) * gi;
            m2[i] = b2 * m2[i] + (T(1) - b2) * gi * gi;
            const T mhat = m1[i] / bc1;
            const T vhat = m2[i] / bc2;
            v[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
        }
    }
}

template <typename T>
void zero_gradients(std::vector<Tensor<T>>& params) {
    for (auto& p : params) p.zero_grad();
}

}  // namespace holo
