#include "holo/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holo {

void CandidateSet::validate() const {
    if (distances.empty()) fail("CandidateSet: need at least one distance");
    for (size_t i = 1; i < distances.size(); ++i)
        if (!(distances[i] > distances[i - 1]))
            fail("CandidateSet: distances must be strictly increasing");
    if (true_index && (*true_index < 0 || *true_index >= size()))
        fail("CandidateSet: true_index out of range");
}

CandidateSet CandidateSet::from_range(double z_min, double z_max, double step,
                                      std::optional<double> z_true) {
    if (!(step > 0)) fail("CandidateSet: step must be positive");
    if (!(z_max >= z_min)) fail("CandidateSet: z_max must be >= z_min");
    CandidateSet set;
    const double tol = step * 1e-6;
    for (int k = 0;; ++k) {
        const double z = z_min + k * step;
        if (z > z_max + tol) break;
        set.distances.push_back(z);
    }
    if (z_true) {
        for (int i = 0; i < set.size(); ++i)
            if (std::abs(set.distances[i] - *z_true) <= tol) {
                set.true_index = i;
                break;
            }
    }
    set.validate();
    return set;
}

std::vector<double> reverse_attention_weights(std::span<const double> losses) {
    if (losses.empty()) fail("reverse_attention_weights: empty loss vector");
    for (double l : losses)
        if (std::isnan(l)) fail("reverse_attention_weights: NaN loss");

    const size_t n = losses.size();
    std::vector<double> w(n, 0.0);

    // Limit of Eq.-style weights as any loss reaches zero: all attention on
    // the floor-hitting candidates.
    size_t floored = 0;
    for (double l : losses)
        if (l <= kLossFloor) ++floored;
    if (floored > 0) {
        for (size_t i = 0; i < n; ++i)
            if (losses[i] <= kLossFloor) w[i] = 1.0 / static_cast<double>(floored);
        return w;
    }

    double m = -std::numeric_limits<double>::infinity();
    for (double l : losses) m = std::max(m, 1.0 / l);
    double denom = 0.0;
    for (size_t i = 0; i < n; ++i) {
        w[i] = std::exp(1.0 / losses[i] - m);
        denom += w[i];
    }
    for (double& v : w) v /= denom;
    return w;
}

int predicted_index(std::span<const double> weights) {
    if (weights.empty()) fail("predicted_index: empty weight vector");
    int best = 0;
    for (size_t i = 1; i < weights.size(); ++i)
        if (weights[i] > weights[best]) best = static_cast<int>(i);
    return best;
}

}  // namespace holo
