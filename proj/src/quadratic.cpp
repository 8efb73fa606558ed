#include "holo/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holo/losses.hpp"

namespace holo {

void QuadraticEnsemble::validate() const {
    if (n < 1 || dim < 1) fail("QuadraticEnsemble: n and dim must be >= 1");
    if (a.size() != static_cast<size_t>(n) || b.size() != a.size() || c.size() != a.size())
        fail("QuadraticEnsemble: coefficient vectors must have length n");
    if (ground_index < 0 || ground_index >= n) fail("QuadraticEnsemble: ground_index out of range");
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
        if (a[i] < 1.0) fail("QuadraticEnsemble: a_i must be >= 1");
        if (c[i] == 0.0) ++zeros;
    }
    if (c[ground_index] != 0.0 || zeros != 1)
        fail("QuadraticEnsemble: exactly the ground member must have c = 0");
}

double QuadraticEnsemble::member_value(int i, const std::vector<double>& x) const {
    double v = c[i];
    for (double xd : x) {
        const double r = a[i] * xd - b[i];
        v += r * r;
    }
    return v;
}

void QuadraticEnsemble::member_gradient(int i, const std::vector<double>& x, double w,
                                        std::vector<double>& grad) const {
    for (size_t d = 0; d < x.size(); ++d)
        grad[d] += w * 2.0 * a[i] * (a[i] * x[d] - b[i]);
}

double QuadraticEnsemble::lipschitz() const {
    double c_max = 0;
    for (int i = 0; i < n; ++i) c_max = std::max(c_max, 2.0 * a[i] * a[i]);
    return c_max;
}

QuadraticEnsemble generate_ensemble(int n, uint64_t seed, int dim) {
    if (n < 1) fail("generate_ensemble: n must be >= 1");
    QuadraticEnsemble e;
    e.n = n;
    e.dim = dim;
    e.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        e.a.push_back(rng.uniform(1.0, 3.0));
        e.b.push_back(rng.uniform(-5.0, 5.0));
        double c = rng.uniform(0.0, 400.0);
        while (c == 0.0) c = rng.uniform(0.0, 400.0);  // keep the ground member unique
        e.c.push_back(c);
    }
    e.ground_index = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    e.c[e.ground_index] = 0.0;
    e.validate();
    return e;
}

std::string to_string(QuadraticLoss kind) {
    switch (kind) {
        case QuadraticLoss::ground: return "ground";
        case QuadraticLoss::reverse_attention: return "reverse-attention";
        case QuadraticLoss::non_weighted: return "non-weighted";
        case QuadraticLoss::alternating: return "alternating";
    }
    return "?";
}

DescentTrace descend(const QuadraticEnsemble& ensemble, QuadraticLoss kind,
                     const DescentOptions& opts) {
    ensemble.validate();
    if (opts.iterations < 1) fail("descend: iterations must be >= 1");
    const int n = ensemble.n;
    DescentTrace trace;
    trace.kind = kind;
    trace.iterations = opts.iterations;
    trace.step = opts.step_override > 0 ? opts.step_override : 1.0 / ensemble.lipschitz();

    std::vector<double> x(static_cast<size_t>(ensemble.dim), opts.x0);
    std::vector<double> losses(n), grad(x.size());

    for (int k = 0; k <= opts.iterations; ++k) {
        for (int i = 0; i < n; ++i) losses[i] = ensemble.member_value(i, x);

        std::vector<double> w(n, 0.0);
        switch (kind) {
            case QuadraticLoss::ground:
                w[ensemble.ground_index] = 1.0;
                break;
            case QuadraticLoss::reverse_attention:
                w = reverse_attention_weights(losses);
                break;
            case QuadraticLoss::non_weighted:
                std::fill(w.begin(), w.end(), 1.0 / n);
                break;
            case QuadraticLoss::alternating: {
                int j = 0;  // lowest-index minimizer
                for (int i = 1; i < n; ++i)
                    if (losses[i] < losses[j]) j = i;
                w[j] = 1.0;
                break;
            }
        }
        double total = 0;
        for (int i = 0; i < n; ++i) total += w[i] * losses[i];

        trace.x.push_back(x);
        trace.member_losses.push_back(losses);
        trace.weights.push_back(w);
        trace.total.push_back(total);

        if (k == opts.iterations) break;

        std::fill(grad.begin(), grad.end(), 0.0);
        for (int i = 0; i < n; ++i)
            if (w[i] != 0.0) ensemble.member_gradient(i, x, w[i], grad);
        for (size_t d = 0; d < x.size(); ++d) {
            x[d] -= trace.step * grad[d];
            if (!(std::abs(x[d]) <= 1e6))
                fail("descend: " + to_string(kind) + " loss diverged at iteration " +
                     std::to_string(k));
        }
    }
    return trace;
}

std::pair<double, double> compare_rates(const DescentTrace& trace_a, const DescentTrace& trace_b,
                                        double threshold) {
    auto first_below = [threshold](const DescentTrace& t) -> double {
        for (size_t k = 0; k < t.total.size(); ++k)
            if (t.total[k] < threshold) return static_cast<double>(k);
        return std::numeric_limits<double>::infinity();
    };
    return {first_below(trace_a), first_below(trace_b)};
}

}  // namespace holo
