#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holo/common.hpp"

namespace holo {

/// Synthetic noisy quadratic ensemble: members f_i(x) = sum_d (a_i x_d - b_i)^2 + c_i
/// with a_i ~ U(1,3), b_i ~ U(-5,5), c_i ~ U(0,400). Exactly one ground
/// member has c = 0 (the "precise distance" loss, minimum value zero).
struct QuadraticEnsemble {
    int n = 0;
    int dim = 1;
    std::vector<double> a, b, c;
    int ground_index = 0;
    uint64_t seed = 0;

    void validate() const;

    /// f_i evaluated at x.
    double member_value(int i, const std::vector<double>& x) const;
    /// d f_i / d x accumulated into grad with weight w.
    void member_gradient(int i, const std::vector<double>& x, double w,
                         std::vector<double>& grad) const;

    /// Shared minimizer coordinate of the ground member: b/a (every dim).
    double ground_minimizer() const { return b[ground_index] / a[ground_index]; }
    /// Lipschitz constant of the gradients, C = max_i 2 a_i^2.
    double lipschitz() const;
};

QuadraticEnsemble generate_ensemble(int n, uint64_t seed, int dim = 1);

enum class QuadraticLoss { ground, reverse_attention, non_weighted, alternating };

std::string to_string(QuadraticLoss kind);

/// Fixed-step gradient-descent record. Row k holds the state *before*
/// iteration k; there are iterations+1 rows.
struct DescentTrace {
    QuadraticLoss kind = QuadraticLoss::ground;
    double step = 0.0;  // t <= 1/C
    int iterations = 0;
    std::vector<std::vector<double>> x;              // iterate per row
    std::vector<std::vector<double>> member_losses;  // f_i per row
    std::vector<std::vector<double>> weights;        // combination weights per row
    std::vector<double> total;                       // combined loss per row
};

struct DescentOptions {
    double x0 = 10.0;
    int iterations = 500;
    /// Overrides t = 1/C when positive (test hook; the default honors the
    /// theorem's precondition).
    double step_override = 0.0;
};

/// Plain gradient descent (not Adam; this is the theorem's setting) with the
/// combination weights recomputed and frozen each iteration. Reverse-attention
/// weights come from the same routine the reconstruction loss uses.
/// Diverging iterates (|x| > 1e6) raise an error naming the loss kind.
DescentTrace descend(const QuadraticEnsemble& ensemble, QuadraticLoss kind,
                     const DescentOptions& opts = {});

/// First iteration index at which each trace's loss gap (total, against the
/// zero optimum shared by ground and reverse-attention losses) falls below
/// threshold; +infinity when never reached.
std::pair<double, double> compare_rates(const DescentTrace& trace_a, const DescentTrace& trace_b,
                                        double threshold);

}  // namespace holo
