#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "holo/adam.hpp"
#include "holo/image.hpp"
#include "holo/losses.hpp"
#include "holo/metrics.hpp"
#include "holo/network.hpp"
#include "holo/optics.hpp"

namespace holo {

/// Reconstruction strategy under comparison. random_distance picks one
/// candidate at the start (include_correct controls whether z* is eligible);
/// the others are defined by how per-candidate losses combine each epoch.
struct StrategyKind {
    enum class Kind {
        known_distance,
        random_distance,
        non_weighted,
        alternating,
        reverse_attention,
    };
    Kind kind = Kind::reverse_attention;
    bool include_correct = true;  // random_distance only

    std::string name() const;
    static StrategyKind parse(const std::string& name);
};

struct ReconstructOptions {
    int epochs = 1500;
    uint64_t seed = 1;
    double learning_rate = 1e-3;  // fixed Adam rate
    int arch_stages = 4;
    int arch_base_channels = 16;
    int arch_kernel = 3;
    bool normalize = true;  // divide the hologram by its mean before fitting
    /// Optional per-epoch observer (epoch, report).
    std::function<void(int, const CandidateLossReport&)> on_epoch;
};

struct ReconstructionResult {
    ComplexField object_estimate;
    std::optional<double> predicted_distance;
    std::vector<double> candidate_distances;  // distances the traces refer to
    std::vector<CandidateLossReport> traces;  // one row per epoch
    double wall_time_seconds = 0.0;
    int epochs = 0;
    uint64_t seed = 0;
    StrategyKind strategy;
};

/// Raised when the optimization hits a non-finite loss; carries the partial
/// trace for post-mortem dumps.
class ReconstructionAborted : public Error {
public:
    ReconstructionAborted(const std::string& msg, std::vector<CandidateLossReport> partial)
        : Error(msg), partial_traces(std::move(partial)) {}
    std::vector<CandidateLossReport> partial_traces;
};

namespace detail {

template <typename T>
Tensor<T> hologram_tensor(const Hologram& h) {
    std::vector<T> data(h.intensity.size());
    for (size_t i = 0; i < data.size(); ++i) data[i] = static_cast<T>(h.intensity[i]);
    return Tensor<T>::from({1, h.config.height, h.config.width}, std::move(data));
}

inline int argmin_index(const std::vector<double>& v) {
    int j = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[j]) j = static_cast<int>(i);
    return j;
}

}  // namespace detail

/// One full optimization run. All strategies share the network, optimizer
/// and initialization for a given seed; only the per-epoch loss differs.
/// Candidate kernels are precomputed once; within an epoch the network
/// output is Fourier-transformed once and each candidate adds only a kernel
/// product and an inverse FFT.
template <typename T>
ReconstructionResult reconstruct(const Hologram& hologram, const CandidateSet& candidates,
                                 StrategyKind strategy, const ReconstructOptions& opts) {
    using Kind = StrategyKind::Kind;
    hologram.validate();
    candidates.validate();
    if (opts.epochs < 1) fail("reconstruct: epochs must be >= 1");

    // Pick the distances this run optimizes over.
    std::vector<int> active;
    if (strategy.kind == Kind::known_distance) {
        if (!candidates.true_index)
            fail("reconstruct: known-distance strategy requires the true index");
        active = {*candidates.true_index};
    } else if (strategy.kind == Kind::random_distance) {
        std::vector<int> eligible;
        for (int i = 0; i < candidates.size(); ++i)
            if (strategy.include_correct || !candidates.true_index || i != *candidates.true_index)
                eligible.push_back(i);
        if (eligible.empty())
            fail("reconstruct: random-distance strategy has no eligible candidate");
        Rng rng(mix_seed(opts.seed, 0x5a));
        active = {eligible[rng.below(eligible.size())]};
    } else {
        for (int i = 0; i < candidates.size(); ++i) active.push_back(i);
    }

    std::vector<double> zs;
    for (int i : active) zs.push_back(candidates.distances[i]);
    std::vector<PropagationKernel> kernels;
    for (double z : zs) kernels.push_back(make_kernel(hologram.config, z));
    std::vector<Tensor<T>> kernel_consts;
    for (const auto& k : kernels) kernel_consts.push_back(kernel_tensor<T>(k));

    Hologram normalized = hologram;
    if (opts.normalize) normalize_mean(normalized);
    const Tensor<T> target = detail::hologram_tensor<T>(normalized);

    AutoencoderSpec spec;
    spec.input_height = hologram.config.height;
    spec.input_width = hologram.config.width;
    spec.stages = opts.arch_stages;
    spec.base_channels = opts.arch_base_channels;
    spec.kernel = opts.arch_kernel;
    auto net = Autoencoder<T>::build(spec, opts.seed);
    auto adam = AdamState<T>::for_params(net.parameters(), static_cast<T>(opts.learning_rate));

    ReconstructionResult result;
    result.strategy = strategy;
    result.epochs = opts.epochs;
    result.seed = opts.seed;
    result.candidate_distances = zs;

    const int n = static_cast<int>(zs.size());
    const auto t0 = std::chrono::steady_clock::now();
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        Tensor<T> out = net.forward(target);
        Tensor<T> spectrum = fft2c(out);
        std::vector<Tensor<T>> losses;
        losses.reserve(n);
        for (int i = 0; i < n; ++i) {
            Tensor<T> reproduced = complex_abs2(ifft2c(complex_mul(spectrum, kernel_consts[i])));
            losses.push_back(hologram_loss(reproduced, target));
        }

        Tensor<T> total;
        CandidateLossReport report;
        report.epoch = epoch;
        switch (strategy.kind) {
            case Kind::known_distance:
            case Kind::random_distance:
                total = losses[0];
                report.losses = {static_cast<double>(total.item())};
                report.weights = {1.0};
                report.total = report.losses[0];
                break;
            case Kind::non_weighted: {
                Tensor<T> s = losses[0];
                report.losses.push_back(static_cast<double>(losses[0].item()));
                for (int i = 1; i < n; ++i) {
                    s = add(s, losses[i]);
                    report.losses.push_back(static_cast<double>(losses[i].item()));
                }
                total = scale(s, T(1) / static_cast<T>(n));
                report.weights.assign(n, 1.0 / n);
                report.total = static_cast<double>(total.item());
                break;
            }
            case Kind::alternating: {
                for (int i = 0; i < n; ++i)
                    report.losses.push_back(static_cast<double>(losses[i].item()));
                const int j = detail::argmin_index(report.losses);
                total = losses[j];
                report.weights.assign(n, 0.0);
                report.weights[j] = 1.0;
                report.total = report.losses[j];
                break;
            }
            case Kind::reverse_attention: {
                auto [t, r] = reverse_attention_loss(losses, epoch);
                total = std::move(t);
                report = std::move(r);
                break;
            }
        }

        if (!std::isfinite(report.total)) {
            result.traces.push_back(report);
            throw ReconstructionAborted(
                "reconstruct: non-finite loss at epoch " + std::to_string(epoch) +
                    " (strategy " + strategy.name() + ")",
                std::move(result.traces));
        }

        total.backward();
        adam_step(net.parameters(), adam);
        zero_gradients(net.parameters());

        if (opts.on_epoch) opts.on_epoch(epoch, report);
        result.traces.push_back(std::move(report));
    }
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Final object estimate from the updated parameters.
    Tensor<T> out = net.forward(target);
    result.object_estimate.config = hologram.config;
    const size_t npix = static_cast<size_t>(hologram.config.pixels());
    auto ov = out.values();
    result.object_estimate.real.assign(ov.begin(), ov.begin() + npix);
    result.object_estimate.imag.assign(ov.begin() + npix, ov.begin() + 2 * npix);

    const CandidateLossReport& last = result.traces.back();
    switch (strategy.kind) {
        case Kind::known_distance:
        case Kind::random_distance:
            result.predicted_distance = zs[0];
            break;
        case Kind::non_weighted:
        case Kind::alternating:
            result.predicted_distance = zs[detail::argmin_index(last.losses)];
            break;
        case Kind::reverse_attention:
            result.predicted_distance = zs[predicted_index(last.weights)];
            break;
    }
    return result;
}

struct ExpectationEntry {
    double distance = 0.0;
    uint64_t seed = 0;
    Score score;
    double wall_time_seconds = 0.0;
};

struct ExpectationResult {
    std::vector<ExpectationEntry> runs;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double summed_wall_time = 0.0;
};

/// Expected reconstruction quality under a uniformly random candidate
/// distance: one known-distance-style run per eligible candidate (all n in
/// include mode, n-1 when the correct distance is excluded), averaged.
/// Runs are independent (own parameters, derived seeds) and fan out across
/// threads.
template <typename T>
ExpectationResult random_distance_expectation(const Hologram& hologram,
                                              const CandidateSet& candidates,
                                              bool include_correct, const Image& truth,
                                              const ReconstructOptions& opts,
                                              int max_parallel = 0) {
    candidates.validate();
    if (!candidates.true_index)
        fail("random_distance_expectation: requires the true index");
    std::vector<int> eligible;
    for (int i = 0; i < candidates.size(); ++i)
        if (include_correct || i != *candidates.true_index) eligible.push_back(i);
    if (eligible.empty())
        fail("random_distance_expectation: exclude mode needs at least two candidates");

    if (max_parallel <= 0)
        max_parallel = std::max(1u, std::thread::hardware_concurrency());

    auto run_one = [&](int idx) {
        const int cand = eligible[idx];
        CandidateSet single;
        single.distances = {candidates.distances[cand]};
        single.true_index = 0;
        ReconstructOptions o = opts;
        o.seed = mix_seed(opts.seed, static_cast<uint64_t>(cand));
        o.on_epoch = nullptr;
        StrategyKind known{StrategyKind::Kind::known_distance, true};
        auto res = reconstruct<T>(hologram, single, known, o);
        ExpectationEntry e;
        e.distance = single.distances[0];
        e.seed = o.seed;
        e.score = score_reconstruction(res.object_estimate, truth);
        e.wall_time_seconds = res.wall_time_seconds;
        return e;
    };

    ExpectationResult result;
    result.runs.resize(eligible.size());
    size_t next = 0;
    while (next < eligible.size()) {
        const size_t batch = std::min<size_t>(max_parallel, eligible.size() - next);
        std::vector<std::future<ExpectationEntry>> futs;
        for (size_t i = 0; i < batch; ++i)
            futs.push_back(std::async(std::launch::async, run_one, static_cast<int>(next + i)));
        for (size_t i = 0; i < batch; ++i) result.runs[next + i] = futs[i].get();
        next += batch;
    }
    for (const auto& e : result.runs) {
        result.mean_psnr += e.score.psnr;
        result.mean_ssim += e.score.ssim;
        result.summed_wall_time += e.wall_time_seconds;
    }
    result.mean_psnr /= static_cast<double>(result.runs.size());
    result.mean_ssim /= static_cast<double>(result.runs.size());
    return result;
}

}  // namespace holo
