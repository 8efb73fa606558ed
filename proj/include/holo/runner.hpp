#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holo/common.hpp"

namespace holo {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kOutRootEnv = "HOLO_OUT_ROOT";

/// Everything needed to reproduce a simulate/reconstruct run. Loaded from a
/// flat key=value config file, then overridden by CLI flags; every key is
/// mirrored into the output manifest.
struct ExperimentConfig {
    // sample / object model
    std::string sample = "bars";  // bars | cells | dendrite (procedural)
    std::string image_path;       // when set, overrides `sample`
    int size = 128;
    double alpha = 0.9;                   // absorption strength of amplitude objects
    std::string object_mode = "amplitude";  // amplitude | phase
    double phase_max = 1.5707963267948966;

    // optics
    double wavelength = 532e-9;
    double pitch = 2e-6;

    // distances (meters)
    double z_true = 5000e-6;
    double z_min = 4500e-6;
    double z_max = 5500e-6;
    double z_step = 100e-6;

    // optimization
    std::string strategy = "reverse-attention";
    int epochs = 1500;
    uint64_t seed = 1;
    std::string precision = "f32";  // f32 | f64

    // architecture overrides
    int arch_stages = 4;
    int arch_base = 16;
    int arch_kernel = 3;

    // simulation flags
    double noise_std = 0.0;
    uint64_t noise_seed = 0;
    bool normalize = true;

    std::string out_dir;

    void validate() const;
    /// Apply `key=value` pairs (same keys as the config file).
    void apply(const std::map<std::string, std::string>& kv);
    std::map<std::string, std::string> to_map() const;
};

/// Parse a flat key=value file ('#' comments, blank lines allowed).
std::map<std::string, std::string> parse_key_value_file(const std::string& path);

/// Default output root: $HOLO_OUT_ROOT or ./runs.
std::string output_root();

// Command implementations behind the CLI (also used by integration tests).

struct SimulateOutputs {
    std::string hologram_png;
    std::string sidecar_json;
    std::string object_png;
    std::string manifest_json;
};
SimulateOutputs run_simulate(const ExperimentConfig& cfg);

struct ReconstructOutputs {
    std::string amplitude_png;
    std::string phase_png;
    std::string trace_csv;
    std::string summary_json;
    std::string manifest_json;
    std::optional<double> predicted_distance;
    double psnr = 0.0;  // vs recorded ground truth, when available
    double ssim = 0.0;
    double wall_time_seconds = 0.0;
};
/// `hologram_png` points at a simulate output; its metadata sidecar is
/// looked up next to it. `z_known` overrides the known-distance z (defaults
/// to the recorded true distance).
ReconstructOutputs run_reconstruct(const ExperimentConfig& cfg, const std::string& hologram_png,
                                   std::optional<double> z_known = std::nullopt);

struct QuadraticCliOptions {
    std::vector<int> ns = {2, 5, 20, 100};
    int seeds = 20;
    int iterations = 500;
    double x0 = 10.0;
    int dim = 1;
    double rate_threshold = 1e-4;
    bool surface = false;
    std::string out_dir;
};
std::string run_quadratic(const QuadraticCliOptions& opts);  // returns summary csv path

struct EvaluateRecord {
    double psnr = 0.0;
    double ssim = 0.0;
};
EvaluateRecord run_evaluate(const std::string& reference_path, const std::string& test_path);
/// Scan a results directory for run subfolders (summary.json present) and
/// write one CSV row per run. Returns the csv path.
std::string run_evaluate_batch(const std::string& results_dir, const std::string& out_csv);

}  // namespace holo
