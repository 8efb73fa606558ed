// Command-line front end: simulate | reconstruct | quadratic | evaluate.
// Exit code 0 on success; on failure a single machine-readable error line
// ({"error": "..."}) goes to stderr and the exit code is nonzero.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "holo/runner.hpp"

namespace {

/// key=value config file first, then explicit CLI flags on top.
void bind_common(CLI::App* cmd, holo::ExperimentConfig& cfg, std::string& config_file) {
    cmd->add_option("--config", config_file, "key=value config file");
    cmd->add_option("--sample", cfg.sample, "procedural sample: bars | cells | dendrite");
    cmd->add_option("--image", cfg.image_path, "grayscale raster (PNG/PGM) to use as object");
    cmd->add_option("--size", cfg.size, "grid size in pixels");
    cmd->add_option("--wavelength", cfg.wavelength, "wavelength in meters");
    cmd->add_option("--pitch", cfg.pitch, "pixel pitch in meters");
    cmd->add_option("--alpha", cfg.alpha, "absorption strength of the amplitude object");
    cmd->add_option("--object-mode", cfg.object_mode, "amplitude | phase");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--out", cfg.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Untrained-network digital in-line holography with reverse-attention "
                 "autofocusing"};
    app.require_subcommand(1);

    holo::ExperimentConfig cfg;
    std::string config_file;

    // --- simulate -----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "synthesize a hologram from a sample object");
    bind_common(sim, cfg, config_file);
    sim->add_option("--z", cfg.z_true, "object distance z* in meters");
    sim->add_option("--noise-std", cfg.noise_std, "additive Gaussian intensity noise");
    sim->add_option("--noise-seed", cfg.noise_seed, "noise RNG seed");

    // --- reconstruct ---------------------------------------------------------
    auto* rec = app.add_subcommand("reconstruct", "run an optimization strategy on a hologram");
    std::string hologram_path;
    std::optional<double> z_known;
    bind_common(rec, cfg, config_file);
    rec->add_option("--hologram", hologram_path, "hologram PNG written by simulate")->required();
    rec->add_option("--strategy", cfg.strategy,
                    "known | random-include | random-exclude | non-weighted | alternating | "
                    "reverse-attention");
    rec->add_option("--z", z_known, "distance for the known-distance strategy (meters)");
    rec->add_option("--zmin", cfg.z_min, "candidate grid start (meters)");
    rec->add_option("--zmax", cfg.z_max, "candidate grid end (meters)");
    rec->add_option("--zstep", cfg.z_step, "candidate grid step (meters)");
    rec->add_option("--epochs", cfg.epochs, "optimization epochs");
    rec->add_option("--precision", cfg.precision, "f32 | f64");
    rec->add_option("--arch-stages", cfg.arch_stages, "encoder/decoder stage count");
    rec->add_option("--arch-base", cfg.arch_base, "base channel width");
    rec->add_option("--arch-kernel", cfg.arch_kernel, "conv kernel size (odd)");
    rec->add_flag("--no-normalize", "skip mean normalization of the hologram");

    // --- quadratic -----------------------------------------------------------
    auto* quad = app.add_subcommand("quadratic", "synthetic noisy quadratic convergence lab");
    holo::QuadraticCliOptions qopts;
    quad->add_option("--n", qopts.ns, "candidate counts (default 2 5 20 100)");
    quad->add_option("--seeds", qopts.seeds, "number of seeds per n");
    quad->add_option("--iterations", qopts.iterations, "gradient descent iterations");
    quad->add_option("--x0", qopts.x0, "starting iterate");
    quad->add_option("--dim", qopts.dim, "dimension of the optimization variable");
    quad->add_option("--threshold", qopts.rate_threshold, "loss-gap threshold for rate counts");
    quad->add_flag("--surface", qopts.surface, "export error-surface samples per n");
    quad->add_option("--out", qopts.out_dir, "output directory");

    // --- evaluate -------------------------------------------------------------
    auto* eval = app.add_subcommand("evaluate", "PSNR/SSIM of a test image against a reference");
    std::string ref_path, test_path, batch_dir, batch_csv = "metrics.csv";
    eval->add_option("reference", ref_path, "reference image (or use --batch)");
    eval->add_option("test", test_path, "test image");
    eval->add_option("--batch", batch_dir, "score every run directory under this root");
    eval->add_option("--out", batch_csv, "batch CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) {
            holo::ExperimentConfig file_cfg;
            file_cfg.apply(holo::parse_key_value_file(config_file));
            // CLI flags win over file values: re-apply only flags the user set.
            holo::ExperimentConfig defaults;
            auto cur = cfg.to_map();
            auto def = defaults.to_map();
            std::map<std::string, std::string> overrides;
            for (const auto& [k, v] : cur)
                if (def.at(k) != v) overrides[k] = v;
            file_cfg.apply(overrides);
            cfg = file_cfg;
        }

        if (sim->parsed()) {
            const auto out = holo::run_simulate(cfg);
            std::cout << "hologram: " << out.hologram_png << "\n"
                      << "metadata: " << out.sidecar_json << "\n"
                      << "object:   " << out.object_png << "\n";
        } else if (rec->parsed()) {
            if (rec->count("--no-normalize")) cfg.normalize = false;
            const auto out = holo::run_reconstruct(cfg, hologram_path, z_known);
            std::cout << "amplitude: " << out.amplitude_png << "\n"
                      << "phase:     " << out.phase_png << "\n"
                      << "trace:     " << out.trace_csv << "\n"
                      << "summary:   " << out.summary_json << "\n";
            if (out.predicted_distance)
                std::cout << "predicted distance: " << *out.predicted_distance << " m\n";
            if (out.psnr != 0.0)
                std::cout << "psnr: " << out.psnr << " dB  ssim: " << out.ssim << "\n";
            std::cout << "wall time: " << out.wall_time_seconds << " s\n";
        } else if (quad->parsed()) {
            const auto summary = holo::run_quadratic(qopts);
            std::cout << "summary: " << summary << "\n";
        } else if (eval->parsed()) {
            if (!batch_dir.empty()) {
                const auto csv = holo::run_evaluate_batch(batch_dir, batch_csv);
                std::cout << "metrics: " << csv << "\n";
            } else {
                if (ref_path.empty() || test_path.empty())
                    holo::fail("evaluate: need REFERENCE and TEST images (or --batch DIR)");
                const auto rec_out = holo::run_evaluate(ref_path, test_path);
                std::cout << "psnr: " << rec_out.psnr << " dB\nssim: " << rec_out.ssim << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '"') c = '\'';
        std::cerr << "{\"error\": \"" << msg << "\"}" << std::endl;
        return 1;
    }
    return 0;
}
