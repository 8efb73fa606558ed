#include "holo/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "holo/image_io.hpp"
#include "holo/metrics.hpp"
#include "holo/quadratic.hpp"
#include "holo/samples.hpp"
#include "holo/strategies.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace holo {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    fail("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

/// JSON cannot carry infinities; metric sentinels are serialized as strings.
json metric_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_manifest(const std::string& dir, const std::string& command,
                    const ExperimentConfig& cfg) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    for (const auto& [k, v] : cfg.to_map()) j["config"][k] = v;
    write_json(dir + "/manifest.json", j);
}

Image load_object_image(const ExperimentConfig& cfg) {
    if (!cfg.image_path.empty()) {
        Image im = read_image(cfg.image_path);
        if (im.height != cfg.size || im.width != cfg.size)
            im = resize_nearest(im, cfg.size, cfg.size);
        return im;
    }
    return make_sample(cfg.sample, cfg.size, cfg.seed);
}

ComplexField object_field(const ExperimentConfig& cfg, const Image& img) {
    OpticalConfig oc{cfg.wavelength, cfg.pitch, cfg.size, cfg.size};
    if (cfg.object_mode == "amplitude") return amplitude_object(oc, img.data, cfg.alpha);
    if (cfg.object_mode == "phase") return phase_object(oc, img.data, cfg.phase_max);
    fail("config: object_mode must be amplitude or phase, got '" + cfg.object_mode + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
    if (size < 16) fail("config: size must be >= 16");
    if (wavelength <= 0 || pitch <= 0) fail("config: wavelength and pitch must be positive");
    if (z_step <= 0) fail("config: z_step must be positive");
    if (epochs < 1) fail("config: epochs must be >= 1");
    if (precision != "f32" && precision != "f64")
        fail("config: precision must be f32 or f64, got '" + precision + "'");
    if (alpha < 0 || alpha > 1) fail("config: alpha must be in [0,1]");
    StrategyKind::parse(strategy);  // throws on unknown names
}

void ExperimentConfig::apply(const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "sample") sample = v;
        else if (k == "image") image_path = v;
        else if (k == "size") size = static_cast<int>(parse_int(k, v));
        else if (k == "alpha") alpha = parse_double(k, v);
        else if (k == "object_mode") object_mode = v;
        else if (k == "phase_max") phase_max = parse_double(k, v);
        else if (k == "wavelength") wavelength = parse_double(k, v);
        else if (k == "pitch") pitch = parse_double(k, v);
        else if (k == "z_true") z_true = parse_double(k, v);
        else if (k == "z_min") z_min = parse_double(k, v);
        else if (k == "z_max") z_max = parse_double(k, v);
        else if (k == "z_step") z_step = parse_double(k, v);
        else if (k == "strategy") strategy = v;
        else if (k == "epochs") epochs = static_cast<int>(parse_int(k, v));
        else if (k == "seed") seed = static_cast<uint64_t>(parse_int(k, v));
        else if (k == "precision") precision = v;
        else if (k == "arch_stages") arch_stages = static_cast<int>(parse_int(k, v));
        else if (k == "arch_base") arch_base = static_cast<int>(parse_int(k, v));
        else if (k == "arch_kernel") arch_kernel = static_cast<int>(parse_int(k, v));
        else if (k == "noise_std") noise_std = parse_double(k, v);
        else if (k == "noise_seed") noise_seed = static_cast<uint64_t>(parse_int(k, v));
        else if (k == "normalize") normalize = parse_bool(k, v);
        else if (k == "out_dir") out_dir = v;
        else fail("config: unknown key '" + k + "'");
    }
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
    return {
        {"sample", sample},
        {"image", image_path},
        {"size", std::to_string(size)},
        {"alpha", fmt_double(alpha)},
        {"object_mode", object_mode},
        {"phase_max", fmt_double(phase_max)},
        {"wavelength", fmt_double(wavelength)},
        {"pitch", fmt_double(pitch)},
        {"z_true", fmt_double(z_true)},
        {"z_min", fmt_double(z_min)},
        {"z_max", fmt_double(z_max)},
        {"z_step", fmt_double(z_step)},
        {"strategy", strategy},
        {"epochs", std::to_string(epochs)},
        {"seed", std::to_string(seed)},
        {"precision", precision},
        {"arch_stages", std::to_string(arch_stages)},
        {"arch_base", std::to_string(arch_base)},
        {"arch_kernel", std::to_string(arch_kernel)},
        {"noise_std", fmt_double(noise_std)},
        {"noise_seed", std::to_string(noise_seed)},
        {"normalize", normalize ? "1" : "0"},
        {"out_dir", out_dir},
    };
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("config: '" + path + "' line " + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string output_root() {
    if (const char* env = std::getenv(kOutRootEnv); env && *env) return env;
    return "runs";
}

SimulateOutputs run_simulate(const ExperimentConfig& cfg) {
    cfg.validate();
    const Image img = load_object_image(cfg);
    const ComplexField t = object_field(cfg, img);
    Hologram holo = synthesize_hologram(t, cfg.z_true, cfg.noise_std, cfg.noise_seed);

    const std::string dir =
        cfg.out_dir.empty() ? output_root() + "/simulate-" + cfg.sample + "-s" +
                                  std::to_string(cfg.seed)
                            : cfg.out_dir;
    fs::create_directories(dir);

    // Quantize to 16 bits against the peak; the sidecar records the scale so
    // reconstruction recovers physical intensities.
    const double peak = *std::max_element(holo.intensity.begin(), holo.intensity.end());
    Image holo_img = Image::zeros(holo.config.height, holo.config.width);
    for (size_t i = 0; i < holo.intensity.size(); ++i)
        holo_img.data[i] = peak > 0 ? holo.intensity[i] / peak : 0.0;

    SimulateOutputs out;
    out.hologram_png = dir + "/hologram.png";
    out.sidecar_json = dir + "/hologram.json";
    out.object_png = dir + "/object_amplitude.png";
    out.manifest_json = dir + "/manifest.json";

    write_png16(out.hologram_png, holo_img);

    Image object_amp = Image::zeros(cfg.size, cfg.size);
    for (size_t i = 0; i < object_amp.data.size(); ++i)
        object_amp.data[i] = std::hypot(t.real[i], t.imag[i]);
    write_png16(out.object_png, min_max_scale(object_amp));

    json sidecar;
    sidecar["wavelength"] = cfg.wavelength;
    sidecar["pitch"] = cfg.pitch;
    sidecar["height"] = holo.config.height;
    sidecar["width"] = holo.config.width;
    sidecar["z_true"] = cfg.z_true;
    sidecar["intensity_scale"] = peak;
    sidecar["noise_std"] = cfg.noise_std;
    sidecar["noise_seed"] = cfg.noise_seed;
    sidecar["normalize"] = cfg.normalize;
    sidecar["alpha"] = cfg.alpha;
    sidecar["object_mode"] = cfg.object_mode;
    sidecar["sample"] = cfg.image_path.empty() ? cfg.sample : cfg.image_path;
    sidecar["object_image"] = "object_amplitude.png";
    sidecar["seed"] = cfg.seed;
    sidecar["version"] = kVersion;
    write_json(out.sidecar_json, sidecar);
    write_manifest(dir, "simulate", cfg);
    return out;
}

namespace {

Hologram load_hologram(const std::string& hologram_png, json& sidecar_out) {
    const fs::path png_path(hologram_png);
    fs::path sidecar_path = png_path;
    sidecar_path.replace_extension(".json");
    const json sidecar = read_json(sidecar_path.string());
    const Image img = read_image(hologram_png);

    Hologram h;
    h.config.wavelength = sidecar.at("wavelength").get<double>();
    h.config.pixel_pitch = sidecar.at("pitch").get<double>();
    h.config.height = sidecar.at("height").get<int>();
    h.config.width = sidecar.at("width").get<int>();
    h.true_distance = sidecar.at("z_true").get<double>();
    if (img.height != h.config.height || img.width != h.config.width)
        fail("hologram '" + hologram_png + "' does not match its sidecar dimensions");
    const double scale = sidecar.at("intensity_scale").get<double>();
    h.intensity.resize(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) h.intensity[i] = img.data[i] * scale;
    sidecar_out = sidecar;
    return h;
}

void write_trace_csv(const std::string& path, const std::vector<double>& distances,
                     const std::vector<CandidateLossReport>& traces) {
    std::ofstream out(path);
    if (!out) fail("cannot write '" + path + "'");
    out << "epoch,z_m,loss,weight,total\n";
    out << std::setprecision(12);
    for (const auto& row : traces)
        for (size_t i = 0; i < row.losses.size(); ++i)
            out << row.epoch << "," << distances[i] << "," << row.losses[i] << ","
                << row.weights[i] << "," << row.total << "\n";
}

template <typename T>
ReconstructOutputs reconstruct_typed(const ExperimentConfig& cfg, const Hologram& holo,
                                     const json& sidecar, const CandidateSet& candidates,
                                     const std::string& dir) {
    ReconstructOptions opts;
    opts.epochs = cfg.epochs;
    opts.seed = cfg.seed;
    opts.arch_stages = cfg.arch_stages;
    opts.arch_base_channels = cfg.arch_base;
    opts.arch_kernel = cfg.arch_kernel;
    opts.normalize = cfg.normalize;

    const StrategyKind strategy = StrategyKind::parse(cfg.strategy);

    ReconstructionResult res;
    try {
        res = reconstruct<T>(holo, candidates, strategy, opts);
    } catch (const ReconstructionAborted& e) {
        // Partial trace for post-mortem, then propagate the error status.
        write_trace_csv(dir + "/trace.csv", candidates.distances, e.partial_traces);
        throw;
    }

    ReconstructOutputs out;
    out.amplitude_png = dir + "/amplitude.png";
    out.phase_png = dir + "/phase.png";
    out.trace_csv = dir + "/trace.csv";
    out.summary_json = dir + "/summary.json";
    out.manifest_json = dir + "/manifest.json";
    out.predicted_distance = res.predicted_distance;
    out.wall_time_seconds = res.wall_time_seconds;

    write_png16(out.amplitude_png, amplitude_image(res.object_estimate));
    write_phase_png16(out.phase_png, phase_image(res.object_estimate));
    write_trace_csv(out.trace_csv, res.candidate_distances, res.traces);

    json summary;
    summary["strategy"] = strategy.name();
    summary["epochs"] = res.epochs;
    summary["seed"] = res.seed;
    summary["precision"] = cfg.precision;
    summary["wall_time_seconds"] = res.wall_time_seconds;
    summary["candidates"] = res.candidate_distances;
    if (res.predicted_distance) summary["predicted_distance"] = *res.predicted_distance;
    summary["final_losses"] = res.traces.back().losses;
    summary["final_weights"] = res.traces.back().weights;

    // Score against the recorded ground truth when it is still readable.
    if (sidecar.contains("object_image")) {
        const fs::path gt = fs::path(sidecar.value("__dir__", ".")) /
                            sidecar.at("object_image").get<std::string>();
        if (fs::exists(gt)) {
            const Image truth = read_image(gt.string());
            const Score score = score_reconstruction(res.object_estimate, truth);
            out.psnr = score.psnr;
            out.ssim = score.ssim;
            summary["psnr"] = metric_json(score.psnr);
            summary["ssim"] = metric_json(score.ssim);
            summary["reference_image"] = gt.string();
            summary["amplitude_image"] = out.amplitude_png;
        }
    }
    write_json(out.summary_json, summary);
    return out;
}

}  // namespace

ReconstructOutputs run_reconstruct(const ExperimentConfig& cfg, const std::string& hologram_png,
                                   std::optional<double> z_known) {
    cfg.validate();
    json sidecar;
    const Hologram holo = load_hologram(hologram_png, sidecar);
    sidecar["__dir__"] = fs::path(hologram_png).parent_path().string();

    const StrategyKind strategy = StrategyKind::parse(cfg.strategy);
    CandidateSet candidates;
    if (strategy.kind == StrategyKind::Kind::known_distance) {
        candidates.distances = {z_known.value_or(holo.true_distance)};
        candidates.true_index = 0;
    } else {
        candidates = CandidateSet::from_range(cfg.z_min, cfg.z_max, cfg.z_step,
                                              holo.true_distance);
    }

    const std::string dir =
        cfg.out_dir.empty() ? output_root() + "/reconstruct-" + cfg.strategy + "-s" +
                                  std::to_string(cfg.seed)
                            : cfg.out_dir;
    fs::create_directories(dir);
    write_manifest(dir, "reconstruct", cfg);

    if (cfg.precision == "f64")
        return reconstruct_typed<double>(cfg, holo, sidecar, candidates, dir);
    return reconstruct_typed<float>(cfg, holo, sidecar, candidates, dir);
}

std::string run_quadratic(const QuadraticCliOptions& opts) {
    const std::string dir = opts.out_dir.empty() ? output_root() + "/quadratic" : opts.out_dir;
    fs::create_directories(dir);

    auto write_trace = [&](const DescentTrace& t, const std::string& path) {
        std::ofstream out(path);
        if (!out) fail("cannot write '" + path + "'");
        out << "iteration,x,member,loss,weight,total\n";
        out << std::setprecision(12);
        for (size_t k = 0; k < t.total.size(); ++k)
            for (size_t i = 0; i < t.member_losses[k].size(); ++i)
                out << k << "," << t.x[k][0] << "," << i << "," << t.member_losses[k][i] << ","
                    << t.weights[k][i] << "," << t.total[k] << "\n";
    };

    const std::string summary_path = dir + "/summary.csv";
    std::ofstream summary(summary_path);
    if (!summary) fail("cannot write '" + summary_path + "'");
    summary << "n,seed,k_ground,k_ra,ratio,final_x_ra,final_dist_to_xstar\n";
    summary << std::setprecision(12);

    DescentOptions dopts;
    dopts.x0 = opts.x0;
    dopts.iterations = opts.iterations;

    for (int n : opts.ns) {
        for (int s = 1; s <= opts.seeds; ++s) {
            const auto ensemble = generate_ensemble(n, static_cast<uint64_t>(s), opts.dim);
            const auto ground = descend(ensemble, QuadraticLoss::ground, dopts);
            const auto ra = descend(ensemble, QuadraticLoss::reverse_attention, dopts);
            const auto [kg, kr] = compare_rates(ground, ra, opts.rate_threshold);
            const double xstar = ensemble.ground_minimizer();
            const double xK = ra.x.back()[0];
            summary << n << "," << s << "," << kg << "," << kr << ","
                    << (kg > 0 ? kr / kg : std::numeric_limits<double>::infinity()) << "," << xK
                    << "," << std::abs(xK - xstar) << "\n";
            write_trace(ground, dir + "/trace-n" + std::to_string(n) + "-s" + std::to_string(s) +
                                    "-ground.csv");
            write_trace(ra, dir + "/trace-n" + std::to_string(n) + "-s" + std::to_string(s) +
                                "-ra.csv");

            if (opts.surface && s == 1) {
                // Error-surface samples over an x grid for plotting.
                std::ofstream surf(dir + "/surface-n" + std::to_string(n) + ".csv");
                surf << "x";
                for (int i = 0; i < n; ++i) surf << ",f" << i;
                surf << ",ground,ra_total\n";
                surf << std::setprecision(12);
                for (double x = -8.0; x <= 8.0 + 1e-9; x += 0.05) {
                    std::vector<double> xv(static_cast<size_t>(opts.dim), x);
                    std::vector<double> losses(n);
                    for (int i = 0; i < n; ++i) losses[i] = ensemble.member_value(i, xv);
                    const auto w = reverse_attention_weights(losses);
                    double total = 0;
                    for (int i = 0; i < n; ++i) total += w[i] * losses[i];
                    surf << x;
                    for (int i = 0; i < n; ++i) surf << "," << losses[i];
                    surf << "," << losses[ensemble.ground_index] << "," << total << "\n";
                }
            }
        }
    }
    return summary_path;
}

EvaluateRecord run_evaluate(const std::string& reference_path, const std::string& test_path) {
    const Image ref = read_image(reference_path);
    const Image test = read_image(test_path);
    ImagePair pair{ref, test};
    return {psnr(pair), ssim(pair)};
}

std::string run_evaluate_batch(const std::string& results_dir, const std::string& out_csv) {
    if (!fs::is_directory(results_dir)) fail("evaluate: '" + results_dir + "' is not a directory");
    std::vector<fs::path> runs;
    for (const auto& entry : fs::directory_iterator(results_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "summary.json"))
            runs.push_back(entry.path());
    std::sort(runs.begin(), runs.end());

    std::ofstream out(out_csv);
    if (!out) fail("cannot write '" + out_csv + "'");
    out << "run,psnr,ssim\n";
    out << std::setprecision(12);
    for (const auto& run : runs) {
        const json summary = read_json((run / "summary.json").string());
        double p = std::numeric_limits<double>::quiet_NaN();
        double s = std::numeric_limits<double>::quiet_NaN();
        if (summary.contains("reference_image") && summary.contains("amplitude_image") &&
            fs::exists(summary.at("reference_image").get<std::string>()) &&
            fs::exists(summary.at("amplitude_image").get<std::string>())) {
            const auto rec = run_evaluate(summary.at("reference_image").get<std::string>(),
                                          summary.at("amplitude_image").get<std::string>());
            p = rec.psnr;
            s = rec.ssim;
        } else if (summary.contains("psnr") && summary.at("psnr").is_number()) {
            p = summary.at("psnr").get<double>();
            s = summary.at("ssim").get<double>();
        }
        out << run.filename().string() << "," << p << "," << s << "\n";
    }
    return out_csv;
}

}  // namespace holo
