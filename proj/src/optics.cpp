#include "holo/optics.hpp"

#include <cmath>

#include "holo/fft.hpp"

namespace holo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

/// DFT frequency for index k of an axis with n samples at the given pitch.
double fft_freq(int k, int n, double pitch) {
    const int half = (n - 1) / 2;
    const int signed_k = k <= half ? k : k - n;
    return static_cast<double>(signed_k) / (static_cast<double>(n) * pitch);
}
}  // namespace

void OpticalConfig::validate() const {
    if (wavelength <= 0) fail("OpticalConfig: wavelength must be positive");
    if (pixel_pitch <= 0) fail("OpticalConfig: pixel_pitch must be positive");
    if (height < 2 || width < 2) fail("OpticalConfig: grid dims must be >= 2");
}

ComplexField ComplexField::zeros(const OpticalConfig& c) {
    c.validate();
    ComplexField f;
    f.config = c;
    f.real.assign(static_cast<size_t>(c.pixels()), 0.0);
    f.imag.assign(static_cast<size_t>(c.pixels()), 0.0);
    return f;
}

void ComplexField::validate() const {
    config.validate();
    if (real.size() != static_cast<size_t>(config.pixels()) || real.size() != imag.size())
        fail("ComplexField: buffer sizes do not match grid");
}

void Hologram::validate() const {
    config.validate();
    if (intensity.size() != static_cast<size_t>(config.pixels()))
        fail("Hologram: buffer size does not match grid");
    for (double v : intensity)
        if (!(v >= 0.0)) fail("Hologram: intensity must be non-negative and finite");
}

double Hologram::mean() const {
    double s = 0;
    for (double v : intensity) s += v;
    return s / static_cast<double>(intensity.size());
}

PropagationKernel make_kernel(const OpticalConfig& config, double z) {
    config.validate();
    PropagationKernel k;
    k.config = config;
    k.distance = z;
    const size_t n = static_cast<size_t>(config.pixels());
    k.real.resize(n);
    k.imag.resize(n);
    const double lam = config.wavelength;
    // Phase is built from |z| and the sign applied to the imaginary part, so
    // kernel(-z) == conj(kernel(z)) holds bit-for-bit.
    const double phase_scale = kTwoPi * std::abs(z) / lam;
    const double sign = z < 0 ? -1.0 : 1.0;
    size_t idx = 0;
    for (int i = 0; i < config.height; ++i) {
        const double fy = fft_freq(i, config.height, config.pixel_pitch);
        const double ly2 = (lam * fy) * (lam * fy);
        for (int j = 0; j < config.width; ++j, ++idx) {
            const double fx = fft_freq(j, config.width, config.pixel_pitch);
            const double arg = 1.0 - (lam * fx) * (lam * fx) - ly2;
            if (arg < 0.0) {  // evanescent: zeroed rather than decayed
                k.real[idx] = 0.0;
                k.imag[idx] = 0.0;
            } else {
                const double phase = phase_scale * std::sqrt(arg);
                k.real[idx] = std::cos(phase);
                k.imag[idx] = sign * std::sin(phase);
            }
        }
    }
    return k;
}

ComplexField propagate(const ComplexField& field, const PropagationKernel& kernel) {
    field.validate();
    if (!(field.config == kernel.config))
        fail("propagate: field and kernel configs differ");
    const int h = field.config.height, w = field.config.width;
    const size_t n = static_cast<size_t>(field.config.pixels());
    ComplexField out;
    out.config = field.config;
    out.real.resize(n);
    out.imag.resize(n);
    fft::fft2d(field.real.data(), field.imag.data(), out.real.data(), out.imag.data(), h, w);
    for (size_t i = 0; i < n; ++i) {
        const double re = out.real[i] * kernel.real[i] - out.imag[i] * kernel.imag[i];
        const double im = out.real[i] * kernel.imag[i] + out.imag[i] * kernel.real[i];
        out.real[i] = re;
        out.imag[i] = im;
    }
    fft::ifft2d(out.real.data(), out.imag.data(), out.real.data(), out.imag.data(), h, w);
    return out;
}

ComplexField propagate(const ComplexField& field, double z, bool pad2x) {
    if (!pad2x) return propagate(field, make_kernel(field.config, z));

    field.validate();
    OpticalConfig big = field.config;
    big.height *= 2;
    big.width *= 2;
    ComplexField padded = ComplexField::zeros(big);
    const int h = field.config.height, w = field.config.width;
    const int oi = h / 2, oj = w / 2;
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            padded.real[(i + oi) * big.width + (j + oj)] = field.real[i * w + j];
            padded.imag[(i + oi) * big.width + (j + oj)] = field.imag[i * w + j];
        }
    ComplexField prop = propagate(padded, make_kernel(big, z));
    ComplexField out;
    out.config = field.config;
    out.real.resize(field.real.size());
    out.imag.resize(field.imag.size());
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
            out.real[i * w + j] = prop.real[(i + oi) * big.width + (j + oj)];
            out.imag[i * w + j] = prop.imag[(i + oi) * big.width + (j + oj)];
        }
    return out;
}

ComplexField amplitude_object(const OpticalConfig& config, const std::vector<double>& image01,
                              double alpha) {
    config.validate();
    if (image01.size() != static_cast<size_t>(config.pixels()))
        fail("amplitude_object: image size does not match grid");
    if (alpha < 0.0 || alpha > 1.0) fail("amplitude_object: alpha must be in [0,1]");
    ComplexField f = ComplexField::zeros(config);
    for (size_t i = 0; i < image01.size(); ++i) f.real[i] = 1.0 - alpha * image01[i];
    return f;
}

ComplexField phase_object(const OpticalConfig& config, const std::vector<double>& image01,
                          double phase_max) {
    config.validate();
    if (image01.size() != static_cast<size_t>(config.pixels()))
        fail("phase_object: image size does not match grid");
    ComplexField f = ComplexField::zeros(config);
    for (size_t i = 0; i < image01.size(); ++i) {
        const double p = phase_max * image01[i];
        f.real[i] = std::cos(p);
        f.imag[i] = std::sin(p);
    }
    return f;
}

Hologram synthesize_hologram(const ComplexField& transmittance, double z, double noise_std,
                             uint64_t noise_seed) {
    transmittance.validate();
    for (size_t i = 0; i < transmittance.real.size(); ++i) {
        const double m2 = transmittance.real[i] * transmittance.real[i] +
                          transmittance.imag[i] * transmittance.imag[i];
        if (m2 > 1.0 + 1e-9)
            fail("synthesize_hologram: transmittance magnitude exceeds 1");
    }
    ComplexField at_sensor = propagate(transmittance, make_kernel(transmittance.config, z));
    Hologram h;
    h.config = transmittance.config;
    h.true_distance = z;
    h.intensity.resize(at_sensor.real.size());
    for (size_t i = 0; i < h.intensity.size(); ++i)
        h.intensity[i] = at_sensor.real[i] * at_sensor.real[i] +
                         at_sensor.imag[i] * at_sensor.imag[i];
    if (noise_std > 0.0) {
        Rng rng(noise_seed);
        for (double& v : h.intensity) v = std::max(0.0, v + noise_std * rng.normal());
    }
    return h;
}

void normalize_mean(Hologram& h) {
    const double m = h.mean();
    if (!(m > 0.0)) fail("normalize_mean: hologram mean must be positive");
    for (double& v : h.intensity) v /= m;
}

double propagating_band_energy(const ComplexField& field) {
    field.validate();
    const int h = field.config.height, w = field.config.width;
    const size_t n = static_cast<size_t>(field.config.pixels());
    std::vector<double> re(n), im(n);
    fft::fft2d(field.real.data(), field.imag.data(), re.data(), im.data(), h, w);
    const double lam = field.config.wavelength;
    double energy = 0;
    size_t idx = 0;
    for (int i = 0; i < h; ++i) {
        const double fy = fft_freq(i, h, field.config.pixel_pitch);
        for (int j = 0; j < w; ++j, ++idx) {
            const double fx = fft_freq(j, w, field.config.pixel_pitch);
            if (1.0 - (lam * fx) * (lam * fx) - (lam * fy) * (lam * fy) >= 0.0)
                energy += re[idx] * re[idx] + im[idx] * im[idx];
        }
    }
    // Parseval: spatial-domain energy = spectral energy / (h*w).
    return energy / static_cast<double>(n);
}

}  // namespace holo
