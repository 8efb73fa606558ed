#pragma once

#include <cstdint>
#include <vector>

#include "holo/common.hpp"
#include "holo/tensor.hpp"

namespace holo {

/// Sensor/illumination geometry shared by fields, kernels and holograms.
struct OpticalConfig {
    double wavelength = 532e-9;  // meters
    double pixel_pitch = 2e-6;   // meters
    int height = 0;
    int width = 0;

    void validate() const;
    bool operator==(const OpticalConfig&) const = default;
    long long pixels() const { return static_cast<long long>(height) * width; }
};

/// 2-D complex wavefront sampled on the pixel grid.
struct ComplexField {
    OpticalConfig config;
    std::vector<double> real, imag;

    static ComplexField zeros(const OpticalConfig& c);
    void validate() const;
};

/// Angular-spectrum transfer function for one propagation distance, on the
/// standard DFT frequency layout (DC at index 0). Phase-only on the
/// propagating band, zero on the evanescent band.
struct PropagationKernel {
    OpticalConfig config;
    double distance = 0.0;  // meters, signed
    std::vector<double> real, imag;
};

/// Recorded in-line hologram intensity. true_distance is simulation metadata
/// and is not consumed by reconstruction.
struct Hologram {
    OpticalConfig config;
    std::vector<double> intensity;
    double true_distance = 0.0;

    void validate() const;
    double mean() const;
};

/// transfer(fx,fy) = exp(2*pi*j*z/lambda * sqrt(1-(lambda*fx)^2-(lambda*fy)^2)),
/// zero where the sqrt argument is negative. kernel(-z) == conj(kernel(z))
/// exactly by construction.
PropagationKernel make_kernel(const OpticalConfig& config, double z);

/// Free-space propagation over distance z (negative z back-propagates):
/// IFFT( kernel .* FFT(field) ).
ComplexField propagate(const ComplexField& field, const PropagationKernel& kernel);
ComplexField propagate(const ComplexField& field, double z, bool pad2x = false);

/// Amplitude-only transmittance from a normalized image: t = 1 - alpha*img.
ComplexField amplitude_object(const OpticalConfig& config, const std::vector<double>& image01,
                              double alpha = 0.9);

/// Unit-magnitude phase object: t = exp(j * phase_max * img).
ComplexField phase_object(const OpticalConfig& config, const std::vector<double>& image01,
                          double phase_max);

/// In-line hologram of a thin transmittance under a unit plane reference
/// wave: intensity = |propagate(t, z)|^2, optionally with additive Gaussian
/// noise (clamped at zero).
Hologram synthesize_hologram(const ComplexField& transmittance, double z,
                             double noise_std = 0.0, uint64_t noise_seed = 0);

/// Divide intensity by its mean so hologram losses are scale-comparable.
void normalize_mean(Hologram& h);

/// Total intensity restricted to the propagating band of the given config
/// (evanescent frequencies excluded); invariant under propagation.
double propagating_band_energy(const ComplexField& field);

/// Kernel as a constant [2,H,W] tensor for use inside the autodiff graph.
template <typename T>
Tensor<T> kernel_tensor(const PropagationKernel& k) {
    const size_t n = k.real.size();
    std::vector<T> data(2 * n);
    for (size_t i = 0; i < n; ++i) {
        data[i] = static_cast<T>(k.real[i]);
        data[n + i] = static_cast<T>(k.imag[i]);
    }
    return Tensor<T>::from({2, k.config.height, k.config.width}, std::move(data));
}

/// Differentiable counterpart of propagate() for a [2,H,W] field tensor;
/// the kernel is a constant with respect to the graph.
template <typename T>
Tensor<T> differentiable_propagate(const Tensor<T>& field, const PropagationKernel& kernel) {
    const auto& sh = field.shape();
    if (sh.size() != 3 || sh[0] != 2 || sh[1] != kernel.config.height ||
        sh[2] != kernel.config.width)
        fail("differentiable_propagate: field " + shape_str(sh) + " does not match kernel grid " +
             std::to_string(kernel.config.height) + "x" + std::to_string(kernel.config.width));
    return ifft2c(complex_mul(fft2c(field), kernel_tensor<T>(kernel)));
}

}  // namespace holo
