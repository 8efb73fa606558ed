#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "holo/optics.hpp"
#include "holo/samples.hpp"
#include "support/oracles.hpp"

using namespace holo;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

OpticalConfig paper_config(int n) { return {532e-9, 2e-6, n, n}; }

ComplexField random_field(const OpticalConfig& c, uint64_t seed) {
    ComplexField f = ComplexField::zeros(c);
    Rng rng(seed);
    for (size_t i = 0; i < f.real.size(); ++i) {
        f.real[i] = rng.uniform(-1.0, 1.0);
        f.imag[i] = rng.uniform(-1.0, 1.0);
    }
    return f;
}

double rms_diff(const ComplexField& a, const ComplexField& b) {
    double acc = 0;
    for (size_t i = 0; i < a.real.size(); ++i) {
        const double dr = a.real[i] - b.real[i];
        const double di = a.imag[i] - b.imag[i];
        acc += dr * dr + di * di;
    }
    return std::sqrt(acc / static_cast<double>(a.real.size()));
}

}  // namespace

TEST_CASE("kernel at z=0 is unity on the propagating band") {
    // Paper optics: the whole grid is propagating at this pitch/wavelength.
    auto k = make_kernel(paper_config(16), 0.0);
    for (size_t i = 0; i < k.real.size(); ++i) {
        CHECK(k.real[i] == 1.0);
        CHECK(k.imag[i] == 0.0);
    }
}

TEST_CASE("kernel DC phase matches scalar evaluation of the transfer function") {
    const double lam = 532e-9, z = 5000e-6;
    auto k = make_kernel(paper_config(32), z);
    const double phase = kTwoPi * z / lam;  // sqrt term is 1 at DC
    CHECK(k.real[0] == doctest::Approx(std::cos(phase)).epsilon(1e-9));
    CHECK(k.imag[0] == doctest::Approx(std::sin(phase)).epsilon(1e-9));
    CHECK(std::hypot(k.real[0], k.imag[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel is phase-only on the propagating band") {
    auto k = make_kernel(paper_config(32), 1234e-6);
    for (size_t i = 0; i < k.real.size(); ++i)
        CHECK(std::abs(std::hypot(k.real[i], k.imag[i]) - 1.0) < 1e-12);
}

TEST_CASE("kernel magnitude never exceeds 1 (evanescent band zeroed)") {
    // Sub-wavelength pitch so an evanescent band exists.
    OpticalConfig c{532e-9, 0.2e-6, 32, 32};
    auto k = make_kernel(c, 100e-6);
    bool saw_zero = false;
    for (size_t i = 0; i < k.real.size(); ++i) {
        const double mag = std::hypot(k.real[i], k.imag[i]);
        CHECK(mag <= 1.0 + 1e-12);
        if (mag == 0.0) saw_zero = true;
    }
    CHECK(saw_zero);
    CHECK(std::hypot(k.real[0], k.imag[0]) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel conjugacy: kernel(-z) == conj(kernel(z)) exactly") {
    for (double z : {137e-6, 5000e-6}) {
        auto kp = make_kernel(paper_config(17), z);  // odd grid too
        auto kn = make_kernel(paper_config(17), -z);
        for (size_t i = 0; i < kp.real.size(); ++i) {
            CHECK(kn.real[i] == kp.real[i]);
            CHECK(kn.imag[i] == -kp.imag[i]);
        }
    }
}

TEST_CASE("propagate at z=0 is the identity") {
    auto f = random_field(paper_config(32), 5);
    auto g = propagate(f, 0.0);
    CHECK(rms_diff(f, g) < 1e-12);
}

TEST_CASE("round trip propagate(z) then propagate(-z) recovers the field") {
    auto f = random_field(paper_config(64), 6);
    auto there = propagate(f, 800e-6);
    auto back = propagate(there, -800e-6);
    CHECK(rms_diff(f, back) < 1e-6);

    // With an evanescent band present, the round trip holds after
    // band-limiting (propagate at z=0 removes evanescent content).
    OpticalConfig sub{532e-9, 0.2e-6, 32, 32};
    auto raw = random_field(sub, 7);
    auto band_limited = propagate(raw, 0.0);
    auto rt = propagate(propagate(band_limited, 50e-6), -50e-6);
    CHECK(rms_diff(band_limited, rt) < 1e-6);
}

TEST_CASE("energy on the propagating band is conserved") {
    for (auto [pitch, z] : {std::pair{2e-6, 3000e-6}, std::pair{0.2e-6, 40e-6}}) {
        OpticalConfig c{532e-9, pitch, 48, 48};
        auto f = random_field(c, 8);
        const double before = propagating_band_energy(f);
        const double after = propagating_band_energy(propagate(f, z));
        CHECK(std::abs(after - before) / before < 1e-6);
    }
}

TEST_CASE("composition: propagate(z1+z2) == propagate(z1) then propagate(z2)") {
    auto f = random_field(paper_config(32), 9);
    auto one_hop = propagate(f, 1100e-6);
    auto two_hop = propagate(propagate(f, 400e-6), 700e-6);
    CHECK(rms_diff(one_hop, two_hop) < 1e-9);
}

TEST_CASE("hologram of an empty object is unit intensity") {
    OpticalConfig c = paper_config(24);
    auto t = amplitude_object(c, std::vector<double>(24 * 24, 0.0), 0.9);
    auto h = synthesize_hologram(t, 2500e-6);
    CHECK(h.true_distance == 2500e-6);
    for (double v : h.intensity) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hologram rejects transmittance with magnitude > 1") {
    OpticalConfig c = paper_config(16);
    ComplexField t = ComplexField::zeros(c);
    for (auto& v : t.real) v = 1.2;
    CHECK_THROWS_AS(synthesize_hologram(t, 1e-3), Error);
}

TEST_CASE("paper-scale hologram synthesis (500x500) is finite and non-negative") {
    OpticalConfig c = paper_config(500);
    Image img = bar_target(500);
    auto h = synthesize_hologram(amplitude_object(c, img.data, 0.9), 5000e-6);
    h.validate();  // checks non-negativity
    normalize_mean(h);
    CHECK(h.mean() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("additive Gaussian noise stays non-negative and is seeded") {
    OpticalConfig c = paper_config(24);
    Image img = bar_target(24);
    auto t = amplitude_object(c, img.data, 0.9);
    auto a = synthesize_hologram(t, 1500e-6, 0.05, 42);
    auto b = synthesize_hologram(t, 1500e-6, 0.05, 42);
    auto d = synthesize_hologram(t, 1500e-6, 0.05, 43);
    a.validate();
    CHECK(a.intensity == b.intensity);
    CHECK(a.intensity != d.intensity);
}

TEST_CASE("32x32 hologram matches the brute-force diffraction-sum oracle") {
    const int n = 32;
    OpticalConfig c = paper_config(n);
    // centered opaque disk
    std::vector<double> img(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::hypot(i - n / 2.0, j - n / 2.0) <= 6.0) img[i * n + j] = 1.0;
    auto t = amplitude_object(c, img, 1.0);
    auto h = synthesize_hologram(t, 300e-6);

    std::vector<std::complex<double>> field0(n * n);
    for (int i = 0; i < n * n; ++i) field0[i] = {t.real[i], t.imag[i]};
    const auto oracle =
        oracles::brute_force_hologram(field0, n, c.wavelength, c.pixel_pitch, 300e-6);

    double num = 0, den = 0;
    for (int i = 0; i < n * n; ++i) {
        num += (h.intensity[i] - oracle[i]) * (h.intensity[i] - oracle[i]);
        den += oracle[i] * oracle[i];
    }
    CHECK(std::sqrt(num / den) < 1e-3);
    // and the pattern is a real fringe pattern, not flat
    const auto [lo, hi] = std::minmax_element(h.intensity.begin(), h.intensity.end());
    CHECK(*hi - *lo > 0.1);
}

TEST_CASE("differentiable_propagate matches the optics path") {
    OpticalConfig c = paper_config(16);
    auto f = random_field(c, 10);
    auto kernel = make_kernel(c, 640e-6);
    auto reference = propagate(f, kernel);

    std::vector<double> data(f.real);
    data.insert(data.end(), f.imag.begin(), f.imag.end());
    auto field = Tensor<double>::from({2, 16, 16}, std::move(data));
    auto out = differentiable_propagate(field, kernel);

    const size_t npix = f.real.size();
    for (size_t i = 0; i < npix; ++i) {
        CHECK(out.values()[i] == doctest::Approx(reference.real[i]).epsilon(1e-6));
        CHECK(out.values()[npix + i] == doctest::Approx(reference.imag[i]).epsilon(1e-6));
    }
}

TEST_CASE("differentiable_propagate gradient matches finite differences at 8x8") {
    OpticalConfig c = paper_config(8);
    auto kernel = make_kernel(c, 500e-6);
    holo::Rng rng(11);
    std::vector<double> data(2 * 8 * 8);
    for (auto& v : data) v = rng.uniform(-1.0, 1.0);
    auto field = Tensor<double>::param({2, 8, 8}, std::move(data));

    // total intensity of the propagated field
    auto loss = [&] { return sum(complex_abs2(differentiable_propagate(field, kernel))); };
    const auto res = oracles::fd_check(field, loss);
    CHECK(res.max_rel_err < 1e-4);
}

TEST_CASE("z=0 kernel gives the identity map with identity gradient") {
    OpticalConfig c = paper_config(8);
    auto kernel = make_kernel(c, 0.0);
    holo::Rng rng(12);
    std::vector<double> data(2 * 8 * 8);
    for (auto& v : data) v = rng.uniform(-1.0, 1.0);
    auto field = Tensor<double>::param({2, 8, 8}, data);

    auto out = differentiable_propagate(field, kernel);
    for (size_t i = 0; i < data.size(); ++i)
        CHECK(out.values()[i] == doctest::Approx(data[i]).epsilon(1e-12));

    sum(out).backward();
    for (double g : field.grad()) CHECK(g == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pad2x propagation agrees with plain propagation for compact fields") {
    // Short distance, small centered blob: wraparound is negligible, so the
    // padded (linear-convolution-like) and unpadded routes agree closely.
    OpticalConfig c = paper_config(64);
    ComplexField f = ComplexField::zeros(c);
    for (int i = 28; i < 36; ++i)
        for (int j = 28; j < 36; ++j) f.real[i * 64 + j] = 1.0;
    auto plain = propagate(f, 100e-6, false);
    auto padded = propagate(f, 100e-6, true);
    CHECK(rms_diff(plain, padded) < 1e-6);
}

TEST_CASE("config and hologram validation") {
    CHECK_THROWS_AS((OpticalConfig{-1.0, 2e-6, 8, 8}.validate()), Error);
    CHECK_THROWS_AS((OpticalConfig{532e-9, 2e-6, 1, 8}.validate()), Error);
    Hologram h;
    h.config = paper_config(4);
    h.intensity = {1.0, -0.5, 1.0, 1.0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(h.validate(), Error);
}
