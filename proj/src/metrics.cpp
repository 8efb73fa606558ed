#include "holo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace holo {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::vector<double> gaussian_window() {
    std::vector<double> w(kWindow * kWindow);
    const int c = kWindow / 2;
    double sum = 0;
    for (int i = 0; i < kWindow; ++i)
        for (int j = 0; j < kWindow; ++j) {
            const double d2 = (i - c) * (i - c) + (j - c) * (j - c);
            w[i * kWindow + j] = std::exp(-d2 / (2.0 * kSigma * kSigma));
            sum += w[i * kWindow + j];
        }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

void ImagePair::validate() const {
    if (reference.height != test.height || reference.width != test.width)
        fail("ImagePair: shape mismatch " + std::to_string(reference.height) + "x" +
             std::to_string(reference.width) + " vs " + std::to_string(test.height) + "x" +
             std::to_string(test.width));
    if (reference.height < 1 || reference.width < 1) fail("ImagePair: empty images");
}

double psnr(const ImagePair& pair) {
    pair.validate();
    double se = 0;
    const size_t n = pair.reference.data.size();
    for (size_t i = 0; i < n; ++i) {
        const double d = clamp01(pair.reference.data[i]) - clamp01(pair.test.data[i]);
        se += d * d;
    }
    const double mse = se / static_cast<double>(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImagePair& pair) {
    pair.validate();
    const int h = pair.reference.height, w = pair.reference.width;
    if (h < kWindow || w < kWindow)
        fail("ssim: image " + std::to_string(h) + "x" + std::to_string(w) +
             " smaller than the " + std::to_string(kWindow) + "x" + std::to_string(kWindow) +
             " window");
    static const std::vector<double> win = gaussian_window();
    const double c1 = kK1 * kK1;  // (K1*L)^2 with L = 1
    const double c2 = kK2 * kK2;

    std::vector<double> a(pair.reference.data.size()), b(pair.test.data.size());
    for (size_t i = 0; i < a.size(); ++i) {
        a[i] = clamp01(pair.reference.data[i]);
        b[i] = clamp01(pair.test.data[i]);
    }

    double total = 0;
    long long count = 0;
    for (int i = 0; i + kWindow <= h; ++i) {
        for (int j = 0; j + kWindow <= w; ++j) {
            double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
            for (int u = 0; u < kWindow; ++u)
                for (int v = 0; v < kWindow; ++v) {
                    const double g = win[u * kWindow + v];
                    const double x = a[(i + u) * w + (j + v)];
                    const double y = b[(i + u) * w + (j + v)];
                    ma += g * x;
                    mb += g * y;
                    saa += g * x * x;
                    sbb += g * y * y;
                    sab += g * x * y;
                }
            const double va = saa - ma * ma;
            const double vb = sbb - mb * mb;
            const double cov = sab - ma * mb;
            const double num = (2 * ma * mb + c1) * (2 * cov + c2);
            const double den = (ma * ma + mb * mb + c1) * (va + vb + c2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

Image amplitude_image(const ComplexField& field) {
    Image im = Image::zeros(field.config.height, field.config.width);
    for (size_t i = 0; i < im.data.size(); ++i)
        im.data[i] = std::hypot(field.real[i], field.imag[i]);
    return min_max_scale(im);
}

Image phase_image(const ComplexField& field) {
    Image im = Image::zeros(field.config.height, field.config.width);
    for (size_t i = 0; i < im.data.size(); ++i)
        im.data[i] = std::atan2(field.imag[i], field.real[i]);
    return im;
}

Score score_reconstruction(const ComplexField& object, const Image& truth) {
    ImagePair pair{min_max_scale(truth), amplitude_image(object)};
    return {psnr(pair), ssim(pair)};
}

}  // namespace holo
