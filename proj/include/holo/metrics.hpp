#pragma once

#include "holo/image.hpp"
#include "holo/optics.hpp"

namespace holo {

/// Reference/test pair for scoring; values are clamped to [0,1].
struct ImagePair {
    Image reference;
    Image test;

    void validate() const;
};

/// 10*log10(1/MSE) with unit dynamic range; identical images report the
/// +infinity sentinel.
double psnr(const ImagePair& pair);

/// Mean local SSIM, Gaussian window 11x11 sigma 1.5, K1=0.01, K2=0.03,
/// dynamic range 1 (the standard constants). Requires images at least the
/// window size; statistics use valid (un-padded) windows only.
double ssim(const ImagePair& pair);

/// Displayed/scored quantity of a reconstruction: amplitude |field|,
/// min-max scaled to [0,1].
Image amplitude_image(const ComplexField& field);

/// Phase of a field in [-pi, pi].
Image phase_image(const ComplexField& field);

struct Score {
    double psnr = 0.0;
    double ssim = 0.0;
};

/// PSNR/SSIM of a reconstructed field against a ground-truth image in [0,1]
/// (both sides min-max scaled).
Score score_reconstruction(const ComplexField& object, const Image& truth);

}  // namespace holo
