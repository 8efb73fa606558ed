#pragma once

#include <vector>

#include "holo/common.hpp"

namespace holo {

/// Plain grayscale raster, row-major, values nominally in [0,1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    static Image zeros(int h, int w) {
        Image im;
        im.height = h;
        im.width = w;
        im.data.assign(static_cast<size_t>(h) * w, 0.0);
        return im;
    }

    double& at(int i, int j) { return data[static_cast<size_t>(i) * width + j]; }
    double at(int i, int j) const { return data[static_cast<size_t>(i) * width + j]; }
    long long pixels() const { return static_cast<long long>(height) * width; }
};

/// Affine rescale to [0,1]; a constant image maps to all zeros.
Image min_max_scale(const Image& im);

/// Nearest-neighbor resampling to an arbitrary target size.
Image resize_nearest(const Image& im, int out_h, int out_w);

}  // namespace holo
