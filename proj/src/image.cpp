#include "holo/image.hpp"

#include <algorithm>

namespace holo {

Image min_max_scale(const Image& im) {
    if (im.data.empty()) fail("min_max_scale: empty image");
    Image out = im;
    const auto [lo_it, hi_it] = std::minmax_element(im.data.begin(), im.data.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (double& v : out.data) v = (v - lo) * inv;
    } else {
        std::fill(out.data.begin(), out.data.end(), 0.0);
    }
    return out;
}

Image resize_nearest(const Image& im, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) fail("resize_nearest: bad target size");
    Image out = Image::zeros(out_h, out_w);
    for (int i = 0; i < out_h; ++i) {
        const int si = static_cast<int>(static_cast<long long>(i) * im.height / out_h);
        for (int j = 0; j < out_w; ++j) {
            const int sj = static_cast<int>(static_cast<long long>(j) * im.width / out_w);
            out.at(i, j) = im.at(si, sj);
        }
    }
    return out;
}

}  // namespace holo
