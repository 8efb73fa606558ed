#include "holo/samples.hpp"

#include <algorithm>
#include <cmath>

namespace holo {

namespace {

void fill_rect(Image& im, int y0, int x0, int h, int w) {
    for (int i = std::max(0, y0); i < std::min(im.height, y0 + h); ++i)
        for (int j = std::max(0, x0); j < std::min(im.width, x0 + w); ++j) im.at(i, j) = 1.0;
}

void bar_group(Image& im, int y, int x, int bar, int count, int length, bool horizontal) {
    for (int k = 0; k < count; ++k) {
        if (horizontal)
            fill_rect(im, y + 2 * bar * k, x, bar, length);
        else
            fill_rect(im, y, x + 2 * bar * k, length, bar);
    }
}

void stamp_disk(Image& im, double cy, double cx, double r, double soft) {
    const int i0 = std::max(0, static_cast<int>(cy - r - soft - 1));
    const int i1 = std::min(im.height - 1, static_cast<int>(cy + r + soft + 1));
    const int j0 = std::max(0, static_cast<int>(cx - r - soft - 1));
    const int j1 = std::min(im.width - 1, static_cast<int>(cx + r + soft + 1));
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) {
            const double d = std::hypot(i - cy, j - cx);
            double v;
            if (d <= r)
                v = 1.0;
            else if (d <= r + soft)
                v = 1.0 - (d - r) / soft;
            else
                continue;
            im.at(i, j) = std::max(im.at(i, j), v);
        }
}

}  // namespace

Image bar_target(int size) {
    Image im = Image::zeros(size, size);
    const double s = size / 128.0;
    auto px = [s](double v) { return std::max(1, static_cast<int>(std::lround(v * s))); };
    // Coarse-to-fine groups; the finest bars sit near the sampling limit so
    // neighboring candidate distances defocus them visibly.
    bar_group(im, px(8), px(8), px(8), 3, px(48), true);
    bar_group(im, px(8), px(72), px(8), 3, px(48), false);
    bar_group(im, px(64), px(8), px(4), 3, px(24), true);
    bar_group(im, px(64), px(44), px(4), 3, px(24), false);
    bar_group(im, px(64), px(84), px(2), 3, px(12), true);
    bar_group(im, px(96), px(84), px(2), 3, px(12), false);
    bar_group(im, px(84), px(108), px(3), 3, px(16), true);
    fill_rect(im, px(96), px(16), px(20), px(20));
    return im;
}

Image cell_blobs(int size, uint64_t seed) {
    Image im = Image::zeros(size, size);
    Rng rng(seed);
    const int count = 10 + size / 32;
    for (int k = 0; k < count; ++k) {
        const double cy = rng.uniform(0.1, 0.9) * size;
        const double cx = rng.uniform(0.1, 0.9) * size;
        const double r = rng.uniform(0.02, 0.06) * size;
        stamp_disk(im, cy, cx, r, 0.4 * r + 1.0);
        // nucleus-like darker core rendered as stronger absorption
        stamp_disk(im, cy + rng.uniform(-0.2, 0.2) * r, cx + rng.uniform(-0.2, 0.2) * r,
                   0.35 * r, 1.0);
    }
    return im;
}

Image dendrite(int size, uint64_t seed) {
    Image im = Image::zeros(size, size);
    Rng rng(seed);

    struct Branch {
        double y, x, angle, thickness;
        int depth;
    };
    std::vector<Branch> stack{{size * 0.95, size * 0.5, -1.5707963267948966, size / 40.0, 0}};
    while (!stack.empty()) {
        Branch b = stack.back();
        stack.pop_back();
        const int steps = static_cast<int>(size * rng.uniform(0.18, 0.35));
        double y = b.y, x = b.x, ang = b.angle;
        for (int t = 0; t < steps; ++t) {
            stamp_disk(im, y, x, std::max(0.6, b.thickness * 0.5), 0.8);
            ang += rng.uniform(-0.25, 0.25);
            y += std::sin(ang);
            x += std::cos(ang);
            if (y < 2 || y > size - 3 || x < 2 || x > size - 3) break;
            if (b.depth < 4 && rng.uniform() < 0.035) {
                const double side = rng.uniform() < 0.5 ? 1.0 : -1.0;
                stack.push_back({y, x, ang + side * rng.uniform(0.5, 1.1),
                                 b.thickness * 0.7, b.depth + 1});
            }
        }
    }
    return im;
}

Image make_sample(const std::string& name, int size, uint64_t seed) {
    if (size < 16) fail("make_sample: size too small");
    if (name == "bars") return bar_target(size);
    if (name == "cells") return cell_blobs(size, seed ? seed : 7);
    if (name == "dendrite") return dendrite(size, seed ? seed : 11);
    fail("make_sample: unknown sample '" + name + "' (expected bars | cells | dendrite)");
}

}  // namespace holo
