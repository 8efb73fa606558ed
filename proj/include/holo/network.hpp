#pragma once

#include <cstdint>
#include <vector>

#include "holo/common.hpp"
#include "holo/tensor.hpp"

namespace holo {

/// Convolutional autoencoder layout. The default mirrors the hourglass used
/// for untrained hologram reconstruction at a size trainable on CPU:
/// `stages` stride-2 encoder convolutions doubling channel width from
/// `base_channels`, mirrored nearest-neighbor-upsample+conv decoder stages,
/// and a final 1x1 projection to (real, imag). See docs/architecture.md for
/// the full layer table of the default configuration.
struct AutoencoderSpec {
    int input_height = 128;
    int input_width = 128;
    int stages = 4;
    int base_channels = 16;
    int kernel = 3;
    double leaky_slope = 0.1;

    void validate() const {
        if (input_height < (1 << stages) || input_width < (1 << stages))
            fail("AutoencoderSpec: input " + std::to_string(input_height) + "x" +
                 std::to_string(input_width) + " too small for " + std::to_string(stages) +
                 " stride-2 stages");
        if (stages < 1 || base_channels < 1) fail("AutoencoderSpec: invalid stage/channel count");
        if (kernel < 1 || kernel % 2 == 0) fail("AutoencoderSpec: kernel must be odd and >= 1");
    }

    int encoder_out_channels(int stage) const { return base_channels << stage; }
    int decoder_out_channels(int stage) const {
        return stage == stages - 1 ? base_channels : base_channels << (stages - 2 - stage);
    }
};

/// Untrained network G(H; theta): normalized hologram [1,H,W] in, complex
/// object estimate [2,H,W] out. Parameters are leaf tensors; forward builds
/// a fresh tape each call.
template <typename T>
class Autoencoder {
public:
    static Autoencoder build(const AutoencoderSpec& spec, uint64_t seed) {
        spec.validate();
        Autoencoder net;
        net.spec_ = spec;
        net.seed_ = seed;
        Rng rng(seed);

        auto make_conv = [&](int in_ch, int out_ch, int k) {
            // Kaiming-style uniform fan-in init, zero biases.
            const double bound = std::sqrt(6.0 / (static_cast<double>(in_ch) * k * k));
            std::vector<T> w(static_cast<size_t>(out_ch) * in_ch * k * k);
            for (auto& v : w) v = static_cast<T>(rng.uniform(-bound, bound));
            net.params_.push_back(Tensor<T>::param({out_ch, in_ch, k, k}, std::move(w)));
            net.params_.push_back(
                Tensor<T>::param({out_ch}, std::vector<T>(static_cast<size_t>(out_ch), T(0))));
        };

        int ch = 1;
        for (int s = 0; s < spec.stages; ++s) {
            make_conv(ch, spec.encoder_out_channels(s), spec.kernel);
            ch = spec.encoder_out_channels(s);
        }
        for (int s = 0; s < spec.stages; ++s) {
            make_conv(ch, spec.decoder_out_channels(s), spec.kernel);
            ch = spec.decoder_out_channels(s);
        }
        make_conv(ch, 2, 1);
        return net;
    }

    Tensor<T> forward(const Tensor<T>& hologram) const {
        const auto& sh = hologram.shape();
        if (sh.size() != 3 || sh[0] != 1 || sh[1] != spec_.input_height ||
            sh[2] != spec_.input_width)
            fail("Autoencoder::forward: input " + shape_str(sh) + " does not match spec " +
                 std::to_string(spec_.input_height) + "x" + std::to_string(spec_.input_width));
        for (T v : hologram.values())
            if (!std::isfinite(static_cast<double>(v)))
                fail("Autoencoder::forward: non-finite input");

        const T slope = static_cast<T>(spec_.leaky_slope);
        const int pad = spec_.kernel / 2;
        Tensor<T> x = hologram;
        std::vector<std::pair<int, int>> sizes;  // encoder input dims, for the mirror
        size_t p = 0;
        for (int s = 0; s < spec_.stages; ++s) {
            sizes.emplace_back(x.shape()[1], x.shape()[2]);
            x = leaky_relu(conv2d(x, params_[p], params_[p + 1], 2, pad), slope);
            p += 2;
        }
        for (int s = 0; s < spec_.stages; ++s) {
            const auto [th, tw] = sizes[sizes.size() - 1 - s];
            x = upsample_nearest(x, th, tw);
            x = leaky_relu(conv2d(x, params_[p], params_[p + 1], 1, pad), slope);
            p += 2;
        }
        return conv2d(x, params_[p], params_[p + 1], 1, 0);
    }

    std::vector<Tensor<T>>& parameters() { return params_; }
    const std::vector<Tensor<T>>& parameters() const { return params_; }
    long long parameter_count() const {
        long long n = 0;
        for (const auto& t : params_) n += t.numel();
        return n;
    }
    const AutoencoderSpec& spec() const { return spec_; }
    uint64_t seed() const { return seed_; }

private:
    AutoencoderSpec spec_;
    std::vector<Tensor<T>> params_;
    uint64_t seed_ = 0;
};

}  // namespace holo
