#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "holo/network.hpp"
#include "support/oracles.hpp"

using namespace holo;
using D = Tensor<double>;

namespace {

D random_hologram_input(int h, int w, uint64_t seed) {
    holo::Rng rng(seed);
    std::vector<double> data(static_cast<size_t>(h) * w);
    for (auto& v : data) v = rng.uniform(0.0, 2.0);  // mean-normalized holograms live near 1
    return D::from({1, h, w}, std::move(data));
}

}  // namespace

TEST_CASE("build is bitwise deterministic for a fixed seed") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 32;
    auto a = Autoencoder<double>::build(spec, 123);
    auto b = Autoencoder<double>::build(spec, 123);
    auto c = Autoencoder<double>::build(spec, 124);
    REQUIRE(a.parameters().size() == b.parameters().size());
    bool all_equal = true, any_diff_seed = false;
    for (size_t i = 0; i < a.parameters().size(); ++i) {
        const auto va = a.parameters()[i].values();
        const auto vb = b.parameters()[i].values();
        const auto vc = c.parameters()[i].values();
        all_equal = all_equal &&
                    std::memcmp(va.data(), vb.data(), va.size() * sizeof(double)) == 0;
        any_diff_seed =
            any_diff_seed ||
            std::memcmp(va.data(), vc.data(), va.size() * sizeof(double)) != 0;
    }
    CHECK(all_equal);
    CHECK(any_diff_seed);
}

TEST_CASE("default architecture: output shape and parameter count") {
    AutoencoderSpec spec;  // 4 stages, base 16, kernel 3
    auto net = Autoencoder<double>::build(spec, 1);
    // Layer table documented in docs/architecture.md.
    CHECK(net.parameter_count() == 196386);

    auto out = net.forward(random_hologram_input(128, 128, 2));
    CHECK(out.shape() == std::vector<int>{2, 128, 128});
}

TEST_CASE("forward is deterministic and finite") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 32;
    auto net = Autoencoder<double>::build(spec, 5);
    auto in = random_hologram_input(32, 32, 6);
    auto y1 = net.forward(in);
    auto y2 = net.forward(in);
    CHECK(std::memcmp(y1.values().data(), y2.values().data(),
                      y1.values().size() * sizeof(double)) == 0);
    double var = 0, mean = 0;
    for (double v : y1.values()) {
        CHECK(std::isfinite(v));
        mean += v;
    }
    mean /= static_cast<double>(y1.values().size());
    for (double v : y1.values()) var += (v - mean) * (v - mean);
    CHECK(var > 0.0);  // no saturated constant output at init
}

TEST_CASE("odd input sizes survive the encoder/decoder mirror") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 50;
    spec.stages = 2;
    auto net = Autoencoder<double>::build(spec, 7);
    auto out = net.forward(random_hologram_input(50, 50, 8));
    CHECK(out.shape() == std::vector<int>{2, 50, 50});

    spec.input_height = spec.input_width = 125;  // 125 -> 63 -> 32 -> 16 -> 8
    spec.stages = 4;
    auto deep = Autoencoder<double>::build(spec, 9);
    CHECK(deep.forward(random_hologram_input(125, 125, 10)).shape() ==
          std::vector<int>{2, 125, 125});
}

TEST_CASE("first-layer gradient matches finite differences at 16x16") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 16;
    auto net = Autoencoder<double>::build(spec, 11);
    auto in = random_hologram_input(16, 16, 12);
    auto& w0 = net.parameters()[0];
    auto loss = [&] { return oracles::random_projection(net.forward(in), 13); };
    const auto res = oracles::fd_check(w0, loss, 48);
    CHECK(res.max_rel_err < 1e-4);

    // and a decoder-side layer
    auto& wd = net.parameters()[net.parameters().size() - 4];
    const auto res2 = oracles::fd_check(wd, loss, 32);
    CHECK(res2.max_rel_err < 1e-4);
}

TEST_CASE("dead-unit audit: every parameter element receives gradient at init") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 16;
    auto net = Autoencoder<double>::build(spec, 21);
    auto in = random_hologram_input(16, 16, 22);
    mean(square(net.forward(in))).backward();
    for (const auto& p : net.parameters()) {
        REQUIRE(p.has_grad());
        for (double g : p.grad()) CHECK(g != 0.0);
    }
}

TEST_CASE("invalid inputs are rejected") {
    AutoencoderSpec bad;
    bad.input_height = bad.input_width = 8;  // too small for 4 stride-2 stages
    CHECK_THROWS_AS(Autoencoder<double>::build(bad, 1), Error);

    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 32;
    auto net = Autoencoder<double>::build(spec, 1);
    CHECK_THROWS_AS(net.forward(random_hologram_input(16, 16, 1)), Error);

    std::vector<double> nan_in(32 * 32, std::nan(""));
    CHECK_THROWS_AS(net.forward(D::from({1, 32, 32}, std::move(nan_in))), Error);
}

TEST_CASE("float instantiation produces the same shapes") {
    AutoencoderSpec spec;
    spec.input_height = spec.input_width = 32;
    auto net = Autoencoder<float>::build(spec, 3);
    holo::Rng rng(4);
    std::vector<float> data(32 * 32);
    for (auto& v : data) v = static_cast<float>(rng.uniform(0.0, 2.0));
    auto out = net.forward(Tensor<float>::from({1, 32, 32}, std::move(data)));
    CHECK(out.shape() == std::vector<int>{2, 32, 32});
    for (float v : out.values()) CHECK(std::isfinite(v));
}
