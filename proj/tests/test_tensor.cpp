#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "holo/adam.hpp"
#include "holo/tensor.hpp"
#include "support/oracles.hpp"

using holo::Tensor;
using D = Tensor<double>;

namespace {

D random_param(std::vector<int> shape, uint64_t seed, double lo = -1.0, double hi = 1.0) {
    holo::Rng rng(seed);
    std::vector<double> data(static_cast<size_t>(holo::numel_of(shape)));
    for (auto& v : data) v = rng.uniform(lo, hi);
    return D::param(std::move(shape), std::move(data));
}

}  // namespace

TEST_CASE("relu and arithmetic basics") {
    auto x = D::from({3}, {-1.0, 0.0, 2.0});
    auto r = holo::relu(x);
    CHECK(r.values()[0] == 0.0);
    CHECK(r.values()[1] == 0.0);
    CHECK(r.values()[2] == 2.0);

    auto m = holo::mean(holo::square(D::from({2}, {3.0, 4.0})));
    CHECK(m.item() == doctest::Approx(12.5).epsilon(1e-15));
}

TEST_CASE("conv2d identity kernel preserves values") {
    auto x = D::from({1, 3, 3}, std::vector<double>(9, 1.0));
    auto w = D::from({1, 1, 1, 1}, {1.0});
    auto b = D::from({1}, {0.0});
    auto y = holo::conv2d(x, w, b, 1, 0);
    REQUIRE(y.shape() == std::vector<int>{1, 3, 3});
    for (double v : y.values()) CHECK(v == 1.0);
}

TEST_CASE("backward of x^2 and repeated accumulation") {
    auto x = D::param({1}, {3.0});
    auto loss = holo::square(x);
    loss.backward();
    CHECK(x.grad()[0] == doctest::Approx(6.0));
    loss.backward();  // accumulates without zeroing
    CHECK(x.grad()[0] == doctest::Approx(12.0));
    x.zero_grad();
    loss.backward();
    CHECK(x.grad()[0] == doctest::Approx(6.0));
}

TEST_CASE("backward of a tiny least-squares fit") {
    // loss = mean((w*x - y)^2), w=1, x=2, y=1 -> dloss/dw = 2*(2-1)*2 = 4
    auto w = D::param({1}, {1.0});
    auto x = D::from({1}, {2.0});
    auto y = D::from({1}, {1.0});
    auto loss = holo::mse(holo::mul(w, x), y);
    loss.backward();
    CHECK(w.grad()[0] == doctest::Approx(4.0));
}

TEST_CASE("backward rejects non-scalar loss") {
    auto x = D::param({2}, {1.0, 2.0});
    CHECK_THROWS_AS(holo::square(x).backward(), holo::Error);
}

TEST_CASE("shape mismatches raise structured errors") {
    auto a = D::from({2}, {1.0, 2.0});
    auto b = D::from({3}, {1.0, 2.0, 3.0});
    CHECK_THROWS_WITH_AS(holo::add(a, b), doctest::Contains("add"), holo::Error);
    CHECK_THROWS_WITH_AS(
        holo::matmul(D::from({2, 2}, {1, 2, 3, 4}), D::from({3, 1}, {1, 2, 3})),
        doctest::Contains("matmul"), holo::Error);
}

TEST_CASE("detach stops gradients") {
    SUBCASE("detach(x)*x has gradient x, not 2x") {
        auto x = D::param({1}, {2.0});
        auto loss = holo::mul(x.detach(), x);
        loss.backward();
        CHECK(x.grad()[0] == doctest::Approx(2.0));
    }
    SUBCASE("detach preserves values") {
        auto x = random_param({4, 5}, 3);
        auto d = x.detach();
        CHECK(std::memcmp(d.values().data(), x.values().data(), sizeof(double) * 20) == 0);
        CHECK_FALSE(d.requires_grad());
    }
    SUBCASE("any path through a detached node contributes zero gradient") {
        auto x = D::param({1}, {1.5});
        // y = x^2 + detach(x^2): only the live branch contributes.
        auto live = holo::square(x);
        auto loss = holo::add(live, live.detach());
        loss.backward();
        CHECK(x.grad()[0] == doctest::Approx(3.0));
    }
}

TEST_CASE("detached weighted sum equals manually weighted backward") {
    auto x = random_param({6}, 11);
    const std::vector<double> w = {0.7, 0.3};

    auto make_losses = [&]() {
        auto l1 = holo::mean(holo::square(x));
        auto l2 = holo::mean(holo::square(holo::add(x, x)));
        return std::pair{l1, l2};
    };

    auto [l1, l2] = make_losses();
    auto total = holo::add(holo::scale(l1, w[0]), holo::scale(l2, w[1]));
    total.backward();
    std::vector<double> combined(x.grad().begin(), x.grad().end());

    x.zero_grad();
    auto [m1, m2] = make_losses();
    m1.backward();
    std::vector<double> g1(x.grad().begin(), x.grad().end());
    x.zero_grad();
    m2.backward();
    std::vector<double> g2(x.grad().begin(), x.grad().end());

    for (size_t i = 0; i < combined.size(); ++i)
        CHECK(combined[i] == doctest::Approx(w[0] * g1[i] + w[1] * g2[i]).epsilon(1e-12));
}

TEST_CASE("finite-difference checks for every op") {
    // Each op builds a scalar via a fixed random projection; analytic
    // gradients must match central differences to rel err < 1e-4.
    auto check = [](holo::Tensor<double>& in, const std::function<D()>& loss, int cap = -1) {
        const auto res = oracles::fd_check(in, loss, cap);
        CAPTURE(res.max_abs_err);
        CHECK(res.max_rel_err < 1e-4);
    };

    SUBCASE("add/sub/mul/scale") {
        auto a = random_param({3, 4}, 21);
        auto b = random_param({3, 4}, 22);
        check(a, [&] { return oracles::random_projection(holo::add(a, b), 1); });
        check(b, [&] { return oracles::random_projection(holo::sub(a, b), 2); });
        check(a, [&] { return oracles::random_projection(holo::mul(a, b), 3); });
        check(b, [&] { return oracles::random_projection(holo::mul(a, b), 3); });
        check(a, [&] { return oracles::random_projection(holo::scale(a, -1.7), 4); });
    }
    SUBCASE("activations") {
        auto a = random_param({2, 5}, 23);  // values away from the relu kink
        check(a, [&] { return oracles::random_projection(holo::leaky_relu(a, 0.1), 5); });
        check(a, [&] { return oracles::random_projection(holo::tanh(a), 6); });
        check(a, [&] { return oracles::random_projection(holo::sigmoid(a), 7); });
        check(a, [&] { return oracles::random_projection(holo::square(a), 8); });
    }
    SUBCASE("reductions") {
        auto a = random_param({4, 4}, 24);
        check(a, [&] { return holo::sum(a); });
        check(a, [&] { return holo::mean(a); });
        auto b = random_param({4, 4}, 25);
        check(a, [&] { return holo::mse(a, b); });
        check(b, [&] { return holo::mse(a, b); });
    }
    SUBCASE("matmul") {
        auto a = random_param({3, 4}, 26);
        auto b = random_param({4, 2}, 27);
        check(a, [&] { return oracles::random_projection(holo::matmul(a, b), 9); });
        check(b, [&] { return oracles::random_projection(holo::matmul(a, b), 9); });
    }
    SUBCASE("conv2d stride 1 and stride 2") {
        auto x = random_param({2, 6, 6}, 28);
        auto w = random_param({3, 2, 3, 3}, 29);
        auto b = random_param({3}, 30);
        for (int stride : {1, 2}) {
            auto loss = [&, stride] {
                return oracles::random_projection(holo::conv2d(x, w, b, stride, 1),
                                                  10 + stride);
            };
            check(x, loss);
            check(w, loss);
            check(b, loss);
        }
    }
    SUBCASE("upsample_nearest") {
        auto x = random_param({2, 3, 3}, 31);
        check(x, [&] { return oracles::random_projection(holo::upsample_nearest(x, 6, 6), 12); });
        // non-integer ratio (3 -> 7)
        check(x, [&] { return oracles::random_projection(holo::upsample_nearest(x, 7, 7), 13); });
    }
    SUBCASE("slice/concat") {
        auto a = random_param({3, 2, 2}, 32);
        auto b = random_param({2, 2, 2}, 33);
        check(a, [&] { return oracles::random_projection(holo::slice_channels(a, 1, 3), 14); });
        check(a, [&] { return oracles::random_projection(holo::concat_channels(a, b), 15); });
        check(b, [&] { return oracles::random_projection(holo::concat_channels(a, b), 15); });
    }
    SUBCASE("fft2c / ifft2c / complex_mul / complex_abs2") {
        auto x = random_param({2, 4, 4}, 34);
        auto k = random_param({2, 4, 4}, 35);
        check(x, [&] { return oracles::random_projection(holo::fft2c(x), 16); });
        check(x, [&] { return oracles::random_projection(holo::ifft2c(x), 17); });
        check(x, [&] { return oracles::random_projection(holo::complex_mul(x, k), 18); });
        check(k, [&] { return oracles::random_projection(holo::complex_mul(x, k), 18); });
        check(x, [&] { return oracles::random_projection(holo::complex_abs2(x), 19); });
    }
}

TEST_CASE("fft2c round trip is the identity") {
    auto x = random_param({2, 8, 8}, 40);
    auto y = holo::ifft2c(holo::fft2c(x));
    for (size_t i = 0; i < x.values().size(); ++i)
        CHECK(y.values()[i] == doctest::Approx(x.values()[i]).epsilon(1e-12));
}

TEST_CASE("adam") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        std::vector<D> params{D::param({2}, {1.0, -2.0})};
        auto state = holo::AdamState<double>::for_params(params);
        holo::adam_step(params, state);
        CHECK(params[0].values()[0] == 1.0);
        CHECK(params[0].values()[1] == -2.0);
        CHECK(state.step_count == 1);
    }
    SUBCASE("one step on f(x)=x^2 descends") {
        std::vector<D> params{D::param({1}, {1.0})};
        auto state = holo::AdamState<double>::for_params(params);
        auto loss = holo::square(params[0]);
        loss.backward();
        holo::adam_step(params, state);
        CHECK(params[0].values()[0] < 1.0);
    }
    SUBCASE("ten steps match the scalar reference trajectory") {
        std::vector<D> params{D::param({1}, {1.0})};
        auto state = holo::AdamState<double>::for_params(params);
        oracles::ScalarAdam ref;
        double x_ref = 1.0;
        for (int i = 0; i < 10; ++i) {
            auto loss = holo::square(params[0]);
            loss.backward();
            x_ref = ref.step(x_ref, 2.0 * x_ref);
            holo::adam_step(params, state);
            holo::zero_gradients(params);
            CHECK(params[0].values()[0] == doctest::Approx(x_ref).epsilon(1e-14));
        }
    }
}

TEST_CASE("forward determinism for a fixed seed") {
    auto make = [] {
        auto x = random_param({2, 8, 8}, 77);
        auto w = random_param({4, 2, 3, 3}, 78);
        auto b = random_param({4}, 79);
        return holo::tanh(holo::conv2d(x, w, b, 2, 1));
    };
    auto y1 = make();
    auto y2 = make();
    REQUIRE(y1.values().size() == y2.values().size());
    CHECK(std::memcmp(y1.values().data(), y2.values().data(),
                      y1.values().size() * sizeof(double)) == 0);
}
