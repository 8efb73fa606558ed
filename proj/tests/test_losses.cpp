#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holo/losses.hpp"
#include "support/oracles.hpp"

using namespace holo;
using D = Tensor<double>;

TEST_CASE("hologram_loss basics") {
    auto a = D::from({2, 2}, {1.0, 2.0, 3.0, 4.0});
    CHECK(hologram_loss(a, a).item() == 0.0);

    auto b = D::from({2, 2}, {1.1, 2.1, 3.1, 4.1});
    CHECK(hologram_loss(b, a).item() == doctest::Approx(0.01).epsilon(1e-12));

    CHECK_THROWS_AS(hologram_loss(a, D::from({3}, {1, 2, 3})), Error);
}

TEST_CASE("hologram_loss gradient is 2(pred-target)/N") {
    holo::Rng rng(5);
    std::vector<double> pv(6), tv(6);
    for (auto& v : pv) v = rng.uniform(-1, 1);
    for (auto& v : tv) v = rng.uniform(-1, 1);
    auto pred = D::param({6}, pv);
    auto target = D::from({6}, tv);
    hologram_loss(pred, target).backward();
    for (size_t i = 0; i < pv.size(); ++i)
        CHECK(pred.grad()[i] == doctest::Approx(2.0 * (pv[i] - tv[i]) / 6.0).epsilon(1e-12));

    auto res = oracles::fd_check(pred, [&] { return hologram_loss(pred, target); });
    CHECK(res.max_rel_err < 1e-4);
}

TEST_CASE("reverse_attention_weights") {
    SUBCASE("equal losses give the uniform distribution") {
        for (int n : {1, 2, 7}) {
            const std::vector<double> losses(n, 0.37);
            const auto w = reverse_attention_weights(losses);
            for (double v : w) CHECK(v == doctest::Approx(1.0 / n).epsilon(1e-12));
        }
    }
    SUBCASE("two-candidate example [0.1, 0.2]") {
        // exp(10)/(exp(10)+exp(5)) = logistic(5)
        const auto w = reverse_attention_weights(std::vector<double>{0.1, 0.2});
        CHECK(w[0] == doctest::Approx(0.9933071490757153).epsilon(1e-12));
        CHECK(w[1] == doctest::Approx(0.0066928509242848554).epsilon(1e-12));
    }
    SUBCASE("a vanishing loss takes all the weight") {
        const auto w = reverse_attention_weights(std::vector<double>{1e-9, 0.5, 0.8});
        CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w[1] == 0.0);
        CHECK(w[2] == 0.0);
    }
    SUBCASE("floor semantics: weight 1 split among floor-hitting candidates") {
        const auto w = reverse_attention_weights(std::vector<double>{1e-13, 0.5, 0.0, 2.0});
        CHECK(w[0] == 0.5);
        CHECK(w[2] == 0.5);
        CHECK(w[1] == 0.0);
        CHECK(w[3] == 0.0);
    }
    SUBCASE("NaN loss is a hard error") {
        CHECK_THROWS_AS(
            reverse_attention_weights(std::vector<double>{0.1, std::nan("")}), Error);
    }
    SUBCASE("simplex property on random vectors across scales") {
        holo::Rng rng(17);
        for (int trial = 0; trial < 2000; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(9));
            std::vector<double> losses(n);
            const double scale = std::pow(10.0, rng.uniform(-6.0, 3.0));
            for (auto& l : losses) l = scale * rng.uniform(0.1, 10.0);
            const auto w = reverse_attention_weights(losses);
            double sum = 0;
            for (double v : w) {
                CHECK(v >= 0.0);
                sum += v;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
    SUBCASE("monotone attention: smaller loss, strictly larger weight") {
        holo::Rng rng(18);
        for (int trial = 0; trial < 2000; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(7));
            std::vector<double> losses(n);
            for (auto& l : losses) l = rng.uniform(0.05, 20.0);
            const auto w = reverse_attention_weights(losses);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (losses[i] < losses[j]) CHECK(w[i] > w[j]);
        }
    }
    SUBCASE("stabilized form equals the naive form where it does not overflow") {
        holo::Rng rng(19);
        for (int trial = 0; trial < 500; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(6));
            std::vector<double> losses(n);
            for (auto& l : losses) l = rng.uniform(0.002, 10.0);  // 1/L < 500: exp finite
            std::vector<double> naive(n);
            double denom = 0;
            for (int i = 0; i < n; ++i) {
                naive[i] = std::exp(1.0 / losses[i]);
                denom += naive[i];
            }
            for (auto& v : naive) v /= denom;
            const auto w = reverse_attention_weights(losses);
            for (int i = 0; i < n; ++i) CHECK(std::abs(w[i] - naive[i]) < 1e-12);
        }
    }
}

TEST_CASE("reverse_attention_loss") {
    SUBCASE("n=1 degenerates to the single candidate loss") {
        auto x = D::param({3}, {0.5, -0.2, 1.0});
        auto l = mean(square(x));
        auto [total, report] = reverse_attention_loss<double>({l}, 7);
        CHECK(total.item() == l.item());
        CHECK(report.epoch == 7);
        CHECK(report.weights == std::vector<double>{1.0});
        total.backward();
        std::vector<double> g_total(x.grad().begin(), x.grad().end());
        x.zero_grad();
        mean(square(x)).backward();
        for (size_t i = 0; i < g_total.size(); ++i) CHECK(g_total[i] == x.grad()[i]);
    }
    SUBCASE("equal losses average the candidate gradients") {
        auto x1 = D::param({1}, {0.8});
        auto x2 = D::param({1}, {0.8});
        auto [total, report] = reverse_attention_loss<double>({square(x1), square(x2)});
        CHECK(report.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
        total.backward();
        // d/dx (1/2) x^2 pair: each gets half of its own gradient 2x
        CHECK(x1.grad()[0] == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(x2.grad()[0] == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("gradient equals the weighted sum of per-candidate gradients") {
        auto x = D::param({5}, {0.3, -0.4, 0.9, 0.1, -0.6});
        auto make = [&] {
            std::vector<D> ls;
            ls.push_back(mean(square(x)));
            ls.push_back(mean(square(add(x, x))));
            ls.push_back(mean(square(sub(x, D::filled({5}, 0.2)))));
            return ls;
        };
        auto [total, report] = reverse_attention_loss<double>(make());
        total.backward();
        std::vector<double> combined(x.grad().begin(), x.grad().end());

        std::vector<std::vector<double>> per;
        auto losses = make();
        for (auto& l : losses) {
            x.zero_grad();
            l.backward();
            per.emplace_back(x.grad().begin(), x.grad().end());
        }
        for (size_t i = 0; i < combined.size(); ++i) {
            double expect = 0;
            for (size_t c = 0; c < per.size(); ++c) expect += report.weights[c] * per[c][i];
            CHECK(combined[i] == doctest::Approx(expect).epsilon(1e-6));
        }
    }
    SUBCASE("optimum preservation: a floored candidate dominates the total") {
        auto near_zero = D::from({1}, {1e-13});
        auto other = D::from({1}, {0.8});
        auto [total, report] = reverse_attention_loss<double>({near_zero, other});
        CHECK(report.weights[0] == 1.0);
        CHECK(total.item() == doctest::Approx(1e-13).epsilon(1e-9));
    }
    SUBCASE("report invariants") {
        holo::Rng rng(23);
        std::vector<D> ls;
        for (int i = 0; i < 6; ++i) ls.push_back(D::scalar(rng.uniform(0.01, 2.0)));
        auto [total, report] = reverse_attention_loss<double>(ls);
        double wsum = 0, dot = 0;
        for (size_t i = 0; i < report.weights.size(); ++i) {
            CHECK(report.weights[i] >= 0.0);
            CHECK(report.losses[i] >= 0.0);
            wsum += report.weights[i];
            dot += report.weights[i] * report.losses[i];
        }
        CHECK(std::abs(wsum - 1.0) <= 1e-9);
        CHECK(std::abs(report.total - dot) <= 1e-9);
        CHECK(total.item() == doctest::Approx(report.total));
    }
}

TEST_CASE("predicted_index breaks ties toward the smaller index") {
    CHECK(predicted_index(std::vector<double>{0.4, 0.4, 0.2}) == 0);
    CHECK(predicted_index(std::vector<double>{0.1, 0.5, 0.4}) == 1);
    CHECK(predicted_index(std::vector<double>{1.0}) == 0);
}

TEST_CASE("CandidateSet") {
    SUBCASE("paper protocol grid") {
        const auto set = CandidateSet::from_range(4500e-6, 5500e-6, 100e-6, 5000e-6);
        CHECK(set.size() == 11);
        REQUIRE(set.true_index.has_value());
        CHECK(*set.true_index == 5);
        CHECK(set.distances.front() == doctest::Approx(4500e-6));
        CHECK(set.distances.back() == doctest::Approx(5500e-6));
    }
    SUBCASE("validation") {
        CandidateSet bad;
        bad.distances = {1e-3, 1e-3};
        CHECK_THROWS_AS(bad.validate(), Error);
        CandidateSet oob;
        oob.distances = {1e-3};
        oob.true_index = 3;
        CHECK_THROWS_AS(oob.validate(), Error);
        CHECK_THROWS_AS(CandidateSet::from_range(1e-3, 2e-3, 0.0), Error);
    }
    SUBCASE("z_true outside the grid leaves true_index empty") {
        const auto set = CandidateSet::from_range(4500e-6, 5500e-6, 100e-6, 5050e-6);
        CHECK_FALSE(set.true_index.has_value());
    }
}
