#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "kham/dynamics.hpp"
#include "kham/metrics.hpp"
#include "kham/training.hpp"

using namespace kham;
using namespace kham_test;

TEST_CASE("single pattern with identity weights scores perfectly") {
    const PatternSet ps = random_patterns(14, 1, 10000);
    const KernelContext ctx(ps, 0.1);
    DualWeights w;
    w.alpha = Matrix(1, 14);
    for (std::size_t i = 0; i < 14; ++i) w.alpha(0, i) = ps.at(0, i);

    CHECK(bit_accuracy(w, ps, ctx) == 1.0);
    // h_i = xi_i * K(xi, xi) = xi_i, so every alignment term is exactly 1
    CHECK(stability_margin(w, ps, ctx) == doctest::Approx(1.0).epsilon(1e-15));

    const MetricsReport rep = evaluate(w, ps, ctx);
    CHECK(rep.bit_accuracy == bit_accuracy(w, ps, ctx));
    CHECK(rep.stability_margin == stability_margin(w, ps, ctx));
}

TEST_CASE("metrics agree with the dynamics-module potential") {
    RngStream rng(1001);
    for (int c = 0; c < 10; ++c) {
        const std::size_t n = 2 + rng.next_below(30);
        const std::size_t p = 1 + rng.next_below(12);
        const PatternSet ps = random_patterns(n, p, 10100 + c);
        const KernelContext ctx(ps, 0.02 + 0.2 * rng.next_double());
        DualWeights w;
        w.alpha = random_matrix(p, n, rng, -1.5, 1.5);
        const Network net(ps, w, ctx);

        double correct = 0.0, margin = 0.0;
        for (std::size_t mu = 0; mu < p; ++mu) {
            const auto h = potential(ps.pattern(mu), net);
            for (std::size_t i = 0; i < n; ++i) {
                const int s = h[i] >= 0.0 ? 1 : -1;
                correct += s == ps.at(mu, i);
                margin += h[i] * ps.at(mu, i);
            }
        }
        const double total = static_cast<double>(p * n);
        CHECK(bit_accuracy(w, ps, ctx) == doctest::Approx(correct / total).epsilon(1e-12));
        CHECK(stability_margin(w, ps, ctx) == doctest::Approx(margin / total).epsilon(1e-12));
    }
}

TEST_CASE("metrics are invariant under relabeling of patterns and neurons") {
    RngStream rng(1002);
    const std::size_t n = 12, p = 7;
    const PatternSet ps = random_patterns(n, p, 10200);
    const double gamma = 0.08;
    const KernelContext ctx(ps, gamma);
    DualWeights w;
    w.alpha = random_matrix(p, n, rng);

    // reverse pattern order (rows of both patterns and weights)
    PatternSet rps(p, n);
    DualWeights rw;
    rw.alpha = Matrix(p, n);
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t i = 0; i < n; ++i) {
            rps.at(p - 1 - mu, i) = ps.at(mu, i);
            rw.alpha(p - 1 - mu, i) = w.alpha(mu, i);
        }
    const KernelContext rctx(rps, gamma);
    CHECK(bit_accuracy(rw, rps, rctx) == doctest::Approx(bit_accuracy(w, ps, ctx)).epsilon(1e-12));
    CHECK(stability_margin(rw, rps, rctx) ==
          doctest::Approx(stability_margin(w, ps, ctx)).epsilon(1e-12));

    // reverse neuron order (columns of both)
    PatternSet cps(p, n);
    DualWeights cw;
    cw.alpha = Matrix(p, n);
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t i = 0; i < n; ++i) {
            cps.at(mu, n - 1 - i) = ps.at(mu, i);
            cw.alpha(mu, n - 1 - i) = w.alpha(mu, i);
        }
    const KernelContext cctx(cps, gamma);
    CHECK(bit_accuracy(cw, cps, cctx) == doctest::Approx(bit_accuracy(w, ps, ctx)).epsilon(1e-12));
    CHECK(stability_margin(cw, cps, cctx) ==
          doctest::Approx(stability_margin(w, ps, ctx)).epsilon(1e-12));
}

TEST_CASE("positive scaling preserves accuracy and scales the margin") {
    RngStream rng(1003);
    const PatternSet ps = random_patterns(15, 9, 10300);
    const KernelContext ctx(ps, 0.06);
    DualWeights w, scaled;
    w.alpha = random_matrix(9, 15, rng);
    scaled.alpha = w.alpha;
    for (auto& v : scaled.alpha.flat()) v *= 2.5;

    CHECK(bit_accuracy(scaled, ps, ctx) == bit_accuracy(w, ps, ctx));
    CHECK(stability_margin(scaled, ps, ctx) ==
          doctest::Approx(2.5 * stability_margin(w, ps, ctx)).epsilon(1e-12));
}

TEST_CASE("noiseless recall of a well-trained model is perfect") {
    const PatternSet ps = random_patterns(24, 8, 10400);
    const KernelContext ctx(ps, 0.1);
    TrainConfig cfg;
    cfg.lambda = 1e-3;
    const TrainResult tr = klr_train(ps, ctx, cfg);
    REQUIRE(bit_accuracy(tr.weights, ps, ctx) == 1.0);

    RngStream rng(1004);
    const RecallAccuracy acc = recall_accuracy(tr.weights, ps, ctx, 0.0, 16, 50, rng);
    CHECK(acc.mean == 1.0);
    CHECK(acc.stddev == 0.0);

    // mild noise: still high, never above 1
    RngStream rng2(1005);
    const RecallAccuracy noisy = recall_accuracy(tr.weights, ps, ctx, 0.1, 16, 50, rng2);
    CHECK(noisy.mean > 0.8);
    CHECK(noisy.mean <= 1.0);
    CHECK(noisy.stddev >= 0.0);
}

TEST_CASE("recall accuracy is reproducible for a fixed stream") {
    const PatternSet ps = random_patterns(18, 5, 10500);
    const KernelContext ctx(ps, 0.07);
    RngStream wrng(1006);
    DualWeights w;
    w.alpha = random_matrix(5, 18, wrng);

    RngStream a(77), b(77);
    const RecallAccuracy ra = recall_accuracy(w, ps, ctx, 0.2, 11, 30, a);
    const RecallAccuracy rb = recall_accuracy(w, ps, ctx, 0.2, 11, 30, b);
    CHECK(ra.mean == rb.mean);
    CHECK(ra.stddev == rb.stddev);
}

TEST_CASE("degradation is baseline minus compressed") {
    CHECK(degradation(1.0, 0.93) == doctest::Approx(0.07));
    CHECK(degradation(0.5, 0.7) == doctest::Approx(-0.2));
}
