#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "kham/metrics.hpp"
#include "kham/training.hpp"

using namespace kham;
using namespace kham_test;

namespace {

std::vector<double> labels_of(const PatternSet& ps, std::size_t j) {
    std::vector<double> y(ps.count());
    for (std::size_t v = 0; v < y.size(); ++v) y[v] = ps.at(v, j);
    return y;
}

} // namespace

TEST_CASE("analytic L2 gradient matches central finite differences") {
    RngStream rng(201);
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t p = 2 + rng.next_below(7);  // <= 8
        const std::size_t n = 1 + rng.next_below(8);  // <= 8
        const PatternSet ps = random_patterns(n, p, 7000 + inst);
        const KernelContext ctx(ps, 0.02 + 0.3 * rng.next_double());
        const double lambda = inst % 3 == 0 ? 0.0 : 0.5 * rng.next_double();

        TrainConfig cfg;
        cfg.lambda = lambda;
        const std::size_t j = rng.next_below(n);
        const auto labels = labels_of(ps, j);

        std::vector<double> alpha(p);
        for (auto& a : alpha) a = -2.0 + 4.0 * rng.next_double();

        const auto grad = column_gradient_l2(ctx.gram(), labels, alpha, lambda);
        double gmax = 1.0;
        for (double g : grad) gmax = std::max(gmax, std::fabs(g));

        const double h = 1e-6;
        for (std::size_t v = 0; v < p; ++v) {
            auto hi = alpha, lo = alpha;
            hi[v] += h;
            lo[v] -= h;
            const double fd = (column_objective(ctx.gram(), labels, hi, cfg) -
                               column_objective(ctx.gram(), labels, lo, cfg)) /
                              (2.0 * h);
            CHECK(std::fabs(fd - grad[v]) <= 1e-5 * gmax);
        }
    }
}

TEST_CASE("objective at zero weights is P * N * log 2") {
    const PatternSet ps = random_patterns(11, 7, 8000);
    const KernelContext ctx(ps, 0.1);
    DualWeights w;
    w.alpha = Matrix(7, 11, 0.0);
    TrainConfig cfg;
    cfg.lambda = 0.37;  // penalty of zero weights is still zero
    const double expected = 7.0 * 11.0 * std::log(2.0);
    CHECK(objective_value(ps, ctx, w, cfg) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("objective matches a hand evaluation on a 2x2 instance") {
    PatternSet ps(2, 2);
    ps.at(0, 0) = 1;
    ps.at(0, 1) = -1;
    ps.at(1, 0) = -1;
    ps.at(1, 1) = -1;
    const double gamma = 0.11;
    const KernelContext ctx(ps, gamma);

    DualWeights w;
    w.alpha = Matrix(2, 2);
    w.alpha(0, 0) = 0.7;
    w.alpha(1, 0) = -0.4;
    w.alpha(0, 1) = 0.2;
    w.alpha(1, 1) = 1.3;
    TrainConfig cfg;
    cfg.lambda = 0.05;

    // independent evaluation, written out longhand
    const double k01 = std::exp(-4.0 * gamma * 1.0);  // patterns differ in one bit
    double expected = 0.0;
    for (int j = 0; j < 2; ++j) {
        const double a0 = w.alpha(0, j), a1 = w.alpha(1, j);
        const double u0 = a0 + k01 * a1;
        const double u1 = k01 * a0 + a1;
        const double y0 = ps.at(0, j), y1 = ps.at(1, j);
        expected += std::log(1.0 + std::exp(-y0 * u0));
        expected += std::log(1.0 + std::exp(-y1 * u1));
        expected += cfg.lambda * (a0 * u0 + a1 * u1);
    }
    CHECK(objective_value(ps, ctx, w, cfg) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("a single stored pattern becomes stable after training") {
    const PatternSet ps = random_patterns(16, 1, 8100);
    const KernelContext ctx(ps, 0.05);
    TrainConfig cfg;
    cfg.lambda = 1e-4;
    const TrainResult tr = klr_train(ps, ctx, cfg);
    CHECK(tr.all_converged());
    CHECK(bit_accuracy(tr.weights, ps, ctx) == 1.0);
    CHECK(stability_margin(tr.weights, ps, ctx) > 0.0);
}

TEST_CASE("training descends from the zero start") {
    const PatternSet ps = random_patterns(20, 15, 8200);
    const KernelContext ctx(ps, 0.08);
    TrainConfig cfg;
    cfg.lambda = 1e-3;
    const TrainResult tr = klr_train(ps, ctx, cfg);
    DualWeights zero;
    zero.alpha = Matrix(15, 20, 0.0);
    CHECK(objective_value(ps, ctx, tr.weights, cfg) < objective_value(ps, ctx, zero, cfg));
    CHECK(tr.all_converged());
}

TEST_CASE("huge regularization collapses the weights") {
    const PatternSet ps = random_patterns(12, 6, 8300);
    const KernelContext ctx(ps, 0.1);

    TrainConfig l2;
    l2.lambda = 1e6;
    const TrainResult klr = klr_train(ps, ctx, l2);
    for (double a : klr.weights.alpha.flat()) CHECK(std::fabs(a) < 1e-3);
    CHECK(std::fabs(stability_margin(klr.weights, ps, ctx)) < 1e-2);

    TrainConfig l1;
    l1.regularizer = Regularizer::L1;
    l1.lambda = 1e3;
    const TrainResult lasso = lasso_train(ps, ctx, l1);
    for (double a : lasso.weights.alpha.flat()) CHECK(a == 0.0);
}

TEST_CASE("lasso with lambda 0 reaches the same objective as the L2 path") {
    const PatternSet ps = random_patterns(8, 4, 8400);
    const KernelContext ctx(ps, 0.15);

    TrainConfig l2;
    l2.lambda = 0.0;
    l2.tol = 1e-13;  // run the full budget; compare where both plateau
    l2.max_iters = 3000;
    TrainConfig l1 = l2;
    l1.regularizer = Regularizer::L1;

    const TrainResult a = klr_train(ps, ctx, l2);
    const TrainResult b = lasso_train(ps, ctx, l1);
    const double oa = objective_value(ps, ctx, a.weights, l2);
    const double ob = objective_value(ps, ctx, b.weights, l2);
    CHECK(std::fabs(oa - ob) <= 1e-6);
}

TEST_CASE("lasso zero counts grow with lambda") {
    const PatternSet ps = random_patterns(20, 30, 8500);
    const KernelContext ctx(ps, 0.05);

    std::size_t prev = 0;
    for (double lambda : {0.01, 0.1, 0.5, 2.0}) {
        TrainConfig cfg;
        cfg.regularizer = Regularizer::L1;
        cfg.lambda = lambda;
        const TrainResult tr = lasso_train(ps, ctx, cfg);
        std::size_t zeros = 0;
        for (double a : tr.weights.alpha.flat()) zeros += a == 0.0;
        CHECK(zeros >= prev);
        prev = zeros;
    }
    CHECK(prev > 0);  // the strongest lambda actually prunes

    // the L2 path never produces exact zeros on the same instance
    TrainConfig l2;
    l2.lambda = 1e-3;
    const TrainResult klr = klr_train(ps, ctx, l2);
    std::size_t l2_zeros = 0;
    for (double a : klr.weights.alpha.flat()) l2_zeros += a == 0.0;
    CHECK(l2_zeros == 0);
    CHECK(prev > l2_zeros);
}

TEST_CASE("training output is independent of the worker count") {
    const PatternSet ps = random_patterns(24, 40, 8600);
    const KernelContext ctx(ps, 0.04);
    TrainConfig cfg;
    cfg.lambda = 1e-3;
    cfg.workers = 1;
    const TrainResult serial = klr_train(ps, ctx, cfg);
    cfg.workers = 4;
    const TrainResult threaded = klr_train(ps, ctx, cfg);
    CHECK(serial.weights.alpha == threaded.weights.alpha);
}

TEST_CASE("global sign flip of the patterns preserves accuracy") {
    const PatternSet ps = random_patterns(18, 25, 8700);
    PatternSet neg = ps;
    for (std::size_t mu = 0; mu < ps.count(); ++mu)
        for (std::size_t i = 0; i < ps.dim(); ++i)
            neg.at(mu, i) = static_cast<std::int8_t>(-ps.at(mu, i));

    TrainConfig cfg;
    cfg.lambda = 1e-3;
    const KernelContext ctx_a(ps, 0.06);
    const KernelContext ctx_b(neg, 0.06);
    const TrainResult a = klr_train(ps, ctx_a, cfg);
    const TrainResult b = klr_train(neg, ctx_b, cfg);
    CHECK(bit_accuracy(a.weights, ps, ctx_a) ==
          doctest::Approx(bit_accuracy(b.weights, neg, ctx_b)).epsilon(1e-12));
}

TEST_CASE("regularizer tags are enforced") {
    const PatternSet ps = random_patterns(6, 3, 8800);
    const KernelContext ctx(ps, 0.1);
    TrainConfig l2;  // default L2
    TrainConfig l1;
    l1.regularizer = Regularizer::L1;
    CHECK_THROWS_AS(klr_train(ps, ctx, l1), std::invalid_argument);
    CHECK_THROWS_AS(lasso_train(ps, ctx, l2), std::invalid_argument);

    TrainConfig bad;
    bad.lambda = -1.0;
    CHECK_THROWS_AS(klr_train(ps, ctx, bad), std::invalid_argument);
    bad.lambda = 0.0;
    bad.tol = 0.0;
    CHECK_THROWS_AS(klr_train(ps, ctx, bad), std::invalid_argument);
}

TEST_CASE("largest_eigenvalue agrees with diagonal and Jacobi oracles") {
    Matrix d(4, 4, 0.0);
    d(0, 0) = 0.5;
    d(1, 1) = 3.25;
    d(2, 2) = 1.0;
    d(3, 3) = 2.0;
    CHECK(largest_eigenvalue(d) == doctest::Approx(3.25).epsilon(1e-10));

    RngStream rng(202);
    const Matrix b = random_matrix(6, 6, rng);
    Matrix spd(6, 6, 0.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k) spd(i, j) += b(k, i) * b(k, j);

    const auto eig = jacobi_eigenvalues(spd);
    double lam = 0.0;
    for (double e : eig) lam = std::max(lam, e);
    CHECK(largest_eigenvalue(spd, 500) == doctest::Approx(lam).epsilon(1e-8));
}
