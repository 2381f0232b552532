#include "kham/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace kham {

namespace {

void check_dims(const DualWeights& w, const PatternSet& ps, const KernelContext& ctx) {
    if (w.patterns() != ps.count() || w.neurons() != ps.dim() ||
        ctx.gram().rows() != ps.count())
        throw std::invalid_argument("metrics: dimension mismatch");
}

// h(xi^mu) for all mu at once: H = K * A  (P x N)
Matrix stored_potentials(const DualWeights& w, const PatternSet& ps, const KernelContext& ctx) {
    const std::size_t p = ps.count(), n = ps.dim();
    Matrix h(p, n);
    for (std::size_t mu = 0; mu < p; ++mu) {
        const double* krow = ctx.gram().row(mu);
        double* hrow = h.row(mu);
        for (std::size_t nu = 0; nu < p; ++nu) {
            const double kv = krow[nu];
            const double* arow = w.alpha.row(nu);
            for (std::size_t i = 0; i < n; ++i) hrow[i] += kv * arow[i];
        }
    }
    return h;
}

} // namespace

double bit_accuracy(const DualWeights& weights, const PatternSet& patterns,
                    const KernelContext& ctx) {
    check_dims(weights, patterns, ctx);
    const Matrix h = stored_potentials(weights, patterns, ctx);
    std::size_t hits = 0;
    for (std::size_t mu = 0; mu < patterns.count(); ++mu)
        for (std::size_t i = 0; i < patterns.dim(); ++i) {
            const int sign = h(mu, i) >= 0.0 ? 1 : -1;
            hits += (sign == patterns.at(mu, i));
        }
    return static_cast<double>(hits) / static_cast<double>(patterns.count() * patterns.dim());
}

double stability_margin(const DualWeights& weights, const PatternSet& patterns,
                        const KernelContext& ctx) {
    check_dims(weights, patterns, ctx);
    const Matrix h = stored_potentials(weights, patterns, ctx);
    double acc = 0.0;
    for (std::size_t mu = 0; mu < patterns.count(); ++mu)
        for (std::size_t i = 0; i < patterns.dim(); ++i)
            acc += h(mu, i) * patterns.at(mu, i);
    return acc / static_cast<double>(patterns.count() * patterns.dim());
}

MetricsReport evaluate(const DualWeights& weights, const PatternSet& patterns,
                       const KernelContext& ctx) {
    MetricsReport r;
    r.bit_accuracy = bit_accuracy(weights, patterns, ctx);
    r.stability_margin = stability_margin(weights, patterns, ctx);
    return r;
}

RecallAccuracy recall_accuracy(const DualWeights& weights, const PatternSet& patterns,
                               const KernelContext& ctx, double rho, std::size_t trials,
                               std::size_t max_iters, RngStream& rng) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw std::invalid_argument("recall_accuracy: rho must be in [0,1]");
    check_dims(weights, patterns, ctx);
    const Network net(patterns, weights, ctx);
    const std::size_t n = patterns.dim();

    double sum = 0.0, sumsq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t mu = t % patterns.count();
        const NetworkState target = patterns.pattern(mu);
        const NetworkState start = flip_noise(target, rho, rng);
        const RecallOutcome out = recall(start, net, max_iters);
        const double score =
            1.0 - static_cast<double>(hamming(out.final, target)) / static_cast<double>(n);
        sum += score;
        sumsq += score * score;
    }
    RecallAccuracy r;
    const double tn = static_cast<double>(trials);
    r.mean = sum / tn;
    const double var = sumsq / tn - r.mean * r.mean;
    r.stddev = var > 0.0 ? std::sqrt(var) : 0.0;
    return r;
}

} // namespace kham
