#ifndef KHAM_METRICS_HPP
#define KHAM_METRICS_HPP

#include <cstddef>
#include <utility>

#include "kham/core.hpp"
#include "kham/dynamics.hpp"
#include "kham/kernel.hpp"
#include "kham/rng.hpp"

namespace kham {

struct MetricsReport {
    double bit_accuracy = 0.0;
    double stability_margin = 0.0;
};

// Fraction of (pattern, neuron) pairs with sign(h_i(xi^mu)) == xi^mu_i.
// The kernel vector at s = xi^mu is row mu of the Gram matrix.
double bit_accuracy(const DualWeights& weights, const PatternSet& patterns,
                    const KernelContext& ctx);

// Mean alignment h_i(xi^mu) * xi^mu_i over all (mu, i).
double stability_margin(const DualWeights& weights, const PatternSet& patterns,
                        const KernelContext& ctx);

MetricsReport evaluate(const DualWeights& weights, const PatternSet& patterns,
                       const KernelContext& ctx);

struct RecallAccuracy {
    double mean = 0.0;
    double stddev = 0.0;
};

// Noisy-recall score: trial t targets pattern t mod P, flips round(rho*N)
// bits, runs the dynamics, and scores the matching fraction.
RecallAccuracy recall_accuracy(const DualWeights& weights, const PatternSet& patterns,
                               const KernelContext& ctx, double rho, std::size_t trials,
                               std::size_t max_iters, RngStream& rng);

// baseline - compressed; positive means performance lost
inline double degradation(double baseline, double compressed) { return baseline - compressed; }

} // namespace kham

#endif
