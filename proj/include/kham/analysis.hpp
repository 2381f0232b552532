#ifndef KHAM_ANALYSIS_HPP
#define KHAM_ANALYSIS_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "kham/core.hpp"
#include "kham/kernel.hpp"
#include "kham/rng.hpp"

namespace kham {

struct InfluenceProfile {
    std::size_t target = 0;            // neuron index j
    std::vector<double> influence;     // length N, each in [0, 1]
    std::size_t samples = 0;
    bool cross_only = false;           // whether summaries exclude i == j

    // influence values excluding the self term
    std::vector<double> cross_values() const;
};

// Influence of each input coordinate on the sign of f over uniform random
// states; the same base states are reused for every coordinate (common
// random numbers). f maps a bipolar state to a real.
InfluenceProfile influence_profile(const std::function<double(const NetworkState&)>& f,
                                   std::size_t n, std::size_t samples, RngStream& rng);

// Influence profile of the trained potential h_j. Uses the rank-1 structure
// of a single-bit flip on the RBF kernel, so each sample costs O(P*N).
InfluenceProfile walsh_influence(const DualWeights& weights, const PatternSet& patterns,
                                 const KernelContext& ctx, std::size_t j,
                                 std::size_t samples, RngStream& rng);

// Gini coefficient of a nonnegative vector with positive mean, via the
// sorted-form O(n log n) identity.
double gini(const std::vector<double>& values);

struct BimodalityStats {
    bool bimodal = false;
    double mode_low = 0.0;     // bin centers of the two dominant peaks
    double mode_high = 0.0;    // equal to mode_low when unimodal
    double central_mass = 0.0; // fraction of entries with |x| < 0.1 * max|x|
    double valley_depth = 0.0; // min count between modes / smaller mode count
};

BimodalityStats bimodality_stats(const DualWeights& weights, std::size_t bins = 101);
BimodalityStats bimodality_stats(const std::vector<double>& values, std::size_t bins = 101);

struct Histogram {
    std::vector<double> centers;
    std::vector<std::size_t> counts;
};

Histogram histogram(const std::vector<double>& values, std::size_t bins);

struct PowerLawFit {
    bool available = false;
    double slope = 0.0;      // beta
    double intercept = 0.0;  // log-space offset
    double r_squared = 0.0;
    std::size_t points_used = 0;
};

// OLS of log(degradation) on log(delta^2), over strictly positive pairs.
PowerLawFit fit_power_law(const std::vector<double>& delta_squared,
                          const std::vector<double>& degradation);

} // namespace kham

#endif
