#ifndef KHAM_DYNAMICS_HPP
#define KHAM_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include "kham/core.hpp"
#include "kham/kernel.hpp"

namespace kham {

enum class RecallStatus { FixedPoint, CycleDetected, MaxIters };

struct RecallOutcome {
    NetworkState final;
    std::size_t iterations = 0;
    RecallStatus status = RecallStatus::MaxIters;
};

// Bundles everything retrieval needs; packed patterns are built once.
struct Network {
    const PatternSet& patterns;
    const DualWeights& weights;
    const KernelContext& ctx;
    PackedPatterns packed;

    Network(const PatternSet& p, const DualWeights& w, const KernelContext& c);
};

// h_i = sum_mu alpha_{mu i} K(s, xi^mu)
std::vector<double> potential(const NetworkState& s, const Network& net);

// s'_i = sign(h_i), sign(0) := +1
NetworkState update_sync(const NetworkState& s, const Network& net);

// Synchronous iteration until fixed point, 2-cycle, or max_iters.
RecallOutcome recall(const NetworkState& s0, const Network& net, std::size_t max_iters = 100);

} // namespace kham

#endif
