#include "kham/dynamics.hpp"

#include <stdexcept>

namespace kham {

Network::Network(const PatternSet& p, const DualWeights& w, const KernelContext& c)
    : patterns(p), weights(w), ctx(c), packed(p) {
    if (w.patterns() != p.count() || w.neurons() != p.dim())
        throw std::invalid_argument("Network: weight dimensions do not match the pattern set");
}

std::vector<double> potential(const NetworkState& s, const Network& net) {
    if (s.size() != net.patterns.dim())
        throw std::invalid_argument("potential: state dimension mismatch");
    const auto k = kernel_vector(s, net.packed, net.ctx);
    const std::size_t p = net.patterns.count();
    const std::size_t n = net.patterns.dim();
    std::vector<double> h(n, 0.0);
    for (std::size_t mu = 0; mu < p; ++mu) {
        const double kv = k[mu];
        if (kv == 0.0) continue;
        const double* arow = net.weights.alpha.row(mu);
        for (std::size_t i = 0; i < n; ++i) h[i] += arow[i] * kv;
    }
    return h;
}

NetworkState update_sync(const NetworkState& s, const Network& net) {
    const auto h = potential(s, net);
    NetworkState out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i)
        out[i] = h[i] >= 0.0 ? 1 : -1;
    return out;
}

RecallOutcome recall(const NetworkState& s0, const Network& net, std::size_t max_iters) {
    if (max_iters < 1) throw std::invalid_argument("recall: max_iters must be >= 1");
    RecallOutcome out;
    NetworkState prev2;  // state two steps back, for 2-cycle detection
    NetworkState prev = s0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        NetworkState next = update_sync(prev, net);
        out.iterations = it;
        if (next == prev) {
            out.final = std::move(next);
            out.status = RecallStatus::FixedPoint;
            return out;
        }
        if (!prev2.empty() && next == prev2) {
            out.final = std::move(next);
            out.status = RecallStatus::CycleDetected;
            return out;
        }
        prev2 = std::move(prev);
        prev = std::move(next);
    }
    out.final = std::move(prev);
    out.status = RecallStatus::MaxIters;
    return out;
}

} // namespace kham
