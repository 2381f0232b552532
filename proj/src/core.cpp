#include "kham/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace kham {

PatternSet generate_patterns(std::size_t n, std::size_t p, RngStream& rng) {
    if (n == 0 || p == 0) throw std::invalid_argument("generate_patterns: n and p must be >= 1");
    if (p > (std::numeric_limits<std::size_t>::max)() / n)
        throw std::invalid_argument("generate_patterns: dimensions overflow");
    PatternSet ps(p, n);
    for (std::size_t mu = 0; mu < p; ++mu)
        for (std::size_t i = 0; i < n; ++i)
            ps.at(mu, i) = static_cast<std::int8_t>(rng.next_sign());
    return ps;
}

NetworkState flip_noise(const NetworkState& state, double rho, RngStream& rng) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("flip_noise: rho must be in [0,1]");
    const std::size_t n = state.size();
    const std::size_t k = static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
    NetworkState out = state;
    if (k == 0) return out;

    // partial Fisher-Yates: the first k entries of idx are a uniform k-subset
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = j + rng.next_below(n - j);
        std::swap(idx[j], idx[r]);
        out[idx[j]] = static_cast<std::int8_t>(-out[idx[j]]);
    }
    return out;
}

} // namespace kham
