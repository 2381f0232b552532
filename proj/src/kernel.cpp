#include "kham/kernel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace kham {

PackedPatterns::PackedPatterns(const PatternSet& patterns)
    : p_(patterns.count()), n_(patterns.dim()), words_((patterns.dim() + 63) / 64),
      bits_(p_ * words_, 0) {
    for (std::size_t mu = 0; mu < p_; ++mu) {
        std::uint64_t* w = bits_.data() + mu * words_;
        for (std::size_t i = 0; i < n_; ++i)
            if (patterns.at(mu, i) > 0) w[i >> 6] |= (std::uint64_t{1} << (i & 63));
    }
}

std::vector<std::uint64_t> PackedPatterns::pack_state(const NetworkState& s) {
    std::vector<std::uint64_t> w((s.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] > 0) w[i >> 6] |= (std::uint64_t{1} << (i & 63));
    return w;
}

PatternSet PackedPatterns::unpack() const {
    PatternSet ps(p_, n_);
    for (std::size_t mu = 0; mu < p_; ++mu) {
        const std::uint64_t* w = row(mu);
        for (std::size_t i = 0; i < n_; ++i)
            ps.at(mu, i) = (w[i >> 6] >> (i & 63)) & 1 ? 1 : -1;
    }
    return ps;
}

std::size_t packed_hamming(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
    std::size_t d = 0;
    for (std::size_t w = 0; w < words; ++w) d += std::popcount(a[w] ^ b[w]);
    return d;
}

std::size_t packed_hamming(const PackedPatterns& pp, std::size_t mu, std::size_t nu) {
    return packed_hamming(pp.row(mu), pp.row(nu), pp.words_per_row());
}

KernelContext::KernelContext(const PatternSet& patterns, double gamma)
    : gamma_(gamma), n_(patterns.dim()), gram_(patterns.count(), patterns.count()) {
    if (!(gamma > 0.0)) throw std::invalid_argument("KernelContext: gamma must be > 0");
    exp_table_.resize(n_ + 1);
    for (std::size_t d = 0; d <= n_; ++d)
        exp_table_[d] = std::exp(-4.0 * gamma_ * static_cast<double>(d));

    const PackedPatterns packed(patterns);
    const std::size_t p = patterns.count();
    for (std::size_t mu = 0; mu < p; ++mu) {
        gram_(mu, mu) = 1.0;
        for (std::size_t nu = mu + 1; nu < p; ++nu) {
            const double v = exp_table_[packed_hamming(packed, mu, nu)];
            gram_(mu, nu) = v;
            gram_(nu, mu) = v;
        }
    }
}

double rbf(const NetworkState& x, const NetworkState& y, double gamma) {
    if (x.size() != y.size()) throw std::invalid_argument("rbf: length mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf: gamma must be > 0");
    return std::exp(-4.0 * gamma * static_cast<double>(hamming(x, y)));
}

std::vector<std::size_t> hamming_profile(const NetworkState& s, const PackedPatterns& packed) {
    if (s.size() != packed.dim()) throw std::invalid_argument("hamming_profile: dimension mismatch");
    const auto sw = PackedPatterns::pack_state(s);
    std::vector<std::size_t> d(packed.count());
    for (std::size_t mu = 0; mu < packed.count(); ++mu)
        d[mu] = packed_hamming(sw.data(), packed.row(mu), packed.words_per_row());
    return d;
}

std::vector<double> kernel_vector(const NetworkState& s, const PackedPatterns& packed,
                                  const KernelContext& ctx) {
    if (s.size() != ctx.dim()) throw std::invalid_argument("kernel_vector: dimension mismatch");
    const auto dists = hamming_profile(s, packed);
    std::vector<double> k(dists.size());
    for (std::size_t mu = 0; mu < dists.size(); ++mu) k[mu] = ctx.at_distance(dists[mu]);
    return k;
}

std::vector<double> kernel_vector(const NetworkState& s, const PatternSet& patterns,
                                  double gamma) {
    if (s.size() != patterns.dim()) throw std::invalid_argument("kernel_vector: dimension mismatch");
    std::vector<double> k(patterns.count());
    for (std::size_t mu = 0; mu < patterns.count(); ++mu)
        k[mu] = rbf(s, patterns.pattern(mu), gamma);
    return k;
}

} // namespace kham
