#ifndef KHAM_KERNEL_HPP
#define KHAM_KERNEL_HPP

#include <cstdint>
#include <vector>

#include "kham/core.hpp"

namespace kham {

// Bit-packed bipolar vectors: bit b of the word array holds 1 when
// component b is +1. Padding bits beyond N are fixed at 0, so XOR of two
// packed rows never counts padding.
class PackedPatterns {
public:
    PackedPatterns() = default;
    explicit PackedPatterns(const PatternSet& patterns);

    static std::vector<std::uint64_t> pack_state(const NetworkState& s);

    std::size_t count() const { return p_; }
    std::size_t dim() const { return n_; }
    std::size_t words_per_row() const { return words_; }

    const std::uint64_t* row(std::size_t mu) const { return bits_.data() + mu * words_; }

    PatternSet unpack() const;

private:
    std::size_t p_ = 0, n_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

std::size_t packed_hamming(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
std::size_t packed_hamming(const PackedPatterns& pp, std::size_t mu, std::size_t nu);

// gamma plus the precomputed P x P Gram matrix over the stored patterns.
// Also memoizes exp(-4*gamma*d) for d in {0..N}: bipolar squared distance
// is 4 * Hamming distance, an integer, so the table is exact.
class KernelContext {
public:
    KernelContext(const PatternSet& patterns, double gamma);

    double gamma() const { return gamma_; }
    const Matrix& gram() const { return gram_; }
    std::size_t dim() const { return n_; }

    // kernel value at integer Hamming distance d
    double at_distance(std::size_t d) const { return exp_table_[d]; }

private:
    double gamma_;
    std::size_t n_;
    Matrix gram_;
    std::vector<double> exp_table_;
};

// K(x, y) = exp(-gamma * ||x - y||^2) = exp(-gamma * 4 * d_H(x, y))
double rbf(const NetworkState& x, const NetworkState& y, double gamma);

// component mu = rbf(s, pattern mu, gamma); packed fast path
std::vector<double> kernel_vector(const NetworkState& s, const PackedPatterns& packed,
                                  const KernelContext& ctx);
std::vector<double> kernel_vector(const NetworkState& s, const PatternSet& patterns,
                                  double gamma);

// per-pattern Hamming distances from s, via XOR/popcount
std::vector<std::size_t> hamming_profile(const NetworkState& s, const PackedPatterns& packed);

} // namespace kham

#endif
