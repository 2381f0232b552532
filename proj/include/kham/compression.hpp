#ifndef KHAM_COMPRESSION_HPP
#define KHAM_COMPRESSION_HPP

#include <cstddef>
#include <string>

#include "kham/core.hpp"

namespace kham {

enum class BinarizeCenter { Mean, Median };

// Description of a post-training weight transform.
struct CompressionSpec {
    enum class Kind { None, Quantize, Binarize, Prune };
    Kind kind = Kind::None;
    unsigned bits = 0;                              // Quantize: 2..32
    BinarizeCenter center = BinarizeCenter::Mean;   // Binarize
    double sparsity = 0.0;                          // Prune: [0, 1)

    static CompressionSpec none() { return {}; }
    static CompressionSpec quantize(unsigned k);
    static CompressionSpec binarize(BinarizeCenter c);
    static CompressionSpec prune(double s);

    std::string describe() const;
};

struct QuantizeResult {
    DualWeights weights;
    double delta = 0.0;     // step size
    bool degenerate = false; // x_max == x_min: identity transform, delta 0
};

// k-bit uniform quantizer over the global [min, max] of the matrix.
// Rounding is half-away-from-zero on the scaled value.
QuantizeResult quantize_uniform(const DualWeights& weights, unsigned k);

// Two-level output c + s * sign(x - c), s = mean |x - c|; sign(0) := +1.
DualWeights binarize(const DualWeights& weights, BinarizeCenter center);

// Zero the S fraction of entries with smallest |x| (ties broken by index).
DualWeights prune_magnitude(const DualWeights& weights, double sparsity);

// Apply whichever transform the spec describes.
DualWeights apply_compression(const DualWeights& weights, const CompressionSpec& spec);

// Step size of apply_compression when spec is a quantizer, else 0.
double compression_delta(const DualWeights& weights, const CompressionSpec& spec);

struct QuantErrorStats {
    double mse = 0.0;        // empirical mean squared quantization error
    double predicted = 0.0;  // delta^2 / 12
    double ratio = 0.0;      // mse / predicted
    bool degenerate = false;
};

QuantErrorStats quantization_error_stats(const DualWeights& weights, unsigned k);

} // namespace kham

#endif
