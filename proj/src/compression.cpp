#include "kham/compression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kham {

CompressionSpec CompressionSpec::quantize(unsigned k) {
    if (k < 2 || k > 32) throw std::invalid_argument("CompressionSpec: bits must be in [2, 32]");
    CompressionSpec s;
    s.kind = Kind::Quantize;
    s.bits = k;
    return s;
}

CompressionSpec CompressionSpec::binarize(BinarizeCenter c) {
    CompressionSpec s;
    s.kind = Kind::Binarize;
    s.bits = 1;
    s.center = c;
    return s;
}

CompressionSpec CompressionSpec::prune(double sparsity) {
    if (!(sparsity >= 0.0 && sparsity < 1.0))
        throw std::invalid_argument("CompressionSpec: sparsity must be in [0, 1)");
    CompressionSpec s;
    s.kind = Kind::Prune;
    s.sparsity = sparsity;
    return s;
}

std::string CompressionSpec::describe() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Quantize: return "quantize_k" + std::to_string(bits);
        case Kind::Binarize:
            return std::string("binarize_") + (center == BinarizeCenter::Mean ? "mean" : "median");
        case Kind::Prune: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "prune_s%.4g", sparsity);
            return buf;
        }
    }
    return "unknown";
}

QuantizeResult quantize_uniform(const DualWeights& weights, unsigned k) {
    if (k < 2 || k > 32) throw std::invalid_argument("quantize_uniform: k must be in [2, 32]");
    const auto& src = weights.alpha.flat();
    if (src.empty()) throw std::invalid_argument("quantize_uniform: empty weights");

    const auto [mn_it, mx_it] = std::minmax_element(src.begin(), src.end());
    const double xmin = *mn_it, xmax = *mx_it;

    QuantizeResult out;
    out.weights = weights;
    if (xmax == xmin) {
        out.degenerate = true;
        return out;
    }

    const double levels = std::ldexp(1.0, static_cast<int>(k)) - 1.0;  // 2^k - 1
    const double delta = (xmax - xmin) / levels;
    out.delta = delta;

    auto& dst = out.weights.alpha.flat();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        // scaled value is >= 0, so half-away-from-zero is floor(v + 0.5)
        double m = std::floor((src[i] - xmin) / delta + 0.5);
        if (m < 0.0) m = 0.0;
        if (m > levels) m = levels;
        dst[i] = xmin + m * delta;
    }
    return out;
}

DualWeights binarize(const DualWeights& weights, BinarizeCenter center) {
    const auto& src = weights.alpha.flat();
    if (src.empty()) throw std::invalid_argument("binarize: empty weights");

    double c;
    if (center == BinarizeCenter::Mean) {
        c = std::accumulate(src.begin(), src.end(), 0.0) / static_cast<double>(src.size());
    } else {
        std::vector<double> sorted(src);
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        c = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    }

    double s = 0.0;
    for (double x : src) s += std::fabs(x - c);
    s /= static_cast<double>(src.size());

    DualWeights out = weights;
    auto& flat = out.alpha.flat();
    for (std::size_t i = 0; i < flat.size(); ++i)
        flat[i] = c + (src[i] - c >= 0.0 ? s : -s);
    return out;
}

DualWeights prune_magnitude(const DualWeights& weights, double sparsity) {
    if (!(sparsity >= 0.0 && sparsity < 1.0))
        throw std::invalid_argument("prune_magnitude: sparsity must be in [0, 1)");
    DualWeights out = weights;
    auto& flat = out.alpha.flat();
    const std::size_t d = flat.size();
    const std::size_t kill = static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(d)));
    if (kill == 0) return out;

    // ascending (|x|, index); ties at the threshold resolved by index
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::fabs(flat[a]), fb = std::fabs(flat[b]);
        return fa != fb ? fa < fb : a < b;
    });
    for (std::size_t r = 0; r < kill; ++r) flat[order[r]] = 0.0;
    return out;
}

DualWeights apply_compression(const DualWeights& weights, const CompressionSpec& spec) {
    switch (spec.kind) {
        case CompressionSpec::Kind::None: return weights;
        case CompressionSpec::Kind::Quantize: return quantize_uniform(weights, spec.bits).weights;
        case CompressionSpec::Kind::Binarize: return binarize(weights, spec.center);
        case CompressionSpec::Kind::Prune: return prune_magnitude(weights, spec.sparsity);
    }
    throw std::logic_error("apply_compression: bad spec");
}

double compression_delta(const DualWeights& weights, const CompressionSpec& spec) {
    if (spec.kind != CompressionSpec::Kind::Quantize) return 0.0;
    const auto& src = weights.alpha.flat();
    const auto [mn_it, mx_it] = std::minmax_element(src.begin(), src.end());
    const double levels = std::ldexp(1.0, static_cast<int>(spec.bits)) - 1.0;
    return (*mx_it - *mn_it) / levels;
}

QuantErrorStats quantization_error_stats(const DualWeights& weights, unsigned k) {
    QuantErrorStats stats;
    const QuantizeResult q = quantize_uniform(weights, k);
    stats.degenerate = q.degenerate;
    if (q.degenerate) return stats;
    const auto& a = weights.alpha.flat();
    const auto& b = q.weights.alpha.flat();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = b[i] - a[i];
        acc += e * e;
    }
    stats.mse = acc / static_cast<double>(a.size());
    stats.predicted = q.delta * q.delta / 12.0;
    stats.ratio = stats.predicted > 0.0 ? stats.mse / stats.predicted : 0.0;
    return stats;
}

} // namespace kham
