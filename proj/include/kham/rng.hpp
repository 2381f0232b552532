#ifndef KHAM_RNG_HPP
#define KHAM_RNG_HPP

#include <cstdint>
#include <string_view>

namespace kham {

// Deterministic, platform-independent random stream. Derivation of a
// sub-stream from (base, trial, tag) is a keyed splitmix-style hash, so
// adding new experiments never perturbs existing streams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds decorrelate immediately
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bias-free (rejection)
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform double in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // fair coin as +1 / -1
    int next_sign() { return (next_u64() & 1u) ? 1 : -1; }

private:
    std::uint64_t state_;
};

struct RngSeed {
    std::uint64_t base = 0;

    // sub-seed for (trial, purpose tag); stable across platforms
    std::uint64_t derive(std::uint64_t trial, std::string_view tag) const;
    RngStream stream(std::uint64_t trial, std::string_view tag) const {
        return RngStream(derive(trial, tag));
    }
};

} // namespace kham

#endif
