#include "kham/rng.hpp"

namespace kham {

namespace {

// FNV-1a over bytes, used only to fold the purpose tag into the key
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t RngSeed::derive(std::uint64_t trial, std::string_view tag) const {
    std::uint64_t h = mix(base + 0x9E3779B97F4A7C15ull);
    h = mix(h ^ (trial + 0x9E3779B97F4A7C15ull));
    h = mix(h ^ fnv1a(tag));
    return h;
}

} // namespace kham
