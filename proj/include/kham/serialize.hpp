#ifndef KHAM_SERIALIZE_HPP
#define KHAM_SERIALIZE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "kham/compression.hpp"
#include "kham/core.hpp"

namespace kham {

// Flat binary container for trained (optionally compressed) weights.
struct WeightFile {
    static constexpr std::uint32_t kVersion = 1;

    DualWeights weights;
    double gamma = 0.0;
    double lambda = 0.0;
    std::uint32_t regularizer = 0;  // 0 = L2 kernel norm, 1 = L1
    std::uint64_t seed = 0;
    CompressionSpec compression;
};

void save_weights(const WeightFile& wf, const std::string& path);
WeightFile load_weights(const std::string& path);

void write_weights(const WeightFile& wf, std::ostream& os);
WeightFile read_weights(std::istream& is);

} // namespace kham

#endif
