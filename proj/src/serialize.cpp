#include "kham/serialize.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kham {

namespace {

constexpr char kMagic[4] = {'K', 'H', 'W', 'T'};

template <typename T>
void put(std::ostream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("weight file: truncated");
    return v;
}

} // namespace

void write_weights(const WeightFile& wf, std::ostream& os) {
    os.write(kMagic, 4);
    put<std::uint32_t>(os, WeightFile::kVersion);
    put<std::uint64_t>(os, wf.weights.patterns());
    put<std::uint64_t>(os, wf.weights.neurons());
    put<double>(os, wf.gamma);
    put<double>(os, wf.lambda);
    put<std::uint32_t>(os, wf.regularizer);
    put<std::uint64_t>(os, wf.seed);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(wf.compression.kind));
    put<std::uint32_t>(os, wf.compression.bits);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(wf.compression.center));
    put<double>(os, wf.compression.sparsity);
    const auto& flat = wf.weights.alpha.flat();
    os.write(reinterpret_cast<const char*>(flat.data()),
             static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!os) throw std::runtime_error("weight file: write failed");
}

WeightFile read_weights(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("weight file: bad magic");
    const auto version = get<std::uint32_t>(is);
    if (version != WeightFile::kVersion)
        throw std::runtime_error("weight file: unsupported version " + std::to_string(version));

    WeightFile wf;
    const auto p = get<std::uint64_t>(is);
    const auto n = get<std::uint64_t>(is);
    wf.gamma = get<double>(is);
    wf.lambda = get<double>(is);
    wf.regularizer = get<std::uint32_t>(is);
    wf.seed = get<std::uint64_t>(is);
    wf.compression.kind = static_cast<CompressionSpec::Kind>(get<std::uint32_t>(is));
    wf.compression.bits = get<std::uint32_t>(is);
    wf.compression.center = static_cast<BinarizeCenter>(get<std::uint32_t>(is));
    wf.compression.sparsity = get<double>(is);

    wf.weights.alpha = Matrix(p, n);
    auto& flat = wf.weights.alpha.flat();
    is.read(reinterpret_cast<char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!is) throw std::runtime_error("weight file: truncated payload");
    return wf;
}

void save_weights(const WeightFile& wf, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    write_weights(wf, os);
}

WeightFile load_weights(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_weights(is);
}

} // namespace kham
