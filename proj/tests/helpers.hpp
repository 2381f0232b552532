#ifndef KHAM_TESTS_HELPERS_HPP
#define KHAM_TESTS_HELPERS_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "kham/core.hpp"
#include "kham/rng.hpp"

namespace kham_test {

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
// Independent of the library's power iteration: used as an oracle.
inline std::vector<double> jacobi_eigenvalues(kham::Matrix a, std::size_t max_sweeps = 100) {
    const std::size_t n = a.rows();
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    return eig;
}

inline kham::PatternSet random_patterns(std::size_t n, std::size_t p, std::uint64_t seed) {
    kham::RngStream rng(seed);
    return kham::generate_patterns(n, p, rng);
}

inline kham::NetworkState random_state(std::size_t n, kham::RngStream& rng) {
    kham::NetworkState s(n);
    for (auto& v : s) v = static_cast<std::int8_t>(rng.next_sign() > 0 ? 1 : -1);
    return s;
}

inline kham::Matrix random_matrix(std::size_t rows, std::size_t cols, kham::RngStream& rng,
                                  double lo = -1.0, double hi = 1.0) {
    kham::Matrix m(rows, cols);
    for (auto& v : m.flat()) v = lo + (hi - lo) * rng.next_double();
    return m;
}

} // namespace kham_test

#endif
