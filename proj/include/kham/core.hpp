#ifndef KHAM_CORE_HPP
#define KHAM_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kham/rng.hpp"

namespace kham {

// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double>& flat() { return data_; }
    const std::vector<double>& flat() const { return data_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// State of the N neurons, entries in {-1, +1}.
using NetworkState = std::vector<std::int8_t>;

// P stored bipolar patterns of dimension N, row-major, entries in {-1, +1}.
class PatternSet {
public:
    PatternSet(std::size_t p, std::size_t n)
        : p_(p), n_(n), data_(p * n, 1) {
        if (p == 0 || n == 0) throw std::invalid_argument("PatternSet: P and N must be >= 1");
    }

    std::size_t count() const { return p_; }  // P
    std::size_t dim() const { return n_; }    // N

    std::int8_t& at(std::size_t mu, std::size_t i) { return data_[mu * n_ + i]; }
    std::int8_t at(std::size_t mu, std::size_t i) const { return data_[mu * n_ + i]; }

    const std::int8_t* row(std::size_t mu) const { return data_.data() + mu * n_; }

    NetworkState pattern(std::size_t mu) const {
        return NetworkState(row(mu), row(mu) + n_);
    }

    const std::vector<std::int8_t>& flat() const { return data_; }

    bool operator==(const PatternSet& o) const {
        return p_ == o.p_ && n_ == o.n_ && data_ == o.data_;
    }

private:
    std::size_t p_, n_;
    std::vector<std::int8_t> data_;
};

// The P x N matrix of dual variables (row mu = pattern, column i = neuron).
struct DualWeights {
    Matrix alpha;

    std::size_t patterns() const { return alpha.rows(); }
    std::size_t neurons() const { return alpha.cols(); }
};

// Each entry independently +1/-1 with probability 1/2.
PatternSet generate_patterns(std::size_t n, std::size_t p, RngStream& rng);

// Flip exactly round(rho * N) distinct positions, chosen uniformly.
NetworkState flip_noise(const NetworkState& state, double rho, RngStream& rng);

inline std::size_t hamming(const NetworkState& a, const NetworkState& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

} // namespace kham

#endif
