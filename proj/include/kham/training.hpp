#ifndef KHAM_TRAINING_HPP
#define KHAM_TRAINING_HPP

#include <cstddef>
#include <vector>

#include "kham/core.hpp"
#include "kham/kernel.hpp"

namespace kham {

enum class Regularizer { L2KernelNorm, L1 };

struct TrainConfig {
    Regularizer regularizer = Regularizer::L2KernelNorm;
    double lambda = 0.0;       // >= 0; default chosen by callers as 1e-4 * P
    std::size_t max_iters = 2000;
    double tol = 1e-4;         // gradient-norm (L2) or displacement (L1) threshold
    unsigned workers = 1;

    void validate() const;
};

struct ColumnReport {
    bool converged = false;
    std::size_t iterations = 0;
    double final_residual = 0.0;  // gradient norm (L2) or displacement (L1)
};

struct TrainResult {
    DualWeights weights;
    std::vector<ColumnReport> columns;  // one per output neuron

    bool all_converged() const {
        for (const auto& c : columns)
            if (!c.converged) return false;
        return true;
    }
    std::size_t unconverged_count() const {
        std::size_t n = 0;
        for (const auto& c : columns) n += !c.converged;
        return n;
    }
};

// Per-neuron kernel logistic regression with L2 kernel-norm penalty:
//   L_j(a) = sum_v log(1 + exp(-xi^v_j (K a)_v)) + lambda a' K a
// minimized by full-batch gradient descent with backtracking halving.
TrainResult klr_train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg);

// L1 variant: proximal gradient (soft thresholding by lambda * step).
TrainResult lasso_train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg);

// Dispatch on cfg.regularizer.
TrainResult train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg);

// Total objective sum_j L_j for monitoring and cross-checks.
double objective_value(const PatternSet& patterns, const KernelContext& ctx,
                       const DualWeights& weights, const TrainConfig& cfg);

// Objective and analytic gradient of a single column (exposed for tests).
// labels[v] = xi^v_j in {-1, +1}.
double column_objective(const Matrix& gram, const std::vector<double>& labels,
                        const std::vector<double>& alpha, const TrainConfig& cfg);
std::vector<double> column_gradient_l2(const Matrix& gram, const std::vector<double>& labels,
                                       const std::vector<double>& alpha, double lambda);

// Largest eigenvalue of a symmetric PSD matrix by power iteration
// (deterministic all-ones start).
double largest_eigenvalue(const Matrix& m, std::size_t iters = 200);

} // namespace kham

#endif
