#include "kham/training.hpp"

#include <cmath>
#include <stdexcept>

#include "kham/parallel.hpp"

namespace kham {

namespace {

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow
inline double logistic_loss(double margin) {
    if (margin > 0.0) return std::log1p(std::exp(-margin));
    return -margin + std::log1p(std::exp(margin));
}

// y = M x for symmetric square M
void matvec(const Matrix& m, const std::vector<double>& x, std::vector<double>& y) {
    const std::size_t n = m.rows();
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < n; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

// loss part given u = K alpha
double loss_sum(const std::vector<double>& labels, const std::vector<double>& u) {
    double acc = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v) acc += logistic_loss(labels[v] * u[v]);
    return acc;
}

std::vector<double> column_labels(const PatternSet& patterns, std::size_t j) {
    std::vector<double> y(patterns.count());
    for (std::size_t v = 0; v < y.size(); ++v) y[v] = patterns.at(v, j);
    return y;
}

struct ColumnSolution {
    std::vector<double> alpha;
    ColumnReport report;
};

// L2 column: gradient descent on
//   f(a) = sum_v log(1 + exp(-y_v u_v)) + lambda a'u,  u = K a
// One matvec gives the gradient K w with w = sigma(u) - t + 2 lambda a,
// a second gives K g so backtracking trials stay matvec-free.
ColumnSolution solve_column_l2(const Matrix& gram, const std::vector<double>& labels,
                               const TrainConfig& cfg, double base_step) {
    const std::size_t p = gram.rows();
    ColumnSolution sol;
    sol.alpha.assign(p, 0.0);
    std::vector<double> u(p, 0.0), w(p), g(p), kg(p), alpha_try(p), u_try(p);

    double obj = loss_sum(labels, u);  // alpha = 0, penalty 0
    const double grad_target = cfg.tol * static_cast<double>(p);

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        for (std::size_t v = 0; v < p; ++v) {
            const double t = 0.5 * (labels[v] + 1.0);
            w[v] = sigmoid(u[v]) - t + 2.0 * cfg.lambda * sol.alpha[v];
        }
        matvec(gram, w, g);
        const double gnorm = norm2(g);
        sol.report.iterations = it;
        sol.report.final_residual = gnorm;
        if (gnorm <= grad_target) {
            sol.report.converged = true;
            return sol;
        }
        matvec(gram, g, kg);

        double step = base_step;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            for (std::size_t v = 0; v < p; ++v) {
                alpha_try[v] = sol.alpha[v] - step * g[v];
                u_try[v] = u[v] - step * kg[v];
            }
            const double obj_try = loss_sum(labels, u_try) + cfg.lambda * dot(alpha_try, u_try);
            if (obj_try < obj) {
                sol.alpha.swap(alpha_try);
                u.swap(u_try);
                obj = obj_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // no descent direction at floating-point resolution
            sol.report.converged = gnorm <= grad_target;
            return sol;
        }
    }
    return sol;
}

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

ColumnSolution solve_column_l1(const Matrix& gram, const std::vector<double>& labels,
                               const TrainConfig& cfg, double base_step) {
    const std::size_t p = gram.rows();
    ColumnSolution sol;
    sol.alpha.assign(p, 0.0);
    std::vector<double> u(p, 0.0), r(p), g(p), alpha_try(p), u_try(p);

    double obj = loss_sum(labels, u);  // + lambda * 0

    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
        for (std::size_t v = 0; v < p; ++v) {
            const double t = 0.5 * (labels[v] + 1.0);
            r[v] = sigmoid(u[v]) - t;
        }
        matvec(gram, r, g);

        double step = base_step;
        double displacement = 0.0;
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            double l1 = 0.0;
            for (std::size_t v = 0; v < p; ++v) {
                alpha_try[v] = soft_threshold(sol.alpha[v] - step * g[v], cfg.lambda * step);
                l1 += std::fabs(alpha_try[v]);
            }
            matvec(gram, alpha_try, u_try);
            const double obj_try = loss_sum(labels, u_try) + cfg.lambda * l1;
            if (obj_try <= obj) {
                double d2 = 0.0;
                for (std::size_t v = 0; v < p; ++v) {
                    const double d = alpha_try[v] - sol.alpha[v];
                    d2 += d * d;
                }
                displacement = std::sqrt(d2);
                sol.alpha.swap(alpha_try);
                u.swap(u_try);
                obj = obj_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        sol.report.iterations = it + 1;
        sol.report.final_residual = displacement;
        if (!accepted || displacement <= cfg.tol) {
            sol.report.converged = true;
            return sol;
        }
    }
    return sol;
}

TrainResult run_training(const PatternSet& patterns, const KernelContext& ctx,
                         const TrainConfig& cfg, bool l1) {
    cfg.validate();
    if (ctx.gram().rows() != patterns.count())
        throw std::invalid_argument("train: KernelContext does not match the pattern set");

    const std::size_t p = patterns.count();
    const std::size_t n = patterns.dim();
    const double kmax = largest_eigenvalue(ctx.gram());
    // Lipschitz bound of the smooth gradient: lmax(K)^2 / 4 (+ 2 lambda lmax for L2)
    const double lips = l1 ? 0.25 * kmax * kmax
                           : 0.25 * kmax * kmax + 2.0 * cfg.lambda * kmax;
    const double base_step = 1.0 / lips;

    TrainResult result;
    result.weights.alpha = Matrix(p, n);
    result.columns.resize(n);

    parallel_for(n, cfg.workers, [&](std::size_t j) {
        const auto labels = column_labels(patterns, j);
        ColumnSolution sol = l1 ? solve_column_l1(ctx.gram(), labels, cfg, base_step)
                                : solve_column_l2(ctx.gram(), labels, cfg, base_step);
        for (std::size_t v = 0; v < p; ++v) result.weights.alpha(v, j) = sol.alpha[v];
        result.columns[j] = sol.report;
    });
    return result;
}

} // namespace

void TrainConfig::validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("TrainConfig: lambda must be >= 0");
    if (max_iters < 1) throw std::invalid_argument("TrainConfig: max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("TrainConfig: tol must be > 0");
}

TrainResult klr_train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg) {
    if (cfg.regularizer != Regularizer::L2KernelNorm)
        throw std::invalid_argument("klr_train: config must use the L2 kernel-norm regularizer");
    return run_training(patterns, ctx, cfg, /*l1=*/false);
}

TrainResult lasso_train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg) {
    if (cfg.regularizer != Regularizer::L1)
        throw std::invalid_argument("lasso_train: config must use the L1 regularizer");
    return run_training(patterns, ctx, cfg, /*l1=*/true);
}

TrainResult train(const PatternSet& patterns, const KernelContext& ctx, const TrainConfig& cfg) {
    return cfg.regularizer == Regularizer::L1 ? lasso_train(patterns, ctx, cfg)
                                              : klr_train(patterns, ctx, cfg);
}

double column_objective(const Matrix& gram, const std::vector<double>& labels,
                        const std::vector<double>& alpha, const TrainConfig& cfg) {
    std::vector<double> u(alpha.size());
    matvec(gram, alpha, u);
    double obj = loss_sum(labels, u);
    if (cfg.regularizer == Regularizer::L1) {
        double l1 = 0.0;
        for (double a : alpha) l1 += std::fabs(a);
        obj += cfg.lambda * l1;
    } else {
        obj += cfg.lambda * dot(alpha, u);
    }
    return obj;
}

std::vector<double> column_gradient_l2(const Matrix& gram, const std::vector<double>& labels,
                                       const std::vector<double>& alpha, double lambda) {
    const std::size_t p = alpha.size();
    std::vector<double> u(p), w(p), g(p);
    matvec(gram, alpha, u);
    for (std::size_t v = 0; v < p; ++v) {
        const double t = 0.5 * (labels[v] + 1.0);
        w[v] = sigmoid(u[v]) - t + 2.0 * lambda * alpha[v];
    }
    matvec(gram, w, g);
    return g;
}

double objective_value(const PatternSet& patterns, const KernelContext& ctx,
                       const DualWeights& weights, const TrainConfig& cfg) {
    const std::size_t p = patterns.count();
    const std::size_t n = patterns.dim();
    if (weights.patterns() != p || weights.neurons() != n)
        throw std::invalid_argument("objective_value: dimension mismatch");
    double total = 0.0;
    std::vector<double> alpha(p);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t v = 0; v < p; ++v) alpha[v] = weights.alpha(v, j);
        total += column_objective(ctx.gram(), column_labels(patterns, j), alpha, cfg);
    }
    return total;
}

double largest_eigenvalue(const Matrix& m, std::size_t iters) {
    const std::size_t n = m.rows();
    std::vector<double> v(n, 1.0), mv(n);
    double eig = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
        matvec(m, v, mv);
        eig = norm2(mv);
        if (eig == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = mv[i] / eig;
    }
    return eig;
}

} // namespace kham
