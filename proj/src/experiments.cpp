#include "kham/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "kham/dynamics.hpp"
#include "kham/parallel.hpp"

namespace kham {

std::size_t ExperimentConfig::pattern_count() const {
    const auto p = static_cast<std::size_t>(std::llround(load * static_cast<double>(n)));
    return p > 0 ? p : 1;
}

double ExperimentConfig::effective_lambda() const {
    if (lambda >= 0.0) return lambda;
    return 1e-4 * static_cast<double>(pattern_count());
}

TrainConfig ExperimentConfig::train_config(Regularizer reg) const {
    TrainConfig tc;
    tc.regularizer = reg;
    tc.lambda = effective_lambda();
    tc.max_iters = train_max_iters;
    tc.tol = train_tol;
    tc.workers = 1;  // sweeps parallelize over trials instead
    return tc;
}

void ExperimentConfig::validate() const {
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (!(load > 0.0)) throw std::invalid_argument("config: load must be > 0");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (gamma < 0.0) throw std::invalid_argument("config: gamma must be >= 0");
}

std::vector<unsigned> default_bit_depths() { return {32, 16, 8, 4, 3, 2, 1}; }
std::vector<unsigned> default_scaling_bit_depths() { return {16, 12, 10, 8, 7, 6, 5, 4, 3, 2}; }
std::vector<double> default_sparsities() { return {0.0, 0.05, 0.1, 0.2, 0.3, 0.5}; }
std::vector<double> default_noise_levels() { return {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}; }

// Calibration uses a coarse log-spaced grid on purpose: at small n the
// stability margin peaks right at the capacity cliff, where quantization is
// fragile; a coarse grid keeps the selection inside the robust plateau.
std::vector<double> default_calibration_gammas() { return {0.005, 0.01, 0.025, 0.05, 0.1}; }

std::vector<double> default_sweep_gammas() {
    return {0.005, 0.008, 0.012, 0.016, 0.02, 0.025, 0.03, 0.05, 0.1};
}

std::vector<AggRecord> SweepResult::aggregate() const {
    // keyed by (axis, metric); deterministic order
    std::map<std::pair<double, std::string>, std::vector<double>> groups;
    for (const auto& r : raw) groups[{r.axis, r.metric}].push_back(r.value);

    std::vector<AggRecord> out;
    out.reserve(groups.size());
    for (const auto& [key, vals] : groups) {
        AggRecord a;
        a.axis = key.first;
        a.metric = key.second;
        a.count = vals.size();
        double s = 0.0;
        for (double v : vals) s += v;
        a.mean = s / static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(vals.size()));
        out.push_back(std::move(a));
    }
    return out;
}

double SweepResult::mean_of(const std::string& metric, double axis) const {
    for (const auto& a : aggregate())
        if (a.metric == metric && a.axis == axis) return a.mean;
    throw std::out_of_range("SweepResult: no records for " + metric);
}

double SweepResult::std_of(const std::string& metric, double axis) const {
    for (const auto& a : aggregate())
        if (a.metric == metric && a.axis == axis) return a.stddev;
    throw std::out_of_range("SweepResult: no records for " + metric);
}

namespace {

struct TrialModel {
    PatternSet patterns;
    KernelContext ctx;
    TrainResult trained;

    TrialModel(PatternSet p, double gamma, const TrainConfig& tc)
        : patterns(std::move(p)),
          ctx(patterns, gamma),
          trained(train(patterns, ctx, tc)) {}
};

TrialModel make_trial(const ExperimentConfig& cfg, double gamma, std::size_t trial,
                      Regularizer reg = Regularizer::L2KernelNorm, double lambda_override = -1.0) {
    auto rng = cfg.seed.stream(trial, "patterns");
    PatternSet patterns = generate_patterns(cfg.n, cfg.pattern_count(), rng);
    TrainConfig tc = cfg.train_config(reg);
    if (lambda_override >= 0.0) tc.lambda = lambda_override;
    return TrialModel(std::move(patterns), gamma, tc);
}

// Run cfg.trials trials in parallel; each fills its own record buffer.
template <typename Fn>
SweepResult run_trials(const ExperimentConfig& cfg, std::string name, std::string axis_label,
                       Fn&& trial_fn) {
    cfg.validate();
    SweepResult result;
    result.name = std::move(name);
    result.axis_label = std::move(axis_label);
    result.config = cfg;

    std::vector<std::vector<RawRecord>> buffers(cfg.trials);
    std::vector<std::size_t> unconverged(cfg.trials, 0);
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        trial_fn(t, buffers[t], unconverged[t]);
    });
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        result.unconverged_trainings += unconverged[t];
        for (auto& r : buffers[t]) result.raw.push_back(std::move(r));
    }
    return result;
}

void record(std::vector<RawRecord>& buf, std::size_t trial, double axis,
            const char* metric, double value) {
    buf.push_back(RawRecord{trial, axis, metric, value});
}

} // namespace

SweepResult run_quantization_sweep(const ExperimentConfig& cfg, const std::vector<unsigned>& bits) {
    const double gamma = resolve_gamma(cfg);
    return run_trials(cfg, "quantize_sweep", "bit_depth",
        [&](std::size_t t, std::vector<RawRecord>& buf, std::size_t& unconv) {
            const TrialModel m = make_trial(cfg, gamma, t);
            unconv = m.trained.unconverged_count();
            for (unsigned k : bits) {
                const CompressionSpec spec = k == 1
                    ? CompressionSpec::binarize(cfg.binarize_center)
                    : CompressionSpec::quantize(k);
                const DualWeights w = apply_compression(m.trained.weights, spec);
                const MetricsReport rep = evaluate(w, m.patterns, m.ctx);
                record(buf, t, k, "bit_accuracy", rep.bit_accuracy);
                record(buf, t, k, "stability_margin", rep.stability_margin);
            }
            const MetricsReport base = evaluate(m.trained.weights, m.patterns, m.ctx);
            record(buf, t, 0.0, "baseline_accuracy", base.bit_accuracy);
            record(buf, t, 0.0, "baseline_margin", base.stability_margin);
        });
}

SweepResult run_pruning_sweep(const ExperimentConfig& cfg, const std::vector<double>& sparsities) {
    const double gamma = resolve_gamma(cfg);
    return run_trials(cfg, "prune_sweep", "sparsity",
        [&](std::size_t t, std::vector<RawRecord>& buf, std::size_t& unconv) {
            const TrialModel m = make_trial(cfg, gamma, t);
            unconv = m.trained.unconverged_count();
            for (double s : sparsities) {
                const DualWeights w = prune_magnitude(m.trained.weights, s);
                const MetricsReport rep = evaluate(w, m.patterns, m.ctx);
                record(buf, t, s, "bit_accuracy", rep.bit_accuracy);
                record(buf, t, s, "stability_margin", rep.stability_margin);
            }
        });
}

SweepResult run_noise_sweep(const ExperimentConfig& cfg, const std::vector<double>& noise) {
    const double gamma = resolve_gamma(cfg);
    return run_trials(cfg, "noise_sweep", "noise_level",
        [&](std::size_t t, std::vector<RawRecord>& buf, std::size_t& unconv) {
            const TrialModel m = make_trial(cfg, gamma, t);
            unconv = m.trained.unconverged_count();
            const DualWeights q2 = quantize_uniform(m.trained.weights, 2).weights;
            for (std::size_t r = 0; r < noise.size(); ++r) {
                auto rng_full = cfg.seed.stream(t, "noise-full-" + std::to_string(r));
                auto rng_q2 = cfg.seed.stream(t, "noise-q2-" + std::to_string(r));
                const auto full = recall_accuracy(m.trained.weights, m.patterns, m.ctx,
                                                  noise[r], cfg.recall_probes,
                                                  cfg.recall_max_iters, rng_full);
                const auto quant = recall_accuracy(q2, m.patterns, m.ctx, noise[r],
                                                   cfg.recall_probes, cfg.recall_max_iters,
                                                   rng_q2);
                record(buf, t, noise[r], "recall_full", full.mean);
                record(buf, t, noise[r], "recall_q2", quant.mean);
            }
        });
}

ScalingOutcome run_scaling_experiment(const ExperimentConfig& cfg, ScalingRegime regime,
                                      const std::vector<unsigned>& bits) {
    ExperimentConfig local = cfg;
    double gamma;
    if (regime == ScalingRegime::Local) {
        gamma = 0.1;
        local.gamma = gamma;
    } else {
        gamma = resolve_gamma(cfg);
        local.gamma = gamma;
    }

    ScalingOutcome out;
    out.sweep = run_trials(local,
        regime == ScalingRegime::Ridge ? "scaling_ridge" : "scaling_local", "bit_depth",
        [&](std::size_t t, std::vector<RawRecord>& buf, std::size_t& unconv) {
            const TrialModel m = make_trial(local, gamma, t);
            unconv = m.trained.unconverged_count();
            const double base_margin = stability_margin(m.trained.weights, m.patterns, m.ctx);
            record(buf, t, 0.0, "baseline_margin", base_margin);
            for (unsigned k : bits) {
                const QuantizeResult q = quantize_uniform(m.trained.weights, k);
                const double margin = stability_margin(q.weights, m.patterns, m.ctx);
                record(buf, t, k, "margin_degradation", degradation(base_margin, margin));
                record(buf, t, k, "delta_sq", q.delta * q.delta);
            }
        });

    std::vector<double> xs, ys;
    for (unsigned k : bits) {
        xs.push_back(out.sweep.mean_of("delta_sq", k));
        ys.push_back(out.sweep.mean_of("margin_degradation", k));
    }
    out.fit = fit_power_law(xs, ys);
    return out;
}

SweepResult run_gamma_sweep(const ExperimentConfig& cfg, const std::vector<double>& gammas) {
    if (gammas.empty()) throw std::invalid_argument("run_gamma_sweep: empty gamma list");
    return run_trials(cfg, "gamma_sweep", "gamma",
        [&](std::size_t t, std::vector<RawRecord>& buf, std::size_t& unconv) {
            auto rng = cfg.seed.stream(t, "patterns");
            const PatternSet patterns = generate_patterns(cfg.n, cfg.pattern_count(), rng);
            for (double g : gammas) {
                const KernelContext ctx(patterns, g);
                const TrainResult tr = train(patterns, ctx, cfg.train_config());
                unconv += tr.unconverged_count();
                const MetricsReport base = evaluate(tr.weights, patterns, ctx);
                const DualWeights q2 = quantize_uniform(tr.weights, 2).weights;
                const MetricsReport quant = evaluate(q2, patterns, ctx);
                record(buf, t, g, "baseline_accuracy", base.bit_accuracy);
                record(buf, t, g, "acc_degradation",
                       degradation(base.bit_accuracy, quant.bit_accuracy));
                record(buf, t, g, "margin_degradation",
                       degradation(base.stability_margin, quant.stability_margin));
            }
        });
}

CalibrationResult calibrate_gamma(const ExperimentConfig& cfg,
                                  const std::vector<double>& candidates,
                                  std::size_t calibration_trials) {
    if (candidates.size() < 3)
        throw std::invalid_argument("calibrate_gamma: need at least 3 candidates");

    CalibrationResult best;
    ExperimentConfig ccfg = cfg;
    ccfg.trials = calibration_trials;
    // Calibration only ranks candidates; cap the iteration budget so the
    // slow low-gamma candidates do not dominate the runtime.
    ccfg.train_max_iters = std::min<std::size_t>(ccfg.train_max_iters, 800);

    struct Row { double gamma, acc, margin; };
    std::vector<Row> rows;
    for (double g : candidates) {
        double acc = 0.0, margin = 0.0;
        for (std::size_t t = 0; t < calibration_trials; ++t) {
            const TrialModel m = make_trial(ccfg, g, t);
            const MetricsReport rep = evaluate(m.trained.weights, m.patterns, m.ctx);
            acc += rep.bit_accuracy;
            margin += rep.stability_margin;
        }
        acc /= static_cast<double>(calibration_trials);
        margin /= static_cast<double>(calibration_trials);
        rows.push_back({g, acc, margin});
        AggRecord a;
        a.axis = g;
        a.metric = "calibration_accuracy";
        a.mean = acc;
        a.stddev = 0.0;
        a.count = calibration_trials;
        best.table.push_back(a);
        a.metric = "calibration_margin";
        a.mean = margin;
        best.table.push_back(a);
    }

    // best margin among candidates with perfect accuracy; otherwise best
    // accuracy with a warning flag
    const Row* chosen = nullptr;
    for (const auto& r : rows)
        if (r.acc >= 1.0 && (!chosen || r.margin > chosen->margin)) chosen = &r;
    if (!chosen) {
        best.warning = true;
        for (const auto& r : rows)
            if (!chosen || r.acc > chosen->acc) chosen = &r;
    }
    best.gamma_star = chosen->gamma;
    best.accuracy = chosen->acc;
    best.margin = chosen->margin;
    return best;
}

double resolve_gamma(const ExperimentConfig& cfg, CalibrationResult* out) {
    if (cfg.gamma > 0.0) {
        if (out) {
            *out = CalibrationResult{};
            out->gamma_star = cfg.gamma;
        }
        return cfg.gamma;
    }
    const std::vector<double> grid = default_calibration_gammas();
    const CalibrationResult cal = calibrate_gamma(cfg, grid);
    if (out) *out = cal;
    return cal.gamma_star;
}

WalshOutcome run_walsh_experiment(const ExperimentConfig& cfg, std::size_t targets,
                                  std::size_t samples, double l1_lambda) {
    cfg.validate();
    const double gamma = resolve_gamma(cfg);
    if (l1_lambda < 0.0) l1_lambda = 1.3e-3 * static_cast<double>(cfg.pattern_count());

    auto rng = cfg.seed.stream(0, "patterns");
    const PatternSet patterns = generate_patterns(cfg.n, cfg.pattern_count(), rng);
    const KernelContext ctx(patterns, gamma);

    TrainConfig l2cfg = cfg.train_config(Regularizer::L2KernelNorm);
    l2cfg.workers = cfg.workers;
    TrainConfig l1cfg = cfg.train_config(Regularizer::L1);
    l1cfg.lambda = l1_lambda;
    l1cfg.workers = cfg.workers;

    const TrainResult l2 = klr_train(patterns, ctx, l2cfg);
    const TrainResult l1 = lasso_train(patterns, ctx, l1cfg);

    WalshOutcome out;
    out.targets = targets;
    out.samples = samples;
    out.l1_lambda = l1_lambda;
    out.l2_profiles.resize(targets);
    out.l1_profiles.resize(targets);

    parallel_for(targets, cfg.workers, [&](std::size_t ti) {
        const std::size_t j = ti * cfg.n / targets;
        // same base states for both models: paired comparison
        auto rng_l2 = cfg.seed.stream(ti, "walsh-target");
        auto rng_l1 = cfg.seed.stream(ti, "walsh-target");
        out.l2_profiles[ti] = walsh_influence(l2.weights, patterns, ctx, j, samples, rng_l2);
        out.l2_profiles[ti].cross_only = true;
        out.l1_profiles[ti] = walsh_influence(l1.weights, patterns, ctx, j, samples, rng_l1);
        out.l1_profiles[ti].cross_only = true;
    });

    std::vector<double> pool_l2, pool_l1;
    for (std::size_t ti = 0; ti < targets; ++ti) {
        for (double v : out.l2_profiles[ti].cross_values()) pool_l2.push_back(v);
        for (double v : out.l1_profiles[ti].cross_values()) pool_l1.push_back(v);
    }
    out.gini_l2 = gini(pool_l2);
    out.gini_l1 = gini(pool_l1);
    return out;
}

ReplicationOutcome run_replication_pn2(ExperimentConfig cfg) {
    cfg.load = 2.0;
    const double gamma = resolve_gamma(cfg);
    cfg.gamma = gamma;

    ReplicationOutcome out;
    out.quantization = run_quantization_sweep(cfg);
    out.quantization.name = "replicate_pn2_quantize";
    out.pruning = run_pruning_sweep(cfg);
    out.pruning.name = "replicate_pn2_prune";

    const TrialModel m = make_trial(cfg, gamma, 0);
    out.bimodality = bimodality_stats(m.trained.weights);
    return out;
}

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(const SweepResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream os(fs::path(out_dir) / (result.name + ".csv"), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write sweep CSV in " + out_dir);
        os << "axis_value,metric_name,mean,std,trial_count\n";
        for (const auto& a : result.aggregate())
            os << format_double(a.axis) << ',' << a.metric << ',' << format_double(a.mean)
               << ',' << format_double(a.stddev) << ',' << a.count << '\n';
    }
    {
        std::ofstream os(fs::path(out_dir) / (result.name + "_raw.csv"), std::ios::binary);
        if (!os) throw std::runtime_error("cannot write raw CSV in " + out_dir);
        os << "trial,axis_value,metric_name,value\n";
        for (const auto& r : result.raw)
            os << r.trial << ',' << format_double(r.axis) << ',' << r.metric << ','
               << format_double(r.value) << '\n';
    }
}

void write_manifest(const std::string& out_dir, const std::string& name,
                    const ExperimentConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra,
                    double wall_seconds) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / (name + "_manifest.txt"));
    if (!os) throw std::runtime_error("cannot write manifest in " + out_dir);
    os << "version = " << kVersionTag << '\n';
    os << "experiment = " << name << '\n';
    os << "n = " << cfg.n << '\n';
    os << "load = " << format_double(cfg.load) << '\n';
    os << "patterns = " << cfg.pattern_count() << '\n';
    os << "gamma = " << format_double(cfg.gamma) << '\n';
    os << "lambda = " << format_double(cfg.effective_lambda()) << '\n';
    os << "trials = " << cfg.trials << '\n';
    os << "seed = " << cfg.seed.base << '\n';
    os << "workers = " << cfg.workers << '\n';
    os << "binarize_center = "
       << (cfg.binarize_center == BinarizeCenter::Mean ? "mean" : "median") << '\n';
    os << "binarize_magnitude_rule = mean_absolute_deviation\n";
    os << "influence_sampling = uniform\n";
    os << "train_max_iters = " << cfg.train_max_iters << '\n';
    os << "train_tol = " << format_double(cfg.train_tol) << '\n';
    for (const auto& [k, v] : extra) os << k << " = " << v << '\n';
    os << "wall_seconds = " << format_double(wall_seconds) << '\n';
}

} // namespace kham
