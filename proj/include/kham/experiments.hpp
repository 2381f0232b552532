#ifndef KHAM_EXPERIMENTS_HPP
#define KHAM_EXPERIMENTS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kham/analysis.hpp"
#include "kham/compression.hpp"
#include "kham/core.hpp"
#include "kham/kernel.hpp"
#include "kham/metrics.hpp"
#include "kham/rng.hpp"
#include "kham/training.hpp"

namespace kham {

inline constexpr const char* kVersionTag = "kham 0.1.0";

struct ExperimentConfig {
    std::size_t n = 100;        // neuron count
    double load = 3.0;          // P / N
    double gamma = 0.0;         // 0 means: calibrate first
    double lambda = -1.0;       // < 0 means: default 1e-4 * P
    std::size_t trials = 10;
    RngSeed seed{12345};
    unsigned workers = 1;
    BinarizeCenter binarize_center = BinarizeCenter::Mean;
    std::size_t train_max_iters = 2000;
    double train_tol = 1e-4;
    std::size_t recall_probes = 20;   // noisy-recall probes per trial and level
    std::size_t recall_max_iters = 100;

    std::size_t pattern_count() const;
    double effective_lambda() const;
    TrainConfig train_config(Regularizer reg = Regularizer::L2KernelNorm) const;
    void validate() const;
};

struct RawRecord {
    std::size_t trial;
    double axis;
    std::string metric;
    double value;
};

struct AggRecord {
    double axis;
    std::string metric;
    double mean;
    double stddev;  // population std over trials
    std::size_t count;
};

struct SweepResult {
    std::string name;
    std::string axis_label;
    ExperimentConfig config;
    std::vector<RawRecord> raw;
    std::size_t unconverged_trainings = 0;

    std::vector<AggRecord> aggregate() const;
    double mean_of(const std::string& metric, double axis) const;
    double std_of(const std::string& metric, double axis) const;
};

// Default sweep axes
std::vector<unsigned> default_bit_depths();         // {32,16,8,4,3,2,1}
std::vector<unsigned> default_scaling_bit_depths(); // {16,12,10,8,7,6,5,4,3,2}
std::vector<double> default_sparsities();           // {0,0.05,0.1,0.2,0.3,0.5}
std::vector<double> default_noise_levels();         // {0,...,0.3}
std::vector<double> default_calibration_gammas();   // coarse log-spaced grid
std::vector<double> default_sweep_gammas();         // finer grid for the gamma sweep

SweepResult run_quantization_sweep(const ExperimentConfig& cfg,
                                   const std::vector<unsigned>& bits = default_bit_depths());

SweepResult run_pruning_sweep(const ExperimentConfig& cfg,
                              const std::vector<double>& sparsities = default_sparsities());

// metrics: recall_full, recall_q2
SweepResult run_noise_sweep(const ExperimentConfig& cfg,
                            const std::vector<double>& noise = default_noise_levels());

enum class ScalingRegime { Ridge, Local };

struct ScalingOutcome {
    SweepResult sweep;    // metrics: margin_degradation, delta_sq, baseline_margin
    PowerLawFit fit;      // over per-k mean (delta_sq, degradation); Ridge only
};

ScalingOutcome run_scaling_experiment(const ExperimentConfig& cfg, ScalingRegime regime,
                                      const std::vector<unsigned>& bits = default_scaling_bit_depths());

// metrics: acc_degradation (2-bit), baseline_accuracy, margin_degradation
SweepResult run_gamma_sweep(const ExperimentConfig& cfg, const std::vector<double>& gammas);

struct CalibrationResult {
    double gamma_star = 0.0;
    double accuracy = 0.0;
    double margin = 0.0;
    bool warning = false;  // no candidate reached accuracy 1.0
    std::vector<AggRecord> table;
};

CalibrationResult calibrate_gamma(const ExperimentConfig& cfg,
                                  const std::vector<double>& candidates,
                                  std::size_t calibration_trials = 3);

// Resolve cfg.gamma: calibrate over a default grid when unset.
double resolve_gamma(const ExperimentConfig& cfg, CalibrationResult* out = nullptr);

struct WalshOutcome {
    std::vector<InfluenceProfile> l2_profiles;
    std::vector<InfluenceProfile> l1_profiles;
    double gini_l2 = 0.0;
    double gini_l1 = 0.0;
    std::size_t targets = 0;
    std::size_t samples = 0;
    double l1_lambda = 0.0;
};

WalshOutcome run_walsh_experiment(const ExperimentConfig& cfg, std::size_t targets = 16,
                                  std::size_t samples = 4096, double l1_lambda = -1.0);

struct ReplicationOutcome {
    SweepResult quantization;
    SweepResult pruning;
    BimodalityStats bimodality;
};

ReplicationOutcome run_replication_pn2(ExperimentConfig cfg);

// Persistence: <name>.csv (axis_value,metric_name,mean,std,trial_count) and
// <name>_raw.csv (trial,axis_value,metric_name,value). Byte-deterministic.
void write_sweep_csv(const SweepResult& result, const std::string& out_dir);
std::string format_double(double v);

// One structured-text manifest per run.
void write_manifest(const std::string& out_dir, const std::string& name,
                    const ExperimentConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& extra,
                    double wall_seconds);

} // namespace kham

#endif
