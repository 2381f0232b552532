// Command-line front end: every experiment as a subcommand, writing CSV
// results, a manifest, and self-contained SVG plots into --out.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kham/analysis.hpp"
#include "kham/dynamics.hpp"
#include "kham/experiments.hpp"
#include "kham/metrics.hpp"
#include "kham/serialize.hpp"
#include "kham/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace kham;

namespace {

struct Opts {
    ExperimentConfig cfg;
    std::string out = "results";
    std::string binarize_center = "mean";
    std::uint64_t seed = 12345;
};

void add_common(CLI::App* app, Opts& o) {
    app->add_option("--n", o.cfg.n, "neuron count")->check(CLI::PositiveNumber);
    app->add_option("--load", o.cfg.load, "pattern load P/N")->check(CLI::PositiveNumber);
    app->add_option("--gamma", o.cfg.gamma, "kernel width (0: calibrate first)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--lambda", o.cfg.lambda, "regularization strength (<0: default 1e-4*P)");
    app->add_option("--trials", o.cfg.trials, "number of seeded trials")->check(CLI::PositiveNumber);
    app->add_option("--seed", o.seed, "base RNG seed");
    app->add_option("--workers", o.cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--out", o.out, "output directory");
    app->add_option("--binarize-center", o.binarize_center, "binarization center")
        ->check(CLI::IsMember({"mean", "median"}));
    app->set_config("--config", "", "key = value config file; flags take precedence");
}

ExperimentConfig finalize(Opts& o) {
    o.cfg.seed = RngSeed{o.seed};
    o.cfg.binarize_center =
        o.binarize_center == "median" ? BinarizeCenter::Median : BinarizeCenter::Mean;
    o.cfg.validate();
    return o.cfg;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Sweep plot helper: one SVG per metric group.
void plot_metrics(const SweepResult& r, const std::string& out_dir,
                  const std::vector<std::string>& metrics, const std::string& suffix,
                  const std::string& y_label) {
    std::vector<PlotSeries> series;
    for (const auto& name : metrics) {
        PlotSeries s;
        s.label = name;
        for (const auto& a : r.aggregate()) {
            if (a.metric != name || a.axis == 0.0) continue;
            s.x.push_back(a.axis);
            s.y.push_back(a.mean);
            s.band.push_back(a.stddev);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    if (series.empty()) return;
    PlotSpec spec;
    spec.title = r.name;
    spec.x_label = r.axis_label;
    spec.y_label = y_label;
    write_svg((fs::path(out_dir) / (r.name + "_" + suffix + ".svg")).string(), spec, series);
}

void emit_sweep(const SweepResult& r, const ExperimentConfig& cfg, const std::string& out_dir,
                const std::vector<std::pair<std::string, std::string>>& extra, double wall) {
    write_sweep_csv(r, out_dir);
    auto all = extra;
    all.push_back({"unconverged_trainings", std::to_string(r.unconverged_trainings)});
    write_manifest(out_dir, r.name, cfg, all, wall);
}

int run_calibrate(Opts& o, std::vector<double>& gammas) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "calibrate", cfg, {{"status", "running"}}, 0.0);
    if (gammas.empty()) gammas = default_calibration_gammas();
    const CalibrationResult cal = calibrate_gamma(cfg, gammas);

    std::ofstream os(fs::path(o.out) / "calibrate.csv", std::ios::binary);
    os << "axis_value,metric_name,mean,std,trial_count\n";
    for (const auto& a : cal.table)
        os << format_double(a.axis) << ',' << a.metric << ',' << format_double(a.mean) << ','
           << format_double(a.stddev) << ',' << a.count << '\n';

    write_manifest(o.out, "calibrate", cfg,
                   {{"gamma_star", format_double(cal.gamma_star)},
                    {"calibration_accuracy", format_double(cal.accuracy)},
                    {"calibration_margin", format_double(cal.margin)},
                    {"warning_no_perfect_accuracy", cal.warning ? "true" : "false"}},
                   timer.seconds());
    std::printf("gamma_star = %s (accuracy %.4f, margin %.4f)%s\n",
                format_double(cal.gamma_star).c_str(), cal.accuracy, cal.margin,
                cal.warning ? "  [warning: no candidate reached accuracy 1.0]" : "");
    return 0;
}

int run_train(Opts& o, const std::string& reg) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "train", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);

    auto rng = cfg.seed.stream(0, "patterns");
    const PatternSet patterns = generate_patterns(cfg.n, cfg.pattern_count(), rng);
    const KernelContext ctx(patterns, cfg.gamma);
    TrainConfig tc = cfg.train_config(reg == "l1" ? Regularizer::L1 : Regularizer::L2KernelNorm);
    tc.workers = cfg.workers;
    const TrainResult tr = train(patterns, ctx, tc);
    const MetricsReport rep = evaluate(tr.weights, patterns, ctx);

    WeightFile wf;
    wf.weights = tr.weights;
    wf.gamma = cfg.gamma;
    wf.lambda = tc.lambda;
    wf.regularizer = reg == "l1" ? 1 : 0;
    wf.seed = cfg.seed.base;
    save_weights(wf, (fs::path(o.out) / "model.weights").string());

    write_manifest(o.out, "train", cfg,
                   {{"regularizer", reg},
                    {"bit_accuracy", format_double(rep.bit_accuracy)},
                    {"stability_margin", format_double(rep.stability_margin)},
                    {"unconverged_columns", std::to_string(tr.unconverged_count())},
                    {"weights_file", "model.weights"}},
                   timer.seconds());
    std::printf("bit accuracy %.6f, stability margin %.6f, weights -> %s/model.weights\n",
                rep.bit_accuracy, rep.stability_margin, o.out.c_str());
    return 0;
}

int run_quantize(Opts& o, std::vector<unsigned>& bits) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "quantize_sweep", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);
    if (bits.empty()) bits = default_bit_depths();
    const SweepResult r = run_quantization_sweep(cfg, bits);
    emit_sweep(r, cfg, o.out, {}, timer.seconds());
    plot_metrics(r, o.out, {"bit_accuracy"}, "accuracy", "bit accuracy");
    plot_metrics(r, o.out, {"stability_margin"}, "margin", "stability margin");
    return 0;
}

int run_prune(Opts& o, std::vector<double>& sparsities) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "prune_sweep", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);
    if (sparsities.empty()) sparsities = default_sparsities();
    const SweepResult r = run_pruning_sweep(cfg, sparsities);
    emit_sweep(r, cfg, o.out, {}, timer.seconds());
    plot_metrics(r, o.out, {"bit_accuracy"}, "accuracy", "bit accuracy");
    plot_metrics(r, o.out, {"stability_margin"}, "margin", "stability margin");
    return 0;
}

int run_noise(Opts& o, std::vector<double>& noise) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "noise_sweep", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);
    if (noise.empty()) noise = default_noise_levels();
    const SweepResult r = run_noise_sweep(cfg, noise);
    emit_sweep(r, cfg, o.out, {}, timer.seconds());
    std::vector<PlotSeries> series;
    for (const char* name : {"recall_full", "recall_q2"}) {
        PlotSeries s;
        s.label = name;
        for (const auto& a : r.aggregate()) {
            if (a.metric != name) continue;
            s.x.push_back(a.axis);
            s.y.push_back(a.mean);
            s.band.push_back(a.stddev);
        }
        series.push_back(std::move(s));
    }
    PlotSpec spec;
    spec.title = "noisy recall: full precision vs 2-bit";
    spec.x_label = "noise level";
    spec.y_label = "recall accuracy";
    write_svg((fs::path(o.out) / "noise_sweep.svg").string(), spec, series);
    return 0;
}

int run_scaling(Opts& o, const std::string& regime, std::vector<unsigned>& bits) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    const ScalingRegime reg = regime == "local" ? ScalingRegime::Local : ScalingRegime::Ridge;
    write_manifest(o.out, reg == ScalingRegime::Local ? "scaling_local" : "scaling_ridge", cfg,
                   {{"status", "running"}}, 0.0);
    if (reg == ScalingRegime::Ridge) cfg.gamma = resolve_gamma(cfg);
    if (bits.empty()) bits = default_scaling_bit_depths();
    const ScalingOutcome out = run_scaling_experiment(cfg, reg, bits);

    std::vector<std::pair<std::string, std::string>> extra = {{"regime", regime}};
    if (out.fit.available) {
        extra.push_back({"beta", format_double(out.fit.slope)});
        extra.push_back({"r_squared", format_double(out.fit.r_squared)});
        extra.push_back({"fit_points", std::to_string(out.fit.points_used)});
    }
    ExperimentConfig manifest_cfg = out.sweep.config;
    emit_sweep(out.sweep, manifest_cfg, o.out, extra, timer.seconds());

    // degradation vs squared step on log-log axes, fit overlaid
    PlotSeries s;
    s.label = "margin degradation";
    for (unsigned k : bits) {
        s.x.push_back(out.sweep.mean_of("delta_sq", k));
        s.y.push_back(out.sweep.mean_of("margin_degradation", k));
        s.band.push_back(out.sweep.std_of("margin_degradation", k));
    }
    PlotSpec spec;
    spec.title = out.sweep.name;
    spec.x_label = "squared quantization step";
    spec.y_label = "margin degradation";
    spec.log_x = spec.log_y = true;
    if (out.fit.available) {
        spec.show_fit = true;
        spec.fit_slope = out.fit.slope;
        spec.fit_intercept = out.fit.intercept;
        char buf[64];
        std::snprintf(buf, sizeof buf, "fit, beta = %.3f", out.fit.slope);
        spec.fit_label = buf;
    }
    try {
        write_svg((fs::path(o.out) / (out.sweep.name + ".svg")).string(), spec, {s});
    } catch (const std::invalid_argument&) {
        // local regime can have no positive degradations: skip the log plot
    }
    if (out.fit.available)
        std::printf("beta = %.4f, R^2 = %.4f over %zu points\n", out.fit.slope, out.fit.r_squared,
                    out.fit.points_used);
    return 0;
}

int run_gamma(Opts& o, std::vector<double>& gammas) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "gamma_sweep", cfg, {{"status", "running"}}, 0.0);
    if (gammas.empty()) gammas = default_sweep_gammas();
    const SweepResult r = run_gamma_sweep(cfg, gammas);
    emit_sweep(r, cfg, o.out, {}, timer.seconds());
    plot_metrics(r, o.out, {"acc_degradation", "baseline_accuracy"}, "accuracy",
                 "accuracy / degradation");
    return 0;
}

int run_walsh(Opts& o, std::size_t targets, std::size_t samples, double l1_lambda) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "walsh", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);
    const WalshOutcome out = run_walsh_experiment(cfg, targets, samples, l1_lambda);

    std::ofstream os(fs::path(o.out) / "walsh_influence.csv", std::ios::binary);
    os << "model,target,coordinate,influence\n";
    for (std::size_t ti = 0; ti < out.targets; ++ti) {
        const auto& l2 = out.l2_profiles[ti];
        const auto& l1 = out.l1_profiles[ti];
        for (std::size_t i = 0; i < l2.influence.size(); ++i) {
            os << "l2," << l2.target << ',' << i << ',' << format_double(l2.influence[i]) << '\n';
            os << "l1," << l1.target << ',' << i << ',' << format_double(l1.influence[i]) << '\n';
        }
    }
    write_manifest(o.out, "walsh", cfg,
                   {{"targets", std::to_string(out.targets)},
                    {"samples", std::to_string(out.samples)},
                    {"l1_lambda", format_double(out.l1_lambda)},
                    {"gini_l2", format_double(out.gini_l2)},
                    {"gini_l1", format_double(out.gini_l1)}},
                   timer.seconds());

    // sorted cross-influence curves: inequality visible as curvature
    std::vector<PlotSeries> series(2);
    series[0].label = "l2 cross influence";
    series[1].label = "l1 cross influence";
    for (int m = 0; m < 2; ++m) {
        std::vector<double> pool;
        const auto& profs = m == 0 ? out.l2_profiles : out.l1_profiles;
        for (const auto& p : profs)
            for (double v : p.cross_values()) pool.push_back(v);
        std::sort(pool.begin(), pool.end());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            series[m].x.push_back(static_cast<double>(i));
            series[m].y.push_back(pool[i]);
        }
    }
    PlotSpec spec;
    spec.title = "sorted cross-influence";
    spec.x_label = "rank";
    spec.y_label = "influence";
    write_svg((fs::path(o.out) / "walsh.svg").string(), spec, series);
    std::printf("gini_l2 = %.4f, gini_l1 = %.4f\n", out.gini_l2, out.gini_l1);
    return 0;
}

int run_replicate(Opts& o) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "replicate_pn2", cfg, {{"status", "running"}}, 0.0);
    const ReplicationOutcome out = run_replication_pn2(cfg);
    write_sweep_csv(out.quantization, o.out);
    write_sweep_csv(out.pruning, o.out);
    ExperimentConfig used = out.quantization.config;
    write_manifest(o.out, "replicate_pn2", used,
                   {{"bimodal", out.bimodality.bimodal ? "true" : "false"},
                    {"mode_low", format_double(out.bimodality.mode_low)},
                    {"mode_high", format_double(out.bimodality.mode_high)},
                    {"central_mass", format_double(out.bimodality.central_mass)}},
                   timer.seconds());
    plot_metrics(out.quantization, o.out, {"bit_accuracy"}, "accuracy", "bit accuracy");
    plot_metrics(out.pruning, o.out, {"bit_accuracy"}, "accuracy", "bit accuracy");
    return 0;
}

int run_histogram(Opts& o, std::size_t bins) {
    ExperimentConfig cfg = finalize(o);
    Timer timer;
    write_manifest(o.out, "histogram", cfg, {{"status", "running"}}, 0.0);
    cfg.gamma = resolve_gamma(cfg);

    auto rng = cfg.seed.stream(0, "patterns");
    const PatternSet patterns = generate_patterns(cfg.n, cfg.pattern_count(), rng);
    const KernelContext ctx(patterns, cfg.gamma);
    const TrainResult tr = train(patterns, ctx, cfg.train_config());
    const Histogram h = histogram(tr.weights.alpha.flat(), bins);
    const BimodalityStats st = bimodality_stats(tr.weights, bins);

    std::ofstream os(fs::path(o.out) / "weight_histogram.csv", std::ios::binary);
    os << "bin_center,count\n";
    for (std::size_t b = 0; b < h.centers.size(); ++b)
        os << format_double(h.centers[b]) << ',' << h.counts[b] << '\n';

    write_manifest(o.out, "histogram", cfg,
                   {{"bins", std::to_string(bins)},
                    {"bimodal", st.bimodal ? "true" : "false"},
                    {"mode_low", format_double(st.mode_low)},
                    {"mode_high", format_double(st.mode_high)},
                    {"central_mass", format_double(st.central_mass)},
                    {"valley_depth", format_double(st.valley_depth)}},
                   timer.seconds());

    PlotSeries s;
    s.label = "weight count";
    for (std::size_t b = 0; b < h.centers.size(); ++b) {
        s.x.push_back(h.centers[b]);
        s.y.push_back(static_cast<double>(h.counts[b]));
    }
    PlotSpec spec;
    spec.title = "trained weight distribution";
    spec.x_label = "weight value";
    spec.y_label = "count";
    write_svg((fs::path(o.out) / "weight_histogram.svg").string(), spec, {s});
    std::printf("bimodal = %s, modes (%.3f, %.3f), central mass %.4f\n",
                st.bimodal ? "true" : "false", st.mode_low, st.mode_high, st.central_mass);
    return 0;
}

int run_report(const std::string& csv, const std::string& out_svg, bool log_x, bool log_y,
               const std::string& title, const std::vector<std::string>& metrics) {
    const auto rows = read_agg_csv(csv);
    auto series = series_from_rows(rows);
    if (!metrics.empty()) {
        std::vector<PlotSeries> keep;
        for (auto& s : series)
            if (std::find(metrics.begin(), metrics.end(), s.label) != metrics.end())
                keep.push_back(std::move(s));
        series = std::move(keep);
    }
    PlotSpec spec;
    spec.title = title.empty() ? fs::path(csv).stem().string() : title;
    spec.x_label = "axis value";
    spec.y_label = "value";
    spec.log_x = log_x;
    spec.log_y = log_y;
    write_svg(out_svg, spec, series);
    std::printf("wrote %s\n", out_svg.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel Hopfield associative memory: training, compression and analysis"};
    app.require_subcommand(1);

    Opts o;
    std::vector<unsigned> bits;
    std::vector<double> sparsities, noise, gammas;
    std::string reg = "l2", regime = "ridge";
    std::size_t targets = 16, samples = 4096, bins = 101;
    double l1_lambda = -1.0;

    auto* cal = app.add_subcommand("calibrate", "pick gamma: best margin at perfect accuracy");
    add_common(cal, o);
    cal->add_option("--gammas", gammas, "candidate gamma values")->delimiter(',');

    auto* tr = app.add_subcommand("train", "train one model and save its weights");
    add_common(tr, o);
    tr->add_option("--reg", reg, "regularizer")->check(CLI::IsMember({"l2", "l1"}));

    auto* qs = app.add_subcommand("quantize-sweep", "accuracy and margin across bit depths");
    add_common(qs, o);
    qs->add_option("--bits", bits, "bit depths (1 = binarize)")
        ->delimiter(',')
        ->check(CLI::Range(1u, 32u));

    auto* ps = app.add_subcommand("prune-sweep", "accuracy and margin across sparsity levels");
    add_common(ps, o);
    ps->add_option("--sparsity", sparsities, "sparsity fractions in [0, 1)")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 0.999999));

    auto* ns = app.add_subcommand("noise-sweep", "noisy recall, full precision vs 2-bit");
    add_common(ns, o);
    ns->add_option("--noise", noise, "flip fractions in [0, 1]")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));

    auto* sc = app.add_subcommand("scaling", "margin degradation vs squared quantization step");
    add_common(sc, o);
    sc->add_option("--regime", regime, "ridge (calibrated gamma) or local (gamma = 0.1)")
        ->check(CLI::IsMember({"ridge", "local"}));
    sc->add_option("--bits", bits, "bit depths")->delimiter(',')->check(CLI::Range(2u, 32u));

    auto* gs = app.add_subcommand("gamma-sweep", "2-bit degradation across kernel widths");
    add_common(gs, o);
    gs->add_option("--gammas", gammas, "gamma values")->delimiter(',');

    auto* ws = app.add_subcommand("walsh", "influence profiles and Gini, L2 vs L1 models");
    add_common(ws, o);
    ws->add_option("--targets", targets, "number of target neurons")->check(CLI::PositiveNumber);
    ws->add_option("--samples", samples, "Monte Carlo samples per target")
        ->check(CLI::PositiveNumber);
    ws->add_option("--l1-lambda", l1_lambda, "lasso strength (<0: default)");

    auto* rp = app.add_subcommand("replicate-pn2", "repeat key sweeps at load 2.0");
    add_common(rp, o);

    auto* hg = app.add_subcommand("histogram", "trained weight histogram and bimodality stats");
    add_common(hg, o);
    hg->add_option("--bins", bins, "histogram bins")->check(CLI::Range(10, 100000));

    auto* rep = app.add_subcommand("report", "render an SVG plot from an aggregated sweep CSV");
    std::string csv_in, svg_out = "report.svg", title;
    std::vector<std::string> metrics;
    bool log_x = false, log_y = false;
    rep->add_option("--csv", csv_in, "aggregated sweep CSV")->required();
    rep->add_option("--svg", svg_out, "output SVG path");
    rep->add_option("--title", title, "plot title");
    rep->add_option("--metric", metrics, "metric names to include (default: all)");
    rep->add_flag("--log-x", log_x, "logarithmic x axis");
    rep->add_flag("--log-y", log_y, "logarithmic y axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rep->parsed()) return run_report(csv_in, svg_out, log_x, log_y, title, metrics);
        fs::create_directories(o.out);
        if (cal->parsed()) return run_calibrate(o, gammas);
        if (tr->parsed()) return run_train(o, reg);
        if (qs->parsed()) return run_quantize(o, bits);
        if (ps->parsed()) return run_prune(o, sparsities);
        if (ns->parsed()) return run_noise(o, noise);
        if (sc->parsed()) return run_scaling(o, regime, bits);
        if (gs->parsed()) return run_gamma(o, gammas);
        if (ws->parsed()) return run_walsh(o, targets, samples, l1_lambda);
        if (rp->parsed()) return run_replicate(o);
        if (hg->parsed()) return run_histogram(o, bins);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
