#ifndef KHAM_SVG_PLOT_HPP
#define KHAM_SVG_PLOT_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace kham {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band;  // optional per-point std; empty or y.size()
    std::string color;         // empty: assigned from a default palette
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    // optional fit-line overlay: ln(y) = fit_intercept + fit_slope * ln(x)
    // (drawn on linear axes as y = exp(intercept) * x^slope)
    bool show_fit = false;
    double fit_slope = 0.0;
    double fit_intercept = 0.0;
    std::string fit_label;
    int width = 720;
    int height = 460;
};

// Self-contained SVG document: axes, tick labels, one polyline per series,
// shaded +/- 1 std bands, legend, optional fit line. Points that cannot be
// drawn on a log axis (nonpositive coordinate) are dropped; an entirely
// undrawable plot is an error.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);
void write_svg(const std::string& path, const PlotSpec& spec,
               const std::vector<PlotSeries>& series);

// One row of an aggregated sweep CSV
// (header: axis_value,metric_name,mean,std,trial_count).
struct AggCsvRow {
    double axis = 0.0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

// Strict parser with line/column diagnostics on malformed input.
std::vector<AggCsvRow> read_agg_csv(const std::string& path);

// Group rows into one plot series per metric name (axis ascending).
std::vector<PlotSeries> series_from_rows(const std::vector<AggCsvRow>& rows);

} // namespace kham

#endif
