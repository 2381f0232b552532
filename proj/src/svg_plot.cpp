#include "kham/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kham {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0;  // in transformed (possibly log10) space

    double transform(double v) const { return log ? std::log10(v) : v; }
    bool drawable(double v) const { return !log || v > 0.0; }

    void expand(double v) {
        const double t = transform(v);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("render_svg: no series");
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_svg: series '" + s.label + "' x/y length mismatch");
        if (!s.band.empty() && s.band.size() != s.y.size())
            throw std::invalid_argument("render_svg: series '" + s.label + "' band length mismatch");
    }

    Axis ax, ay;
    ax.log = spec.log_x;
    ay.log = spec.log_y;
    ax.lo = ay.lo = std::numeric_limits<double>::infinity();
    ax.hi = ay.hi = -std::numeric_limits<double>::infinity();

    std::size_t drawable = 0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.drawable(s.x[i]) || !ay.drawable(s.y[i])) continue;
            ++drawable;
            ax.expand(s.x[i]);
            ay.expand(s.y[i]);
            if (!s.band.empty()) {
                const double hi = s.y[i] + s.band[i];
                const double lo = s.y[i] - s.band[i];
                if (ay.drawable(hi)) ay.expand(hi);
                if (ay.drawable(lo)) ay.expand(lo);
            }
        }
    }
    if (drawable == 0) throw std::invalid_argument("render_svg: no drawable data points");

    if (ax.hi <= ax.lo) {
        ax.lo -= 0.5;
        ax.hi += 0.5;
    }
    if (ay.hi <= ay.lo) {
        ay.lo -= 0.5;
        ay.hi += 0.5;
    }
    // small margins so extreme points do not sit on the frame
    const double padx = 0.04 * (ax.hi - ax.lo);
    const double pady = 0.06 * (ay.hi - ay.lo);
    ax.lo -= padx;
    ax.hi += padx;
    ay.lo -= pady;
    ay.hi += pady;

    const double L = 72, R = 18, T = 38, B = 52;
    const double W = spec.width, H = spec.height;
    const double pw = W - L - R, ph = H - T - B;

    auto px = [&](double v) { return L + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) { return T + (ay.hi - ay.transform(v)) / (ay.hi - ay.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"15\">" << escape(spec.title) << "</text>\n";

    // frame
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // ticks: 5 evenly spaced in transformed space
    const int nticks = 5;
    for (int t = 0; t <= nticks; ++t) {
        const double fx = ax.lo + (ax.hi - ax.lo) * t / nticks;
        const double fy = ay.lo + (ay.hi - ay.lo) * t / nticks;
        const double gx = L + pw * t / nticks;
        const double gy = T + ph - ph * t / nticks;
        const double vx = ax.log ? std::pow(10.0, fx) : fx;
        const double vy = ay.log ? std::pow(10.0, fy) : fy;
        os << "<line x1=\"" << gx << "\" y1=\"" << T + ph << "\" x2=\"" << gx << "\" y2=\""
           << T + ph + 5 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << gx << "\" y=\"" << T + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(vx)
           << "</text>\n";
        os << "<line x1=\"" << L - 5 << "\" y1=\"" << gy << "\" x2=\"" << L << "\" y2=\"" << gy
           << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << gy + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(vy)
           << "</text>\n";
    }
    os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << T + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
       << " transform=\"rotate(-90 16 " << T + ph / 2 << ")\">" << escape(spec.y_label)
       << "</text>\n";

    // series: band polygons first, then lines
    std::size_t color_idx = 0;
    std::vector<std::string> colors;
    for (const auto& s : series) {
        colors.push_back(s.color.empty()
                             ? kPalette[color_idx++ % (sizeof kPalette / sizeof *kPalette)]
                             : s.color);
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.band.empty()) continue;
        std::vector<std::pair<double, double>> upper, lower;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.drawable(s.x[i]) || !ay.drawable(s.y[i])) continue;
            double hi = s.y[i] + s.band[i];
            double lo = s.y[i] - s.band[i];
            if (!ay.drawable(hi)) hi = s.y[i];
            if (!ay.drawable(lo)) lo = s.y[i];
            upper.push_back({px(s.x[i]), py(hi)});
            lower.push_back({px(s.x[i]), py(lo)});
        }
        if (upper.size() < 2) continue;
        os << "<polygon fill=\"" << colors[si] << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (const auto& [x, y] : upper) os << fmt(x) << ',' << fmt(y) << ' ';
        for (auto it = lower.rbegin(); it != lower.rend(); ++it)
            os << fmt(it->first) << ',' << fmt(it->second) << ' ';
        os << "\"/>\n";
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        os << "<polyline fill=\"none\" stroke=\"" << colors[si] << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.drawable(s.x[i]) || !ay.drawable(s.y[i])) continue;
            os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!ax.drawable(s.x[i]) || !ay.drawable(s.y[i])) continue;
            os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
               << "\" r=\"2.5\" fill=\"" << colors[si] << "\"/>\n";
        }
    }

    // fit overlay, sampled across the x range
    if (spec.show_fit) {
        os << "<polyline fill=\"none\" stroke=\"#000\" stroke-width=\"1.2\""
           << " stroke-dasharray=\"6 4\" points=\"";
        const int steps = 64;
        for (int t = 0; t <= steps; ++t) {
            const double fx = ax.lo + (ax.hi - ax.lo) * t / steps;
            const double vx = ax.log ? std::pow(10.0, fx) : fx;
            if (!(vx > 0.0)) continue;
            const double vy = std::exp(spec.fit_intercept + spec.fit_slope * std::log(vx));
            if (!ay.drawable(vy)) continue;
            const double ty = ay.transform(vy);
            if (ty < ay.lo || ty > ay.hi) continue;
            os << fmt(px(vx)) << ',' << fmt(py(vy)) << ' ';
        }
        os << "\"/>\n";
    }

    // legend, top-right inside the frame
    double ly = T + 16;
    for (std::size_t si = 0; si < series.size(); ++si) {
        os << "<line x1=\"" << L + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << L + pw - 130
           << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colors[si] << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << L + pw - 124 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[si].label)
           << "</text>\n";
        ly += 16;
    }
    if (spec.show_fit) {
        os << "<line x1=\"" << L + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << L + pw - 130
           << "\" y2=\"" << ly - 4 << "\" stroke=\"#000\" stroke-dasharray=\"6 4\"/>\n";
        os << "<text x=\"" << L + pw - 124 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"11\">"
           << escape(spec.fit_label.empty() ? std::string("fit") : spec.fit_label) << "</text>\n";
    }

    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::string& path, const PlotSpec& spec,
               const std::vector<PlotSeries>& series) {
    const std::string doc = render_svg(spec, series);  // render first: no file on error
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os << doc;
}

namespace {

[[noreturn]] void csv_fail(const std::string& path, std::size_t line, std::size_t col,
                           const std::string& what) {
    throw std::runtime_error(path + ": line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + what);
}

double parse_num(const std::string& field, const std::string& path, std::size_t line,
                 std::size_t col) {
    double v = 0.0;
    const char* b = field.data();
    const char* e = b + field.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        csv_fail(path, line, col, "expected a number, got '" + field + "'");
    return v;
}

} // namespace

std::vector<AggCsvRow> read_agg_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);

    std::string line;
    std::size_t lineno = 0;
    std::vector<AggCsvRow> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 5)
            csv_fail(path, lineno, fields.size(),
                     "expected 5 fields, got " + std::to_string(fields.size()));
        if (lineno == 1) {
            if (fields[0] != "axis_value")
                csv_fail(path, 1, 1, "expected header 'axis_value,...'");
            continue;
        }
        AggCsvRow r;
        r.axis = parse_num(fields[0], path, lineno, 1);
        r.metric = fields[1];
        if (r.metric.empty()) csv_fail(path, lineno, 2, "empty metric name");
        r.mean = parse_num(fields[2], path, lineno, 3);
        r.stddev = parse_num(fields[3], path, lineno, 4);
        r.count = static_cast<std::size_t>(parse_num(fields[4], path, lineno, 5));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<PlotSeries> series_from_rows(const std::vector<AggCsvRow>& rows) {
    std::map<std::string, PlotSeries> by_metric;
    for (const auto& r : rows) {
        auto& s = by_metric[r.metric];
        s.label = r.metric;
        s.x.push_back(r.axis);
        s.y.push_back(r.mean);
        s.band.push_back(r.stddev);
    }
    std::vector<PlotSeries> out;
    for (auto& [name, s] : by_metric) {
        // sort points by axis
        std::vector<std::size_t> order(s.x.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
        PlotSeries sorted;
        sorted.label = s.label;
        for (std::size_t i : order) {
            sorted.x.push_back(s.x[i]);
            sorted.y.push_back(s.y[i]);
            sorted.band.push_back(s.band[i]);
        }
        out.push_back(std::move(sorted));
    }
    return out;
}

} // namespace kham
