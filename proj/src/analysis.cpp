#include "kham/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kham {

std::vector<double> InfluenceProfile::cross_values() const {
    std::vector<double> out;
    out.reserve(influence.size() > 0 ? influence.size() - 1 : 0);
    for (std::size_t i = 0; i < influence.size(); ++i)
        if (i != target) out.push_back(influence[i]);
    return out;
}

namespace {

inline int sign_of(double h) { return h >= 0.0 ? 1 : -1; }

NetworkState random_state(std::size_t n, RngStream& rng) {
    NetworkState s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<std::int8_t>(rng.next_sign());
    return s;
}

} // namespace

InfluenceProfile influence_profile(const std::function<double(const NetworkState&)>& f,
                                   std::size_t n, std::size_t samples, RngStream& rng) {
    if (samples < 1) throw std::invalid_argument("influence_profile: samples must be >= 1");
    std::vector<std::size_t> flips(n, 0);
    NetworkState s;
    for (std::size_t m = 0; m < samples; ++m) {
        s = random_state(n, rng);
        const int base = sign_of(f(s));
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<std::int8_t>(-s[i]);
            if (sign_of(f(s)) != base) ++flips[i];
            s[i] = static_cast<std::int8_t>(-s[i]);
        }
    }
    InfluenceProfile prof;
    prof.influence.resize(n);
    prof.samples = samples;
    for (std::size_t i = 0; i < n; ++i)
        prof.influence[i] = static_cast<double>(flips[i]) / static_cast<double>(samples);
    return prof;
}

InfluenceProfile walsh_influence(const DualWeights& weights, const PatternSet& patterns,
                                 const KernelContext& ctx, std::size_t j,
                                 std::size_t samples, RngStream& rng) {
    const std::size_t p = patterns.count();
    const std::size_t n = patterns.dim();
    if (j >= n) throw std::invalid_argument("walsh_influence: target out of range");
    if (samples < 1) throw std::invalid_argument("walsh_influence: samples must be >= 1");

    const PackedPatterns packed(patterns);
    const double up = std::exp(4.0 * ctx.gamma());    // distance shrinks by 1
    const double down = std::exp(-4.0 * ctx.gamma()); // distance grows by 1

    std::vector<double> acol(p);
    for (std::size_t mu = 0; mu < p; ++mu) acol[mu] = weights.alpha(mu, j);

    std::vector<std::size_t> flips(n, 0);
    std::vector<double> w(p), corr(n);

    for (std::size_t m = 0; m < samples; ++m) {
        const NetworkState s = random_state(n, rng);
        const auto dists = hamming_profile(s, packed);

        // w_mu = alpha_{mu j} K(s, xi^mu); h = sum w
        double h = 0.0;
        for (std::size_t mu = 0; mu < p; ++mu) {
            w[mu] = acol[mu] * ctx.at_distance(dists[mu]);
            h += w[mu];
        }

        // corr_i = sum_mu w_mu xi^mu_i, so the mass of patterns agreeing
        // with s at coordinate i is (h + s_i corr_i) / 2
        std::fill(corr.begin(), corr.end(), 0.0);
        for (std::size_t mu = 0; mu < p; ++mu) {
            const double wm = w[mu];
            if (wm == 0.0) continue;
            const std::int8_t* row = patterns.row(mu);
            for (std::size_t i = 0; i < n; ++i) corr[i] += wm * row[i];
        }

        const int base = sign_of(h);
        for (std::size_t i = 0; i < n; ++i) {
            const double agree = 0.5 * (h + s[i] * corr[i]);
            const double disagree = h - agree;
            // flipping s_i moves agreeing patterns one bit farther,
            // disagreeing ones one bit closer
            const double h_flipped = agree * down + disagree * up;
            if (sign_of(h_flipped) != base) ++flips[i];
        }
    }

    InfluenceProfile prof;
    prof.target = j;
    prof.samples = samples;
    prof.influence.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        prof.influence[i] = static_cast<double>(flips[i]) / static_cast<double>(samples);
    return prof;
}

double gini(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("gini: empty input");
    double total = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("gini: values must be nonnegative");
        total += v;
    }
    if (total <= 0.0) throw std::invalid_argument("gini: mean must be positive");

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
    return acc / (n * total);
}

Histogram histogram(const std::vector<double>& values, std::size_t bins) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (values.empty()) throw std::invalid_argument("histogram: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn_it, hi = *mx_it;

    Histogram h;
    h.centers.resize(bins);
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b)
        h.centers[b] = lo + (static_cast<double>(b) + 0.5) * (width > 0.0 ? width : 0.0);
    for (double v : values) {
        std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
        if (b >= bins) b = bins - 1;
        ++h.counts[b];
    }
    return h;
}

BimodalityStats bimodality_stats(const std::vector<double>& values, std::size_t bins) {
    if (bins < 10) throw std::invalid_argument("bimodality_stats: bins must be >= 10");
    const Histogram h = histogram(values, bins);
    const auto& c = h.counts;

    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::fabs(v));
    std::size_t central = 0;
    for (double v : values)
        if (std::fabs(v) < 0.1 * max_abs) ++central;

    BimodalityStats st;
    st.central_mass = static_cast<double>(central) / static_cast<double>(values.size());

    // local maxima of the raw histogram
    std::vector<std::size_t> maxima;
    for (std::size_t b = 0; b < bins; ++b) {
        if (c[b] == 0) continue;
        const std::size_t left = b > 0 ? c[b - 1] : 0;
        const std::size_t right = b + 1 < bins ? c[b + 1] : 0;
        if (c[b] >= left && c[b] >= right && (c[b] > left || c[b] > right))
            maxima.push_back(b);
    }

    std::size_t best = 0;
    for (std::size_t b : maxima)
        if (c[b] > c[best]) best = b;

    if (maxima.empty()) {
        return st;  // flat histogram; unimodal verdict with zero modes
    }

    // Second mode: the most prominent other local maximum. Candidates below
    // 5% of the dominant peak are bin-level noise, and a shallow valley
    // (more than half the smaller peak) means the two maxima belong to one
    // lobe; both cases count as unimodal.
    double best_score = 0.0;
    std::size_t second = best;
    std::size_t best_valley = 0;
    for (std::size_t b : maxima) {
        if (b == best) continue;
        if (20 * c[b] < c[best]) continue;
        const std::size_t lo = std::min(b, best), hi = std::max(b, best);
        std::size_t valley = c[lo];
        for (std::size_t v = lo; v <= hi; ++v) valley = std::min(valley, c[v]);
        const std::size_t smaller = std::min(c[b], c[best]);
        if (valley * 2 >= smaller) continue;
        const double score = static_cast<double>(smaller) - static_cast<double>(valley);
        if (score > best_score) {
            best_score = score;
            second = b;
            best_valley = valley;
        }
    }
    if (second == best) {
        st.mode_low = st.mode_high = h.centers[best];
        return st;
    }
    st.bimodal = true;
    st.mode_low = h.centers[std::min(best, second)];
    st.mode_high = h.centers[std::max(best, second)];
    st.valley_depth = static_cast<double>(best_valley) /
                      static_cast<double>(std::min(c[best], c[second]));
    return st;
}

BimodalityStats bimodality_stats(const DualWeights& weights, std::size_t bins) {
    return bimodality_stats(weights.alpha.flat(), bins);
}

PowerLawFit fit_power_law(const std::vector<double>& delta_squared,
                          const std::vector<double>& degradation) {
    if (delta_squared.size() != degradation.size())
        throw std::invalid_argument("fit_power_law: length mismatch");

    std::vector<double> x, y;
    for (std::size_t i = 0; i < delta_squared.size(); ++i) {
        if (delta_squared[i] > 0.0 && degradation[i] > 0.0) {
            x.push_back(std::log(delta_squared[i]));
            y.push_back(std::log(degradation[i]));
        }
    }

    PowerLawFit fit;
    fit.points_used = x.size();
    if (x.size() < 2) return fit;

    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return fit;

    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;

    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.available = true;
    return fit;
}

} // namespace kham
