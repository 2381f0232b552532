#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "kham/analysis.hpp"
#include "kham/training.hpp"

using namespace kham;
using namespace kham_test;

TEST_CASE("dictator and junta influences are exact") {
    RngStream rng(1101);
    const auto dictator = [](const NetworkState& s) { return static_cast<double>(s[0]); };
    const InfluenceProfile prof = influence_profile(dictator, 6, 512, rng);
    CHECK(prof.influence[0] == 1.0);
    for (std::size_t i = 1; i < 6; ++i) CHECK(prof.influence[i] == 0.0);

    // three-bit majority: a coordinate is pivotal iff the other two disagree
    RngStream rng2(1102);
    const auto maj = [](const NetworkState& s) {
        return static_cast<double>(s[0] + s[1] + s[2]);
    };
    const InfluenceProfile mprof = influence_profile(maj, 3, 8192, rng2);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(mprof.influence[i] == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("fast influence path matches the exhaustive oracle on a toy network") {
    const std::size_t n = 10;
    const PatternSet ps = random_patterns(n, 6, 11000);
    const double gamma = 0.12;
    const KernelContext ctx(ps, gamma);

    RngStream wrng(1103);
    DualWeights w;
    w.alpha = random_matrix(6, n, wrng, -1.5, 1.5);

    for (std::size_t j : {std::size_t{0}, std::size_t{4}, std::size_t{9}}) {
        // exhaustive influence over all 2^10 states via the naive potential
        const auto h_j = [&](const NetworkState& s) {
            double h = 0.0;
            for (std::size_t mu = 0; mu < ps.count(); ++mu)
                h += w.alpha(mu, j) * rbf(s, ps.pattern(mu), gamma);
            return h;
        };
        std::vector<double> exact(n, 0.0);
        NetworkState s(n);
        for (std::size_t code = 0; code < (1u << n); ++code) {
            for (std::size_t i = 0; i < n; ++i)
                s[i] = (code >> i) & 1 ? 1 : -1;
            const int base = h_j(s) >= 0.0 ? 1 : -1;
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = static_cast<std::int8_t>(-s[i]);
                const int flipped = h_j(s) >= 0.0 ? 1 : -1;
                s[i] = static_cast<std::int8_t>(-s[i]);
                exact[i] += flipped != base;
            }
        }
        for (auto& v : exact) v /= static_cast<double>(1u << n);

        RngStream mc(1200 + j);
        const InfluenceProfile prof = walsh_influence(w, ps, ctx, j, 1u << 14, mc);
        REQUIRE(prof.influence.size() == n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::fabs(prof.influence[i] - exact[i]) <= 0.02);
    }
}

TEST_CASE("fast influence path matches the generic sampler on shared streams") {
    const std::size_t n = 14;
    const PatternSet ps = random_patterns(n, 8, 11100);
    const double gamma = 0.09;
    const KernelContext ctx(ps, gamma);
    RngStream wrng(1104);
    DualWeights w;
    w.alpha = random_matrix(8, n, wrng);

    const std::size_t j = 3;
    const auto h_j = [&](const NetworkState& s) {
        double h = 0.0;
        for (std::size_t mu = 0; mu < ps.count(); ++mu)
            h += w.alpha(mu, j) * rbf(s, ps.pattern(mu), gamma);
        return h;
    };
    RngStream a(555), b(555);  // identical base states for both paths
    const InfluenceProfile fast = walsh_influence(w, ps, ctx, j, 4096, a);
    const InfluenceProfile slow = influence_profile(h_j, n, 4096, b);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::fabs(fast.influence[i] - slow.influence[i]) <= 0.01);
}

TEST_CASE("cross_values drops exactly the self term") {
    InfluenceProfile p;
    p.target = 2;
    p.influence = {0.1, 0.2, 0.9, 0.4};
    CHECK(p.cross_values() == std::vector<double>({0.1, 0.2, 0.4}));
}

TEST_CASE("gini matches the naive pairwise definition") {
    RngStream rng(1105);
    for (int c = 0; c < 20; ++c) {
        const std::size_t n = 2 + rng.next_below(40);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.next_double() * 3.0;

        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        double pair_sum = 0.0;
        for (double a : v)
            for (double b : v) pair_sum += std::fabs(a - b);
        const double naive = pair_sum / (2.0 * static_cast<double>(n) *
                                         static_cast<double>(n) * mean);
        CHECK(gini(v) == doctest::Approx(naive).epsilon(1e-12));
    }
}

TEST_CASE("gini invariants and reference values") {
    CHECK(gini({0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gini({3.0, 3.0, 3.0}) == doctest::Approx(0.0).epsilon(1e-15));

    RngStream rng(1106);
    std::vector<double> v(25);
    for (auto& x : v) x = rng.next_double();
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= 1234.5;
    CHECK(std::fabs(gini(v) - gini(scaled)) <= 1e-12);

    CHECK_THROWS_AS(gini({}), std::invalid_argument);
    CHECK_THROWS_AS(gini({1.0, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(gini({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("histogram covers the sample") {
    const std::vector<double> v = {0.0, 0.1, 0.5, 0.99, 1.0};
    const Histogram h = histogram(v, 10);
    REQUIRE(h.counts.size() == 10);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == v.size());
    CHECK(h.counts.front() >= 1);  // the minimum lands in the first bin
    CHECK(h.counts.back() >= 1);   // the maximum lands in the last bin
    CHECK_THROWS_AS(histogram({}, 10), std::invalid_argument);
    CHECK_THROWS_AS(histogram(v, 0), std::invalid_argument);
}

TEST_CASE("bimodality statistics separate two-lobed from single-lobed data") {
    RngStream rng(1107);

    // symmetric mixture around +/- 3
    std::vector<double> mixture;
    for (int i = 0; i < 4000; ++i) {
        const double center = (i % 2 == 0) ? 3.0 : -3.0;
        mixture.push_back(center + (rng.next_double() - 0.5));
    }
    const BimodalityStats two = bimodality_stats(mixture, 101);
    CHECK(two.bimodal);
    CHECK(two.mode_low == doctest::Approx(-3.0).epsilon(0.2));
    CHECK(two.mode_high == doctest::Approx(3.0).epsilon(0.2));
    CHECK(two.central_mass < 0.05);
    CHECK(two.mode_low < 0.0);
    CHECK(two.mode_high > 0.0);

    // bell-shaped sample (sum of uniforms)
    std::vector<double> bell;
    for (int i = 0; i < 4000; ++i) {
        double s = 0.0;
        for (int k = 0; k < 12; ++k) s += rng.next_double() - 0.5;
        bell.push_back(s);
    }
    const BimodalityStats one = bimodality_stats(bell, 101);
    CHECK_FALSE(one.bimodal);

    CHECK_THROWS_AS(bimodality_stats(mixture, 5), std::invalid_argument);
}

TEST_CASE("power-law fit recovers planted exponents exactly") {
    for (double beta : {0.5, 0.8, 1.0}) {
        std::vector<double> x, y;
        const double c = 0.37;
        for (int i = -6; i <= 2; ++i) {
            const double xv = std::pow(10.0, i);
            x.push_back(xv);
            y.push_back(c * std::pow(xv, beta));
        }
        const PowerLawFit fit = fit_power_law(x, y);
        REQUIRE(fit.available);
        CHECK(fit.points_used == x.size());
        CHECK(std::fabs(fit.slope - beta) <= 1e-12);
        CHECK(std::fabs(fit.intercept - std::log(c)) <= 1e-12);
        CHECK(fit.r_squared >= 1.0 - 1e-12);
    }
}

TEST_CASE("power-law fit skips nonpositive points and degenerate inputs") {
    // planted law plus two unusable points
    std::vector<double> x = {1.0, 10.0, 100.0, 0.0, 5.0};
    std::vector<double> y = {2.0, 20.0, 200.0, 3.0, -1.0};
    const PowerLawFit fit = fit_power_law(x, y);
    REQUIRE(fit.available);
    CHECK(fit.points_used == 3);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));

    const PowerLawFit none = fit_power_law({1.0}, {-2.0});
    CHECK_FALSE(none.available);
    CHECK(none.points_used == 0);

    CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("trained kernel memories develop two-lobed weights") {
    // small but loaded instance: weights must split into opposite-sign lobes
    const PatternSet ps = random_patterns(40, 80, 11200);
    const KernelContext ctx(ps, 0.06);
    TrainConfig cfg;
    cfg.lambda = 1e-4 * 80;
    const TrainResult tr = klr_train(ps, ctx, cfg);
    const BimodalityStats st = bimodality_stats(tr.weights);
    CHECK(st.bimodal);
    CHECK(st.mode_low < 0.0);
    CHECK(st.mode_high > 0.0);
}
