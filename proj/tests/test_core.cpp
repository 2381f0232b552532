#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "kham/core.hpp"
#include "kham/rng.hpp"

using namespace kham;

TEST_CASE("rng streams are deterministic and decorrelated") {
    RngSeed seed{42};

    auto a = seed.stream(0, "patterns");
    auto b = seed.stream(0, "patterns");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CHECK(seed.derive(0, "patterns") != seed.derive(1, "patterns"));
    CHECK(seed.derive(0, "patterns") != seed.derive(0, "noise"));
    CHECK(seed.derive(0, "patterns") != RngSeed{43}.derive(0, "patterns"));
}

TEST_CASE("next_below stays in range and covers small supports") {
    RngStream rng(7);
    for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 1000ull}) {
        std::set<std::uint64_t> seen;
        for (int i = 0; i < 2000; ++i) {
            const auto v = rng.next_below(bound);
            CHECK(v < bound);
            seen.insert(v);
        }
        if (bound <= 7) CHECK(seen.size() == bound);
    }
}

TEST_CASE("next_double lies in [0, 1)") {
    RngStream rng(9);
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("generated patterns are bipolar with balanced mean") {
    RngStream rng(11);
    const PatternSet ps = generate_patterns(200, 500, rng);
    CHECK(ps.count() == 500);
    CHECK(ps.dim() == 200);

    double sum = 0.0;
    for (auto v : ps.flat()) {
        CHECK((v == 1 || v == -1));
        sum += v;
    }
    // 1e5 fair coins: mean should be well within 0.02 of zero
    CHECK(std::fabs(sum / static_cast<double>(ps.flat().size())) < 0.02);
}

TEST_CASE("pattern generation is reproducible from the seed") {
    RngStream a(5), b(5), c(6);
    const PatternSet p1 = generate_patterns(40, 30, a);
    const PatternSet p2 = generate_patterns(40, 30, b);
    const PatternSet p3 = generate_patterns(40, 30, c);
    CHECK(p1 == p2);
    CHECK(p1.flat() != p3.flat());
}

TEST_CASE("degenerate pattern dimensions are rejected") {
    RngStream rng(1);
    CHECK_THROWS_AS(generate_patterns(0, 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_patterns(10, 0, rng), std::invalid_argument);
}

TEST_CASE("flip_noise flips exactly round(rho * N) distinct positions") {
    RngStream rng(13);
    for (std::size_t n : {1u, 7u, 50u, 100u, 333u}) {
        NetworkState s(n, 1);
        for (double rho : {0.0, 0.049, 0.05, 0.1, 0.25, 0.5, 1.0}) {
            const NetworkState noisy = flip_noise(s, rho, rng);
            const auto expected =
                static_cast<std::size_t>(std::llround(rho * static_cast<double>(n)));
            CHECK(hamming(s, noisy) == expected);
            for (std::size_t i = 0; i < n; ++i)
                CHECK((noisy[i] == 1 || noisy[i] == -1));
        }
    }
}

TEST_CASE("flip_noise eventually touches every coordinate") {
    RngStream rng(17);
    const std::size_t n = 50;
    NetworkState s(n, 1);
    std::vector<int> touched(n, 0);
    for (int r = 0; r < 500; ++r) {
        const NetworkState noisy = flip_noise(s, 0.1, rng);
        for (std::size_t i = 0; i < n; ++i)
            if (noisy[i] != s[i]) touched[i] = 1;
    }
    CHECK(std::count(touched.begin(), touched.end(), 1) == static_cast<long>(n));
}

TEST_CASE("hamming distance basics") {
    NetworkState a = {1, 1, -1, 1};
    NetworkState b = {1, -1, -1, -1};
    CHECK(hamming(a, a) == 0);
    CHECK(hamming(a, b) == 2);
    NetworkState c = {1, 1};
    CHECK_THROWS_AS(hamming(a, c), std::invalid_argument);
}

TEST_CASE("matrix element addressing is row-major") {
    Matrix m(2, 3);
    m(0, 0) = 1.0;
    m(0, 2) = 2.0;
    m(1, 1) = 3.0;
    CHECK(m.flat() == std::vector<double>({1.0, 0.0, 2.0, 0.0, 3.0, 0.0}));
    CHECK(m.row(1)[1] == 3.0);
}
