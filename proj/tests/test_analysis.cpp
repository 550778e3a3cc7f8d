#include "doctest.h"

#include "rootldpc/analysis.hpp"

#include <cmath>
#include <random>
#include <tuple>
#include <utility>

using namespace rootldpc::analysis;

TEST_CASE("combined-gain pdf and cdf") {
    Chi2Params bal{0.5, 0.5};
    bal.validate();
    CHECK(bal.balanced());
    CHECK(chi2_pdf(1.0, bal) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(chi2_cdf(0.0, bal) == doctest::Approx(0.0));

    Chi2Params un{0.75, 0.25};
    CHECK_FALSE(un.balanced());
    double y = 0.8;
    double expect = (std::exp(-y / 0.75) - std::exp(-y / 0.25)) / 0.5;
    CHECK(chi2_pdf(y, un) == doctest::Approx(expect).epsilon(1e-12));

    // cdf is the integral of the pdf (trapezoid cross-check)
    double acc = 0.0, h = 1e-4;
    for (double t = 0.0; t < 2.0; t += h)
        acc += 0.5 * h * (chi2_pdf(t, un) + chi2_pdf(t + h, un));
    CHECK(chi2_cdf(2.0, un) == doctest::Approx(acc).epsilon(1e-4));

    // continuity across the balanced branch
    Chi2Params near{0.5 + 1e-11, 0.5 - 1e-11};
    CHECK(chi2_cdf(0.7, near) == doctest::Approx(chi2_cdf(0.7, bal)).epsilon(1e-7));

    CHECK(chi2_cdf(50.0, un) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("small-threshold asymptote F ~ T^2 / (2ab)") {
    double T = 1e-3;
    for (auto [a, b] : {std::pair{0.5, 0.5}, {0.75, 0.25}, {0.6, 0.4}, {0.9, 0.1}}) {
        Chi2Params p{a, b};
        double ratio = chi2_cdf(T, p) / (T * T / (2.0 * a * b));
        CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("coding loss of an unbalanced split") {
    auto even = chi2_coding_loss_db(Chi2Params{0.5, 0.5});
    CHECK(even.loss_db == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(even.diversity_order == 2);

    auto skew = chi2_coding_loss_db(Chi2Params{0.75, 0.25});
    CHECK(skew.loss_db == doctest::Approx(5.0 * std::log10(4.0 / 3.0)).epsilon(1e-12));
    CHECK(skew.loss_db == doctest::Approx(0.625).epsilon(0.01));

    auto lost = chi2_coding_loss_db(Chi2Params{1.0, 0.0});
    CHECK(lost.diversity_order == 1);
}

TEST_CASE("g function properties") {
    // symmetry point: equal gains give exactly one half
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ua(0.1, 3.0), us(0.01, 1.0);
    for (int t = 0; t < 10; ++t) {
        double a = ua(rng), s2 = us(rng);
        CHECK(g_function(a, a, s2) == doctest::Approx(0.5).epsilon(2e-6));
    }
    // a dominant first gain wins almost surely
    CHECK(g_function(5.0, 1.0, 0.1) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(g_function(1.0, 5.0, 0.1) == doctest::Approx(0.0).epsilon(1e-4));
    // monotone in the first gain
    CHECK(g_function(1.2, 1.0, 0.3) > g_function(0.8, 1.0, 0.3));
}

TEST_CASE("g matches monte carlo") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> nd;
    for (auto [a1, a2, s2] : {std::tuple{1.0, 1.2, 0.2}, {0.5, 1.0, 0.5}, {2.0, 1.0, 0.1}}) {
        std::size_t n = 400000, hits = 0;
        double s = std::sqrt(s2);
        for (std::size_t i = 0; i < n; ++i) {
            double x1 = a1 * a1 + a1 * s * nd(rng);
            double x2 = a2 * a2 + a2 * s * nd(rng);
            hits += std::abs(x2) < std::abs(x1);
        }
        double p = double(hits) / n;
        double se = std::sqrt(p * (1 - p) / n) + 1e-9;
        CHECK(std::abs(g_function(a1, a2, s2) - p) < 4 * se);
    }
}

TEST_CASE("fourth-power parity bounds") {
    auto r = g4_parity_bounds(1.0, 1.0, 0.4);
    CHECK(r.g4 == doctest::Approx(1.0 / 16.0).epsilon(1e-5));
    CHECK(r.at_least_one_sixteenth);
    CHECK(r.complement_at_most_fifteen_sixteenths);

    auto big = g4_parity_bounds(3.0, 1.0, 0.1);
    CHECK(big.g4 > 0.9);
    CHECK(big.at_least_one_sixteenth);
}
