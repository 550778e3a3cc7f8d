#include "doctest.h"

#include "rootldpc/construct.hpp"
#include "rootldpc/decoder.hpp"

#include <cmath>
#include <random>

using namespace rootldpc;
using namespace rootldpc::decode;

namespace {

// [1 1 1 0; 0 1 1 1]: two overlapping parity checks on four bits
gf2::BinaryMatrix small_h() {
    gf2::BinaryMatrix h(2, 4);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(0, 2, true);
    h.set(1, 1, true);
    h.set(1, 2, true);
    h.set(1, 3, true);
    return h;
}

} // namespace

TEST_CASE("tanner graph adjacency") {
    auto h = small_h();
    TannerGraph g(h);
    CHECK(g.num_bits() == 4);
    CHECK(g.num_checks() == 2);
    CHECK(g.num_edges() == 6);
    CHECK(g.edges_of_bit(1).size() == 2);
    CHECK(g.edges_of_check(0).size() == 3);
    for (auto e : g.edges_of_bit(1)) CHECK(g.bit_of_edge(e) == 1);
}

TEST_CASE("check node updates") {
    std::vector<double> two = {1.5, -0.8};
    double bp = check_update_bp(two);
    double expect = 2.0 * std::atanh(std::tanh(0.75) * std::tanh(-0.4));
    CHECK(bp == doctest::Approx(expect).epsilon(1e-9));

    std::vector<double> three = {3.0, -2.0, 5.0};
    CHECK(check_update_minsum(three) == doctest::Approx(-2.0).epsilon(1e-12));

    // a saturated input passes the other message through
    std::vector<double> sat = {channel::kLlrMax, 1.2};
    CHECK(check_update_bp(sat) == doctest::Approx(1.2).epsilon(1e-2));

    // min-sum magnitude dominates bp on random inputs
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 2.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> in = {nd(rng), nd(rng), nd(rng), nd(rng)};
        CHECK(std::abs(check_update_minsum(in)) >= std::abs(check_update_bp(in)) - 1e-9);
    }
}

TEST_CASE("bp decodes a clean word and flips a weak bit") {
    auto h = small_h();
    TannerGraph g(h);
    DecoderConfig cfg;
    std::vector<std::size_t> info = {0, 1};

    std::vector<double> clean = {5, 5, 5, 5};
    auto r = decode::decode(g, clean, cfg, info);
    CHECK(r.converged);
    CHECK_FALSE(r.word_error);
    CHECK_FALSE(r.info_error);

    // bit 1 weakly wrong, neighbors strongly right
    std::vector<double> noisy = {6, -0.3, 6, 6};
    auto r2 = decode::decode(g, noisy, cfg, info);
    CHECK(r2.converged);
    CHECK_FALSE(r2.word_error);

    cfg.variant = DecoderVariant::MinSum;
    auto r3 = decode::decode(g, noisy, cfg, info);
    CHECK_FALSE(r3.word_error);
}

TEST_CASE("peeling resolves single erasures only") {
    auto h = small_h();
    TannerGraph g(h);

    std::vector<std::uint8_t> one = {0, 1, 0, 0};
    auto r = decode_peeling(g, one);
    CHECK(r.all_resolved);

    // both checks see two erasures: stuck
    std::vector<std::uint8_t> two = {0, 1, 1, 0};
    auto r2 = decode_peeling(g, two);
    CHECK_FALSE(r2.all_resolved);
    CHECK(r2.still_erased[1]);
    CHECK(r2.still_erased[2]);

    // sequential peel: solving bit 3 unlocks bit 1
    std::vector<std::uint8_t> chain = {0, 1, 0, 1};
    auto r3 = decode_peeling(g, chain);
    CHECK(r3.all_resolved);
    CHECK(r3.iterations >= 1);
}

TEST_CASE("exhaustive ml matches the transmitted word at high snr") {
    auto code = construct::build_root_regular(16, 8);
    std::vector<std::size_t> info = code.info_columns();
    std::mt19937_64 rng(21);
    channel::FadingRealization f;
    f.alpha = {1.0, 1.0};
    gf2::Codeword zero(16, 0);
    for (int t = 0; t < 10; ++t) {
        auto w = channel::transmit(zero, f, 0.05, 1.0, rng);
        auto r = decode_ml_exhaustive(code.h, w, info);
        CHECK_FALSE(r.word_error);
    }
}

TEST_CASE("wer simulation is reproducible and worker independent") {
    auto code = construct::build_root_regular(64, 3);
    auto info = code.info_columns();
    channel::ChannelConfig ch;
    ch.nc = 2;
    ch.rate = 0.5;
    DecoderConfig dec;
    dec.max_iter = 30;
    StopRule stop;
    stop.min_errors = 50;
    stop.max_trials = 20000;
    std::vector<double> pts = {6.0};

    auto a = simulate_wer(code.h, info, ch, dec, pts, stop, 99, 1);
    auto b = simulate_wer(code.h, info, ch, dec, pts, stop, 99, 2);
    REQUIRE(a.size() == 1);
    CHECK(a[0].trials == b[0].trials);
    CHECK(a[0].word_errors == b[0].word_errors);
    CHECK(a[0].all_bit_word_errors == b[0].all_bit_word_errors);
    CHECK(a[0].wer == b[0].wer);
    CHECK(a[0].wer > 0.0);
    CHECK(a[0].ci_low <= a[0].wer);
    CHECK(a[0].ci_high >= a[0].wer);
}

TEST_CASE("wer decreases with snr") {
    auto code = construct::build_root_regular(64, 3);
    auto info = code.info_columns();
    channel::ChannelConfig ch;
    DecoderConfig dec;
    dec.max_iter = 30;
    StopRule stop;
    stop.min_errors = 40;
    stop.max_trials = 40000;
    std::vector<double> pts = {3.0, 12.0};
    auto curve = simulate_wer(code.h, info, ch, dec, pts, stop, 7);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].wer > curve[1].wer);
}
