#include "doctest.h"

#include "rootldpc/channel.hpp"
#include "rootldpc/de.hpp"

#include <cmath>

using namespace rootldpc;
using namespace rootldpc::de;

namespace {

LlrGrid coarse() { return LlrGrid{0.15, 25.0}; }

DeOptions coarse_opts() {
    DeOptions opt;
    opt.grid = coarse();
    return opt;
}

} // namespace

TEST_CASE("grid indexing") {
    LlrGrid g{0.05, 30.0};
    CHECK(g.half_bins() == 600);
    CHECK(g.bins() == 1201);
    CHECK(g.value(600) == doctest::Approx(0.0));
    CHECK(g.value(0) == doctest::Approx(-30.0));
    CHECK(g.nearest_bin(0.0) == 600);
    CHECK(g.nearest_bin(0.024) == 600);
    CHECK(g.nearest_bin(0.026) == 601);
    CHECK(g.nearest_bin(1e9) == g.bins() - 1);
    CHECK(g.nearest_bin(-1e9) == 0);
}

TEST_CASE("density primitives") {
    auto g = coarse();
    auto d = LlrDensity::delta(g, 1.2);
    CHECK(d.total_mass() == doctest::Approx(1.0));
    CHECK(d.mean() == doctest::Approx(1.2).epsilon(0.1));

    auto p = LlrDensity::delta_plus_inf(g);
    CHECK(p.p_inf == 1.0);
    CHECK(p.total_mass() == doctest::Approx(1.0));

    auto mix = LlrDensity::delta(g, 0.0);
    mix.scale(0.5);
    mix.accumulate(LlrDensity::delta(g, 3.0), 0.5);
    CHECK(mix.total_mass() == doctest::Approx(1.0));
    CHECK(mix.mean() == doctest::Approx(1.5).epsilon(0.05));
    mix.scale(0.9);
    mix.normalize();
    CHECK(mix.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("channel density moments") {
    auto g = LlrGrid{0.05, 30.0};
    double alpha = 1.0, sigma2 = 1.0;
    auto mu = channel_density(alpha, sigma2, g);
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mu.mean() == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(mu.variance() == doctest::Approx(4.0).epsilon(1e-2));

    auto erased = channel_density(0.0, sigma2, g);
    CHECK(erased.mass[g.nearest_bin(0.0)] == doctest::Approx(1.0));

    auto perfect = channel_density(channel::FadingRealization::kInf, sigma2, g);
    CHECK(perfect.p_inf == doctest::Approx(1.0));
}

TEST_CASE("variable convolution") {
    auto g = coarse();
    auto a = LlrDensity::delta(g, 1.5);
    auto b = LlrDensity::delta(g, -0.6);
    auto c = conv_var(a, b);
    CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.mean() == doctest::Approx(0.9).epsilon(0.05));

    // out-of-range mass flows to the infinities
    auto big = conv_var(LlrDensity::delta(g, 20.0), LlrDensity::delta(g, 20.0));
    CHECK(big.p_inf == doctest::Approx(1.0));

    // opposite infinities cancel to an erasure
    auto z = conv_var(LlrDensity::delta_plus_inf(g), LlrDensity::delta_minus_inf(g));
    CHECK(z.mass[g.nearest_bin(0.0)] == doctest::Approx(1.0));

    auto keep = conv_var(LlrDensity::delta_plus_inf(g), a);
    CHECK(keep.p_inf == doctest::Approx(1.0));
}

TEST_CASE("check convolution") {
    auto g = coarse();
    auto a = LlrDensity::delta(g, 2.1);
    auto b = LlrDensity::delta(g, 1.2);
    auto c = conv_check(a, b);
    double expect = 2.0 * std::atanh(std::tanh(2.1 / 2) * std::tanh(1.2 / 2));
    CHECK(c.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.mean() == doctest::Approx(expect).epsilon(0.1));

    // +inf is the identity, -inf negates
    auto id = conv_check(LlrDensity::delta_plus_inf(g), a);
    CHECK(id.mean() == doctest::Approx(a.mean()).epsilon(1e-9));
    auto neg = conv_check(LlrDensity::delta_minus_inf(g), a);
    CHECK(neg.mean() == doctest::Approx(-a.mean()).epsilon(1e-9));

    // an erasure wipes the message
    auto z = conv_check(LlrDensity::delta(g, 0.0), a);
    CHECK(z.mass[g.nearest_bin(0.0)] == doctest::Approx(1.0));
}

TEST_CASE("error probability") {
    auto g = coarse();
    CHECK(error_prob(LlrDensity::delta(g, -1.0)) == doctest::Approx(1.0));
    CHECK(error_prob(LlrDensity::delta(g, 1.0)) == doctest::Approx(0.0));
    CHECK(error_prob(LlrDensity::delta(g, 0.0)) == doctest::Approx(0.5));
    CHECK(error_prob(LlrDensity::delta_minus_inf(g)) == doctest::Approx(1.0));
}

TEST_CASE("degree mixtures reduce to powers for regular codes") {
    auto g = coarse();
    auto dd = construct::DegreeDistribution::regular(3, 6);
    auto p = channel_density(1.0, 1.0, g);

    auto lam = mix_lambda(p, dd); // p ** 2 under variable conv
    auto direct = conv_var(p, p);
    CHECK(lam.mean() == doctest::Approx(direct.mean()).epsilon(1e-9));

    auto lam_t = mix_lambda_tilde(p, dd); // one power less
    CHECK(lam_t.mean() == doctest::Approx(p.mean()).epsilon(1e-9));

    auto rho_t = mix_rho_tilde(p, dd);
    auto rho = mix_rho(p, dd);
    auto again = conv_check(rho_t, p);
    CHECK(again.mean() == doctest::Approx(rho.mean()).epsilon(1e-6));
}

TEST_CASE("awgn de: root matches the random ensemble under equal gains") {
    auto dd = construct::DegreeDistribution::regular(3, 6);
    auto opt = coarse_opts();
    // sigma^2 = 1/(2 R Eb/N0) at rate 1/2
    auto sigma2_at = [](double db) { return std::pow(10.0, -db / 10.0); };
    // comfortably above threshold
    double s_good = sigma2_at(1.8);
    auto root = run_de(dd, true, 1.0, 1.0, s_good, opt);
    auto rnd = run_de(dd, false, 1.0, 1.0, s_good, opt);
    CHECK(root.decodable);
    CHECK(rnd.decodable);

    // comfortably below threshold
    double s_bad = sigma2_at(0.4);
    auto root_b = run_de(dd, true, 1.0, 1.0, s_bad, opt);
    auto rnd_b = run_de(dd, false, 1.0, 1.0, s_bad, opt);
    CHECK_FALSE(root_b.decodable);
    CHECK_FALSE(rnd_b.decodable);
}

TEST_CASE("root ensemble survives a single erased block") {
    auto dd = construct::DegreeDistribution::regular(3, 6);
    auto opt = coarse_opts();
    // block 1 erased, block 2 perfect: rootchecks recover in one iteration
    auto r = run_de(dd, true, 0.0, channel::FadingRealization::kInf, 1.0, opt);
    CHECK(r.decodable);
    CHECK(r.iterations <= 2);

    // the random ensemble sees a half-erased mixture and fails
    auto m = run_de(dd, false, 0.0, channel::FadingRealization::kInf, 1.0, opt);
    CHECK_FALSE(m.decodable);

    // both blocks erased: nobody decodes
    auto b = run_de(dd, true, 0.0, 0.0, 1.0, opt);
    CHECK_FALSE(b.decodable);
}

TEST_CASE("awgn threshold of the regular pair") {
    auto dd = construct::DegreeDistribution::regular(3, 6);
    auto opt = coarse_opts();
    auto rep = awgn_threshold(dd, false, opt, 0.5, 2.0);
    CHECK(rep.ebn0_db == doctest::Approx(1.11).epsilon(0.1));
    CHECK(rep.capacity_ebn0_db == doctest::Approx(0.187).epsilon(0.05));
    CHECK(rep.gap_db == doctest::Approx(rep.ebn0_db - rep.capacity_ebn0_db).epsilon(1e-9));
    CHECK(rep.ratio_absolute == doctest::Approx(std::sqrt(std::pow(10.0, rep.ebn0_db / 10.0))).epsilon(1e-9));
    CHECK(rep.ratio_gap == doctest::Approx(std::sqrt(std::pow(10.0, rep.gap_db / 10.0))).epsilon(1e-9));
}

TEST_CASE("threshold ratio helper") {
    // gap convention: unity exactly at the capacity limit
    double cap_db = 10.0 * std::log10(channel::bpsk_capacity_ebn0(0.5));
    CHECK(threshold_ratio(cap_db) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(threshold_ratio(3.0) ==
          doctest::Approx(std::sqrt(std::pow(10.0, (3.0 - cap_db) / 10.0))).epsilon(1e-9));
}

TEST_CASE("asymptotic wer sampling modes agree") {
    auto dd = construct::DegreeDistribution::regular(3, 6);
    auto opt = coarse_opts();
    opt.max_iter = 200;
    auto mc = de_asymptotic_wer(dd, true, 15.0, 1500, 11, opt, FadingSampling::RayleighMc, 1);
    auto is = de_asymptotic_wer(dd, true, 15.0, 1500, 11, opt, FadingSampling::ImportanceBox, 1);
    CHECK(mc.wer > 0.0);
    CHECK(is.wer > 0.0);
    // loose agreement; acceptance runs the tight version
    CHECK(is.wer == doctest::Approx(mc.wer).epsilon(0.6));
    CHECK(mc.ci_low <= mc.wer);
    CHECK(mc.ci_high >= mc.wer);

    auto is2 = de_asymptotic_wer(dd, true, 15.0, 1500, 11, opt, FadingSampling::ImportanceBox, 2);
    CHECK(is2.wer == doctest::Approx(is.wer).epsilon(1e-12)); // worker independence
}
