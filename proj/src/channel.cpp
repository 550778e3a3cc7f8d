#include "rootldpc/channel.hpp"
#include "rootldpc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rootldpc::channel {

double ChannelConfig::snr_per_symbol() const {
    return rate * std::pow(10.0, ebn0_db / 10.0);
}

double ChannelConfig::sigma2() const {
    // N0 = Es / gamma, sigma^2 = N0 / 2
    return es / (2.0 * snr_per_symbol());
}

namespace {

// physicists' Gauss-Hermite rule: int e^{-t^2} f(t) dt ~= sum w_i f(t_i)
struct GaussHermite {
    static constexpr int kNodes = 64;
    std::vector<double> t, w;
    GaussHermite() {
        const int n = kNodes;
        t.resize(n);
        w.resize(n);
        const double sqrt_pi = std::sqrt(M_PI);
        for (int i = 0; i < n / 2; ++i) {
            // initial guess (Stroud & Secrest style), refined by Newton
            double x = i == 0 ? std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0)
                              : t[i - 1];
            if (i == 1) x = t[0] - 1.14 * std::pow(n, 0.426) / t[0];
            if (i == 2) x = 1.86 * t[1] - 0.86 * t[0];
            if (i == 3) x = 1.91 * t[2] - 0.91 * t[1];
            if (i > 3) x = 2.0 * t[i - 1] - t[i - 2];
            double pp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                // recurrence for orthonormal Hermite polynomials
                double p1 = std::pow(M_PI, -0.25), p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = x * std::sqrt(2.0 / (j + 1)) * p2 -
                         std::sqrt(double(j) / (j + 1)) * p3;
                }
                pp = std::sqrt(2.0 * n) * p2;
                double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            t[i] = x;
            t[n - 1 - i] = -x;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        (void)sqrt_pi;
    }
};

const GaussHermite& gh() {
    static GaussHermite rule;
    return rule;
}

inline double soft_bit_entropy(double llr) {
    // log2(1 + e^{-llr}), stable for both tails
    if (llr > 40.0) return std::exp(-llr) / M_LN2;
    if (llr < -40.0) return -llr / M_LN2;
    return std::log1p(std::exp(-llr)) / M_LN2;
}

} // namespace

FadingRealization sample_fading(const ChannelConfig& cfg, std::mt19937_64& rng) {
    FadingRealization f;
    f.alpha.resize(cfg.nc);
    switch (cfg.mode) {
    case FadingMode::Rayleigh: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& a : f.alpha) {
            double v = 1.0 - u(rng); // (0, 1]
            a = std::sqrt(-std::log(v));
        }
        break;
    }
    case FadingMode::Erasure: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& a : f.alpha)
            a = u(rng) < cfg.erasure_prob ? 0.0 : FadingRealization::kInf;
        break;
    }
    case FadingMode::Fixed:
        if (cfg.fixed_alpha.size() != cfg.nc)
            throw std::invalid_argument("sample_fading: fixed alpha vector has wrong length");
        f.alpha = cfg.fixed_alpha;
        break;
    }
    return f;
}

ReceivedWord transmit(const gf2::Codeword& c, const FadingRealization& f,
                      double sigma2, double es, std::mt19937_64& rng) {
    const std::size_t nc = f.alpha.size();
    if (nc == 0 || c.size() % nc != 0)
        throw std::invalid_argument("transmit: N not divisible by block count");
    const std::size_t l = c.size() / nc;
    ReceivedWord w;
    w.fading = f;
    w.sigma2 = sigma2;
    w.es = es;
    w.y.resize(c.size());
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    const double amp = std::sqrt(es);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::size_t j = i / l;
        const double x = c[i] ? -amp : amp;
        if (f.is_perfect(j))
            w.y[i] = x; // infinite-gain sentinel: noiseless with unit gain
        else
            w.y[i] = f.alpha[j] * x + noise(rng);
    }
    return w;
}

std::vector<double> channel_llr(const ReceivedWord& w) {
    const std::size_t nc = w.fading.alpha.size();
    const std::size_t l = w.y.size() / nc;
    std::vector<double> llr(w.y.size());
    for (std::size_t i = 0; i < w.y.size(); ++i) {
        const std::size_t j = i / l;
        if (w.fading.is_erased(j)) {
            llr[i] = 0.0;
        } else if (w.fading.is_perfect(j)) {
            llr[i] = w.y[i] > 0 ? kLlrMax : -kLlrMax;
        } else {
            double v = 2.0 * w.fading.alpha[j] * w.y[i] / w.sigma2;
            llr[i] = std::clamp(v, -kLlrMax, kLlrMax);
        }
    }
    return llr;
}

double bpsk_awgn_mi(double s) {
    if (s < 0) throw std::invalid_argument("bpsk_awgn_mi: negative SNR");
    if (s == 0.0) return 0.0;
    // channel LLR under the all-zero hypothesis: L ~ N(4s, 8s)
    const double mean = 4.0 * s;
    const double sd = std::sqrt(8.0 * s);
    const auto& rule = gh();
    double e = 0.0;
    for (int i = 0; i < GaussHermite::kNodes; ++i) {
        double llr = mean + sd * std::sqrt(2.0) * rule.t[i];
        e += rule.w[i] * soft_bit_entropy(llr);
    }
    e /= std::sqrt(M_PI);
    return std::clamp(1.0 - e, 0.0, 1.0);
}

double bpsk_capacity_ebn0(double rate) {
    double lo = 1e-9, hi = 1e4;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);
        if (bpsk_awgn_mi(rate * mid) < rate) lo = mid; else hi = mid;
    }
    return std::sqrt(lo * hi);
}

double instantaneous_mi(double gamma, const FadingRealization& f) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.alpha.size(); ++j) {
        if (f.is_erased(j)) continue;
        if (f.is_perfect(j)) { s += 1.0; continue; }
        s += bpsk_awgn_mi(gamma * f.alpha[j] * f.alpha[j]);
    }
    return s / double(f.alpha.size());
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double p = double(k) / double(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / double(n);
    const double center = p + z2 / (2.0 * double(n));
    const double half = z * std::sqrt(p * (1.0 - p) / double(n) + z2 / (4.0 * double(n) * double(n)));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

namespace {

// lookup table for I_AWGN used by the Monte-Carlo outage loop
struct MiTable {
    static constexpr int kPoints = 8192;
    static constexpr double kLogMin = -16.0, kLogMax = 6.0;
    std::vector<double> v;
    MiTable() : v(kPoints) {
        for (int i = 0; i < kPoints; ++i) {
            double s = std::exp(kLogMin + (kLogMax - kLogMin) * i / (kPoints - 1));
            v[i] = bpsk_awgn_mi(s);
        }
    }
    double operator()(double s) const {
        if (s <= 0.0) return 0.0;
        double x = std::log(s);
        if (x >= kLogMax) return 1.0;
        if (x <= kLogMin) return v[0] * s / std::exp(kLogMin); // linear-in-s below grid
        double f = (x - kLogMin) / (kLogMax - kLogMin) * (kPoints - 1);
        int i = static_cast<int>(f);
        double frac = f - i;
        return v[i] * (1.0 - frac) + v[i + 1] * frac;
    }
};

const MiTable& mi_table() {
    static MiTable tbl;
    return tbl;
}

} // namespace

OutageEstimate outage_probability(double gamma, double rate, std::size_t nc,
                                  std::size_t samples, std::uint64_t seed) {
    const auto& tbl = mi_table();
    std::size_t outages = 0;
    for (std::size_t trial = 0; trial < samples; ++trial) {
        auto rng = trial_rng(seed, trial);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double mi = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            double a2 = -std::log(1.0 - u(rng)); // unit-mean exponential
            mi += tbl(gamma * a2);
        }
        if (mi / double(nc) < rate) ++outages;
    }
    OutageEstimate est;
    est.samples = samples;
    est.p = double(outages) / double(samples);
    std::tie(est.ci_low, est.ci_high) = wilson_interval(outages, samples);
    return est;
}

namespace {

double invert_mi(double target) {
    // smallest s with I(s) = target, target in (0, 1)
    double lo = 1e-12, hi = 1e4;
    for (int it = 0; it < 100; ++it) {
        double mid = std::sqrt(lo * hi);
        if (bpsk_awgn_mi(mid) < target) lo = mid; else hi = mid;
    }
    return std::sqrt(lo * hi);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double eps) {
    double m = 0.5 * (a + b);
    return adaptive_simpson(f, a, b, f(a), f(m), f(b), eps, 40);
}

} // namespace

double outage_probability_quadrature(double gamma, double rate) {
    // P_out = int_0^inf e^{-a} Pr(I(gamma b) < 2R - I(gamma a)) da,
    // a and b the unit-mean-exponential squared gains
    auto inner = [&](double a) {
        double tau = 2.0 * rate - bpsk_awgn_mi(gamma * a);
        if (tau <= 0.0) return 0.0;
        if (tau >= 1.0) return 1.0;
        double bstar = invert_mi(tau) / gamma;
        return 1.0 - std::exp(-bstar);
    };
    auto f = [&](double a) { return std::exp(-a) * inner(a); };
    return integrate(f, 0.0, 45.0, 1e-9);
}

} // namespace rootldpc::channel
