#include "rootldpc/de.hpp"
#include "rootldpc/channel.hpp"
#include "rootldpc/parallel.hpp"
#include "rootldpc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace rootldpc::de {

using construct::DegreeDistribution;

int LlrGrid::nearest_bin(double v) const {
    long k = std::lround(std::clamp(v / step, -2.0 * half_bins(), 2.0 * half_bins()));
    return std::clamp(half_bins() + static_cast<int>(k), 0, bins() - 1);
}

LlrDensity LlrDensity::delta(const LlrGrid& g, double v) {
    LlrDensity d(g);
    d.mass[g.nearest_bin(v)] = 1.0;
    return d;
}

LlrDensity LlrDensity::delta_plus_inf(const LlrGrid& g) {
    LlrDensity d(g);
    d.p_inf = 1.0;
    return d;
}

LlrDensity LlrDensity::delta_minus_inf(const LlrGrid& g) {
    LlrDensity d(g);
    d.m_inf = 1.0;
    return d;
}

double LlrDensity::total_mass() const {
    double s = p_inf + m_inf;
    for (double m : mass) s += m;
    return s;
}

double LlrDensity::mean() const {
    double s = 0.0;
    for (int i = 0; i < grid.bins(); ++i) s += mass[i] * grid.value(i);
    return s;
}

double LlrDensity::variance() const {
    double mu = mean(), s = 0.0, w = 0.0;
    for (int i = 0; i < grid.bins(); ++i) {
        s += mass[i] * (grid.value(i) - mu) * (grid.value(i) - mu);
        w += mass[i];
    }
    return w > 0 ? s / w : 0.0;
}

void LlrDensity::scale(double s) {
    for (double& m : mass) m *= s;
    p_inf *= s;
    m_inf *= s;
}

void LlrDensity::accumulate(const LlrDensity& other, double weight) {
    if (!(grid == other.grid)) throw std::invalid_argument("accumulate: grid mismatch");
    for (int i = 0; i < grid.bins(); ++i) mass[i] += weight * other.mass[i];
    p_inf += weight * other.p_inf;
    m_inf += weight * other.m_inf;
}

void LlrDensity::normalize() {
    double m = total_mass();
    if (m > 0.0) scale(1.0 / m);
}

LlrDensity channel_density(double alpha, double sigma2, const LlrGrid& grid) {
    if (alpha == 0.0) return LlrDensity::delta(grid, 0.0);
    if (alpha == channel::FadingRealization::kInf) return LlrDensity::delta_plus_inf(grid);
    const double mean = 2.0 * alpha * alpha / sigma2;
    const double sd = 2.0 * alpha / std::sqrt(sigma2);
    auto cdf = [&](double x) { return 0.5 * (1.0 + std::erf((x - mean) / (sd * std::sqrt(2.0)))); };
    LlrDensity d(grid);
    const double h = grid.step / 2.0;
    for (int i = 0; i < grid.bins(); ++i) {
        double v = grid.value(i);
        d.mass[i] = cdf(v + h) - cdf(v - h);
    }
    d.m_inf = cdf(-grid.half_range - h);
    d.p_inf = 1.0 - cdf(grid.half_range + h);
    return d;
}

LlrDensity conv_var(const LlrDensity& p, const LlrDensity& q) {
    if (!(p.grid == q.grid)) throw std::invalid_argument("conv_var: grid mismatch");
    const int n = p.grid.bins();
    const int k0 = p.grid.half_bins();
    LlrDensity out(p.grid);

    double pf = 0.0, qf = 0.0;
    for (double m : p.mass) pf += m;
    for (double m : q.mass) qf += m;

    out.p_inf = p.p_inf * (qf + q.p_inf) + q.p_inf * pf;
    out.m_inf = p.m_inf * (qf + q.m_inf) + q.m_inf * pf;
    // opposite infinities cancel to the zero bin
    out.mass[k0] += p.p_inf * q.m_inf + p.m_inf * q.p_inf;

    for (int i = 0; i < n; ++i) {
        const double pi = p.mass[i];
        if (pi == 0.0) continue;
        const int base = i - k0;
        for (int j = 0; j < n; ++j) {
            const double w = pi * q.mass[j];
            if (w == 0.0) continue;
            const int k = base + j;
            if (k < 0) out.m_inf += w;
            else if (k >= n) out.p_inf += w;
            else out.mass[k] += w;
        }
    }
    return out;
}

namespace {

// cached pairwise bin map for the tanh rule on a given grid
struct CheckTable {
    std::vector<std::int32_t> idx; // bins x bins
};

const CheckTable& check_table(const LlrGrid& g) {
    static std::map<std::pair<int, double>, std::unique_ptr<CheckTable>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(g.bins(), g.step);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto tbl = std::make_unique<CheckTable>();
    const int n = g.bins();
    tbl->idx.resize(std::size_t(n) * n);
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i) th[i] = std::tanh(0.5 * g.value(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            double prod = th[i] * th[j];
            double y = std::abs(prod) < 1.0 ? 2.0 * std::atanh(prod)
                                            : std::copysign(2.0 * g.half_range, prod);
            std::int32_t k = g.nearest_bin(y);
            tbl->idx[std::size_t(i) * n + j] = k;
            tbl->idx[std::size_t(j) * n + i] = k;
        }
    const CheckTable& ref = *tbl;
    cache.emplace(key, std::move(tbl));
    return ref;
}

} // namespace

LlrDensity conv_check(const LlrDensity& p, const LlrDensity& q) {
    if (!(p.grid == q.grid)) throw std::invalid_argument("conv_check: grid mismatch");
    const int n = p.grid.bins();
    LlrDensity out(p.grid);

    // infinities: +inf is the identity, -inf negates
    out.p_inf = p.p_inf * q.p_inf + p.m_inf * q.m_inf;
    out.m_inf = p.p_inf * q.m_inf + p.m_inf * q.p_inf;
    for (int j = 0; j < n; ++j) {
        out.mass[j] += p.p_inf * q.mass[j] + q.p_inf * p.mass[j];
        out.mass[n - 1 - j] += p.m_inf * q.mass[j] + q.m_inf * p.mass[j];
    }

    const auto& tbl = check_table(p.grid);
    for (int i = 0; i < n; ++i) {
        const double pi = p.mass[i];
        if (pi == 0.0) continue;
        const std::int32_t* row = tbl.idx.data() + std::size_t(i) * n;
        for (int j = 0; j < n; ++j) {
            const double w = pi * q.mass[j];
            if (w != 0.0) out.mass[row[j]] += w;
        }
    }
    return out;
}

double error_prob(const LlrDensity& p) {
    const int k0 = p.grid.half_bins();
    double e = p.m_inf;
    for (int i = 0; i < k0; ++i) e += p.mass[i];
    e += 0.5 * p.mass[k0];
    return e;
}

namespace {

// prefix powers under + (power 0 = delta(0), the identity)
std::vector<LlrDensity> var_powers(const LlrDensity& p, int kmax) {
    std::vector<LlrDensity> pw;
    pw.push_back(LlrDensity::delta(p.grid, 0.0));
    for (int k = 1; k <= kmax; ++k)
        pw.push_back(k == 1 ? p : conv_var(pw.back(), p));
    return pw;
}

// prefix powers under the tanh rule (power 0 = delta(+inf), the identity)
std::vector<LlrDensity> chk_powers(const LlrDensity& p, int kmax) {
    std::vector<LlrDensity> pw;
    pw.push_back(LlrDensity::delta_plus_inf(p.grid));
    for (int k = 1; k <= kmax; ++k)
        pw.push_back(k == 1 ? p : conv_check(pw.back(), p));
    return pw;
}

LlrDensity weighted_mix(const std::vector<LlrDensity>& powers,
                        const std::vector<std::pair<int, double>>& coeffs,
                        int power_shift, const LlrGrid& g) {
    LlrDensity out(g);
    for (auto [deg, w] : coeffs)
        out.accumulate(powers[deg + power_shift], w);
    return out;
}

// tilde mixture = polynomial divided by x: same coefficients, one power
// less. Keeping the original coefficients (rather than reweighting by the
// isolated-edge count) is what makes the two-block recursion collapse
// exactly onto classical DE when the fading gains coincide.
std::vector<std::pair<int, double>>
tilde_coeffs(const std::vector<std::pair<int, double>>& poly) {
    return poly;
}

std::vector<std::pair<int, double>>
node_coeffs(const std::vector<std::pair<int, double>>& poly) {
    std::vector<std::pair<int, double>> c;
    double z = 0.0;
    for (auto [d, f] : poly) z += f / d;
    for (auto [d, f] : poly) c.push_back({d, (f / d) / z});
    return c;
}

} // namespace

LlrDensity mix_lambda(const LlrDensity& p, const DegreeDistribution& dd) {
    auto pw = var_powers(p, dd.max_lambda_degree() - 1);
    return weighted_mix(pw, dd.lambda, -1, p.grid);
}

LlrDensity mix_rho(const LlrDensity& p, const DegreeDistribution& dd) {
    auto pw = chk_powers(p, dd.max_rho_degree() - 1);
    return weighted_mix(pw, dd.rho, -1, p.grid);
}

LlrDensity mix_lambda_tilde(const LlrDensity& p, const DegreeDistribution& dd) {
    auto pw = var_powers(p, dd.max_lambda_degree() - 2);
    return weighted_mix(pw, tilde_coeffs(dd.lambda), -2, p.grid);
}

LlrDensity mix_rho_tilde(const LlrDensity& p, const DegreeDistribution& dd) {
    auto pw = chk_powers(p, dd.max_rho_degree() - 2);
    return weighted_mix(pw, tilde_coeffs(dd.rho), -2, p.grid);
}

DeState de_init(const LlrDensity& mu1, const LlrDensity& mu2) {
    return DeState{mu1, mu2, mu1, mu2, mu1, mu2, 0};
}

namespace {

// shared intermediates of one root-DE iteration
struct RootStepScratch {
    LlrDensity mix1, mix2, rho_t1, rho_t2, rho_f1, rho_f2, in1, in2;
};

RootStepScratch root_intermediates(const DeState& s, const DegreeDistribution& dd,
                                   double fe) {
    const LlrGrid& g = s.q1.grid;
    RootStepScratch r{LlrDensity(g), LlrDensity(g), LlrDensity(g), LlrDensity(g),
                      LlrDensity(g), LlrDensity(g), LlrDensity(g), LlrDensity(g)};
    r.mix1 = s.f1;
    r.mix1.scale(fe);
    r.mix1.accumulate(s.g1, 1.0 - fe);
    r.mix2 = s.f2;
    r.mix2.scale(fe);
    r.mix2.accumulate(s.g2, 1.0 - fe);

    auto pw1 = chk_powers(r.mix1, dd.max_rho_degree() - 1);
    auto pw2 = chk_powers(r.mix2, dd.max_rho_degree() - 1);
    r.rho_t1 = weighted_mix(pw1, tilde_coeffs(dd.rho), -2, g);
    r.rho_t2 = weighted_mix(pw2, tilde_coeffs(dd.rho), -2, g);
    r.rho_f1 = weighted_mix(pw1, dd.rho, -1, g);
    r.rho_f2 = weighted_mix(pw2, dd.rho, -1, g);
    r.in1 = conv_check(s.q2, r.rho_t1);
    r.in2 = conv_check(s.q1, r.rho_t2);
    return r;
}

} // namespace

DeState de_step_root(const DeState& state, const LlrDensity& mu1, const LlrDensity& mu2,
                     const DegreeDistribution& dd) {
    const double fe = construct::multiedge_fraction(dd).first;
    auto r = root_intermediates(state, dd, fe);
    const LlrGrid& g = state.q1.grid;

    auto pw_in1 = var_powers(r.in1, dd.max_lambda_degree() - 1);
    auto pw_in2 = var_powers(r.in2, dd.max_lambda_degree() - 1);

    DeState next = state;
    next.q1 = conv_var(mu1, weighted_mix(pw_in1, dd.lambda, -1, g));
    next.q2 = conv_var(mu2, weighted_mix(pw_in2, dd.lambda, -1, g));
    // info -> opposite check: the rootcheck output carries the other block's inputs
    next.f1 = conv_var(conv_var(mu1, weighted_mix(pw_in1, tilde_coeffs(dd.lambda), -2, g)),
                       r.rho_f2);
    next.f2 = conv_var(conv_var(mu2, weighted_mix(pw_in2, tilde_coeffs(dd.lambda), -2, g)),
                       r.rho_f1);
    next.q1.normalize();
    next.q2.normalize();
    next.f1.normalize();
    next.f2.normalize();
    next.g1 = next.q1;
    next.g2 = next.q2;
    next.iteration = state.iteration + 1;
    return next;
}

LlrDensity info_app_density(const DeState& state, const LlrDensity& mu1,
                            const LlrDensity& mu2, const DegreeDistribution& dd,
                            int block) {
    const double fe = construct::multiedge_fraction(dd).first;
    auto r = root_intermediates(state, dd, fe);
    const LlrGrid& g = state.q1.grid;
    const auto& in = block == 1 ? r.in1 : r.in2;
    const auto& mu = block == 1 ? mu1 : mu2;
    const auto& root_in = block == 1 ? r.rho_f2 : r.rho_f1;
    auto pw = var_powers(in, dd.max_lambda_degree() - 1);
    auto app = conv_var(conv_var(mu, weighted_mix(pw, node_coeffs(dd.lambda), -1, g)), root_in);
    app.normalize();
    return app;
}

namespace {

DeRunResult run_de_root(const DegreeDistribution& dd, double alpha1, double alpha2,
                        double sigma2, const DeOptions& opt) {
    const LlrDensity mu1 = channel_density(alpha1, sigma2, opt.grid);
    const LlrDensity mu2 = channel_density(alpha2, sigma2, opt.grid);
    const double fe = construct::multiedge_fraction(dd).first;
    DeState s = de_init(mu1, mu2);
    DeRunResult res;
    double prev = 1.0;
    auto r = root_intermediates(s, dd, fe);
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        const LlrGrid& g = s.q1.grid;
        auto pw1 = var_powers(r.in1, dd.max_lambda_degree() - 1);
        auto pw2 = var_powers(r.in2, dd.max_lambda_degree() - 1);

        DeState next = s;
        next.q1 = conv_var(mu1, weighted_mix(pw1, dd.lambda, -1, g));
        next.q2 = conv_var(mu2, weighted_mix(pw2, dd.lambda, -1, g));
        next.f1 = conv_var(conv_var(mu1, weighted_mix(pw1, tilde_coeffs(dd.lambda), -2, g)),
                           r.rho_f2);
        next.f2 = conv_var(conv_var(mu2, weighted_mix(pw2, tilde_coeffs(dd.lambda), -2, g)),
                           r.rho_f1);
        next.q1.normalize();
        next.q2.normalize();
        next.f1.normalize();
        next.f2.normalize();
        next.g1 = next.q1;
        next.g2 = next.q2;
        next.iteration = it;
        s = std::move(next);

        // info-class a-posteriori error, averaged over the two blocks
        r = root_intermediates(s, dd, fe);
        auto app_pw1 = var_powers(r.in1, dd.max_lambda_degree() - 1);
        auto app_pw2 = var_powers(r.in2, dd.max_lambda_degree() - 1);
        LlrDensity app1 = conv_var(
            conv_var(mu1, weighted_mix(app_pw1, node_coeffs(dd.lambda), -1, g)), r.rho_f2);
        LlrDensity app2 = conv_var(
            conv_var(mu2, weighted_mix(app_pw2, node_coeffs(dd.lambda), -1, g)), r.rho_f1);
        app1.normalize();
        app2.normalize();
        double err = 0.5 * (error_prob(app1) + error_prob(app2));

        res.iterations = it;
        res.final_error = err;
        if (err < opt.target) { res.decodable = true; break; }
        if (prev - err < opt.stall) break;
        prev = err;
    }
    return res;
}

DeRunResult run_de_random(const DegreeDistribution& dd, double alpha1, double alpha2,
                          double sigma2, const DeOptions& opt) {
    // random ensemble: bits are spread over both blocks, so the channel
    // density is the even mixture of the two per-block densities
    LlrDensity mu = channel_density(alpha1, sigma2, opt.grid);
    mu.scale(0.5);
    mu.accumulate(channel_density(alpha2, sigma2, opt.grid), 0.5);

    LlrDensity p = mu;
    DeRunResult res;
    double prev = 1.0;
    const LlrGrid& g = opt.grid;
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        auto rp_pw = chk_powers(p, dd.max_rho_degree() - 1);
        LlrDensity rp = weighted_mix(rp_pw, dd.rho, -1, g);
        auto vp = var_powers(rp, dd.max_lambda_degree());
        p = conv_var(mu, weighted_mix(vp, dd.lambda, -1, g));
        p.normalize();
        LlrDensity app = conv_var(mu, weighted_mix(vp, node_coeffs(dd.lambda), 0, g));
        app.normalize();
        double err = error_prob(app);

        res.iterations = it;
        res.final_error = err;
        if (err < opt.target) { res.decodable = true; break; }
        if (prev - err < opt.stall) break;
        prev = err;
    }
    return res;
}

} // namespace

DeRunResult run_de(const DegreeDistribution& dd, bool root, double alpha1, double alpha2,
                   double sigma2, const DeOptions& opt) {
    return root ? run_de_root(dd, alpha1, alpha2, sigma2, opt)
                : run_de_random(dd, alpha1, alpha2, sigma2, opt);
}

namespace {

double sigma2_from_ebn0(double ebn0_db) {
    const double gamma = 0.5 * std::pow(10.0, ebn0_db / 10.0); // rate 1/2
    return 1.0 / (2.0 * gamma);
}

} // namespace

ThresholdReport awgn_threshold(const DegreeDistribution& dd, bool root,
                               const DeOptions& opt, double lo_db, double hi_db) {
    auto decodable = [&](double db) {
        return run_de(dd, root, 1.0, 1.0, sigma2_from_ebn0(db), opt).decodable;
    };
    if (!decodable(hi_db))
        throw std::runtime_error("awgn_threshold: no convergence at upper bracket");
    if (decodable(lo_db))
        hi_db = lo_db; // threshold at or below the bracket
    else
        while (hi_db - lo_db > 0.01) {
            double mid = 0.5 * (lo_db + hi_db);
            (decodable(mid) ? hi_db : lo_db) = mid;
        }
    ThresholdReport rep;
    rep.ebn0_db = hi_db;
    rep.capacity_ebn0_db = 10.0 * std::log10(channel::bpsk_capacity_ebn0(0.5));
    rep.gap_db = rep.ebn0_db - rep.capacity_ebn0_db;
    rep.ratio_absolute = std::sqrt(std::pow(10.0, rep.ebn0_db / 10.0));
    rep.ratio_gap = std::sqrt(std::pow(10.0, rep.gap_db / 10.0));
    return rep;
}

double threshold_ratio(double threshold_ebn0_db) {
    const double cap_db = 10.0 * std::log10(channel::bpsk_capacity_ebn0(0.5));
    return std::sqrt(std::pow(10.0, (threshold_ebn0_db - cap_db) / 10.0));
}

AsymptoticWer de_asymptotic_wer(const DegreeDistribution& dd, bool root,
                                double ebn0_db, std::size_t fading_samples,
                                std::uint64_t seed, const DeOptions& opt,
                                FadingSampling sampling, unsigned workers) {
    if (workers == 0) workers = default_workers();
    const double sigma2 = sigma2_from_ebn0(ebn0_db);
    const double gamma = 0.5 * std::pow(10.0, ebn0_db / 10.0);

    double box = 0.0;
    if (sampling == FadingSampling::ImportanceBox) {
        // grow the box until its far corner and both axes are decodable;
        // the failure region then lies inside [0, box]^2
        box = 4.0 * channel::bpsk_capacity_ebn0(0.5) / (2.0 * gamma / 1.0);
        box = std::max(box, 4.0 * 1.05 / std::pow(10.0, ebn0_db / 10.0));
        auto ok = [&](double a2, double b2) {
            return run_de(dd, root, std::sqrt(a2), std::sqrt(b2), sigma2, opt).decodable;
        };
        for (int grow = 0; grow < 64; ++grow) {
            if (ok(box, box) && ok(box, 0.0) && ok(0.0, box)) break;
            box *= 1.5;
        }
    }

    const std::size_t chunk = 64;
    const std::size_t nchunks = (fading_samples + chunk - 1) / chunk;
    struct ChunkAcc {
        double wsum = 0.0, wsq = 0.0;
        std::size_t fails = 0;
        unsigned long long iters = 0;
    };
    std::vector<ChunkAcc> acc(nchunks);

    parallel_chunks(fading_samples, chunk, workers,
                    [&](std::size_t b, std::size_t e, unsigned) {
        ChunkAcc local;
        for (std::size_t k = b; k < e; ++k) {
            auto rng = trial_rng(seed, k);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            double a2, b2, w;
            if (sampling == FadingSampling::ImportanceBox) {
                a2 = box * u(rng);
                b2 = box * u(rng);
                w = box * box * std::exp(-a2 - b2);
            } else {
                a2 = -std::log(1.0 - u(rng));
                b2 = -std::log(1.0 - u(rng));
                w = 1.0;
            }
            auto res = run_de(dd, root, std::sqrt(a2), std::sqrt(b2), sigma2, opt);
            local.iters += res.iterations;
            if (!res.decodable) {
                ++local.fails;
                local.wsum += w;
                local.wsq += w * w;
            }
        }
        acc[b / chunk] = local;
    });

    double wsum = 0.0, wsq = 0.0;
    std::size_t fails = 0;
    unsigned long long iters = 0;
    for (const auto& a : acc) {
        wsum += a.wsum;
        wsq += a.wsq;
        fails += a.fails;
        iters += a.iters;
    }

    AsymptoticWer out;
    out.samples = fading_samples;
    out.avg_iterations = fading_samples ? double(iters) / double(fading_samples) : 0.0;
    const double n = double(fading_samples);
    out.wer = wsum / n;
    if (sampling == FadingSampling::ImportanceBox) {
        double var = std::max(0.0, wsq / n - out.wer * out.wer) / n;
        double half = 2.576 * std::sqrt(var);
        out.ci_low = std::max(0.0, out.wer - half);
        out.ci_high = out.wer + half;
    } else {
        std::tie(out.ci_low, out.ci_high) = channel::wilson_interval(fails, fading_samples);
    }
    return out;
}

} // namespace rootldpc::de
