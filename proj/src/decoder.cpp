#include "rootldpc/decoder.hpp"
#include "rootldpc/parallel.hpp"
#include "rootldpc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace rootldpc::decode {

TannerGraph::TannerGraph(const gf2::BinaryMatrix& h) {
    bit_edges_.resize(h.cols());
    check_edges_.resize(h.rows());
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c)
            if (h.get(r, c)) {
                std::size_t e = edge_bit_.size();
                edge_bit_.push_back(c);
                edge_check_.push_back(r);
                bit_edges_[c].push_back(e);
                check_edges_[r].push_back(e);
            }
}

double check_update_bp(std::span<const double> inputs, double clip) {
    if (inputs.empty()) throw std::invalid_argument("check_update_bp: no inputs");
    double prod = 1.0;
    for (double x : inputs) prod *= std::tanh(0.5 * x);
    if (prod >= 1.0) return clip;
    if (prod <= -1.0) return -clip;
    return std::clamp(2.0 * std::atanh(prod), -clip, clip);
}

double check_update_minsum(std::span<const double> inputs) {
    if (inputs.empty()) throw std::invalid_argument("check_update_minsum: no inputs");
    double mag = std::numeric_limits<double>::infinity();
    double sign = 1.0;
    for (double x : inputs) {
        mag = std::min(mag, std::abs(x));
        if (x < 0) sign = -sign;
    }
    return sign * mag;
}

namespace {

// scratch buffers reused across iterations of one decode call
struct Workspace {
    std::vector<double> v2c, c2v, total, pre;
    std::vector<std::uint8_t> hard;
};

bool syndrome_ok(const TannerGraph& g, const std::vector<std::uint8_t>& hard) {
    for (std::size_t c = 0; c < g.num_checks(); ++c) {
        int s = 0;
        for (std::size_t e : g.edges_of_check(c)) s ^= hard[g.bit_of_edge(e)];
        if (s) return false;
    }
    return true;
}

} // namespace

DecodeResult decode(const TannerGraph& g, std::span<const double> llr,
                    const DecoderConfig& cfg, std::span<const std::size_t> info_bits) {
    if (llr.size() != g.num_bits())
        throw std::invalid_argument("decode: LLR length mismatch");
    const std::size_t nb = g.num_bits(), ne = g.num_edges();
    Workspace ws;
    ws.v2c.resize(ne);
    ws.c2v.assign(ne, 0.0);
    ws.total.resize(nb);
    ws.pre.resize(64);
    ws.hard.resize(nb);

    DecodeResult res;
    const bool minsum = cfg.variant == DecoderVariant::MinSum;

    for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
        // variable update: v2c = channel + sum of other c2v
        for (std::size_t b = 0; b < nb; ++b) {
            double tot = llr[b];
            for (std::size_t e : g.edges_of_bit(b)) tot += ws.c2v[e];
            ws.total[b] = tot;
            for (std::size_t e : g.edges_of_bit(b))
                ws.v2c[e] = std::clamp(tot - ws.c2v[e], -cfg.llr_clip, cfg.llr_clip);
        }
        // check update (extrinsic via prefix/suffix products)
        for (std::size_t c = 0; c < g.num_checks(); ++c) {
            auto edges = g.edges_of_check(c);
            const std::size_t d = edges.size();
            if (ws.pre.size() < d + 1) ws.pre.resize(d + 1);
            if (!minsum) {
                ws.pre[0] = 1.0;
                for (std::size_t k = 0; k < d; ++k)
                    ws.pre[k + 1] = ws.pre[k] * std::tanh(0.5 * ws.v2c[edges[k]]);
                double suf = 1.0;
                for (std::size_t k = d; k-- > 0;) {
                    double prod = ws.pre[k] * suf;
                    double out;
                    if (prod >= 1.0) out = cfg.llr_clip;
                    else if (prod <= -1.0) out = -cfg.llr_clip;
                    else out = std::clamp(2.0 * std::atanh(prod), -cfg.llr_clip, cfg.llr_clip);
                    ws.c2v[edges[k]] = out;
                    suf *= std::tanh(0.5 * ws.v2c[edges[k]]);
                }
            } else {
                // two smallest magnitudes + overall sign
                double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
                std::size_t arg1 = 0;
                int sgn = 1;
                for (std::size_t k = 0; k < d; ++k) {
                    double v = ws.v2c[edges[k]];
                    double a = std::abs(v);
                    if (v < 0) sgn = -sgn;
                    if (a < m1) { m2 = m1; m1 = a; arg1 = k; }
                    else if (a < m2) m2 = a;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    double v = ws.v2c[edges[k]];
                    double mag = (k == arg1) ? m2 : m1;
                    int s = sgn * (v < 0 ? -1 : 1);
                    ws.c2v[edges[k]] = std::clamp(s * mag, -cfg.llr_clip, cfg.llr_clip);
                }
            }
        }
        // a-posteriori hard decision; ties resolve to bit 1
        for (std::size_t b = 0; b < nb; ++b) {
            double tot = llr[b];
            for (std::size_t e : g.edges_of_bit(b)) tot += ws.c2v[e];
            ws.total[b] = tot;
            ws.hard[b] = tot > 0.0 ? 0 : 1;
        }
        res.iterations_used = it;
        if (cfg.early_stop && syndrome_ok(g, ws.hard)) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged && cfg.early_stop)
        res.converged = syndrome_ok(g, ws.hard);
    res.hard_bits = std::move(ws.hard);
    res.word_error = std::any_of(res.hard_bits.begin(), res.hard_bits.end(),
                                 [](std::uint8_t b) { return b != 0; });
    res.info_error = std::any_of(info_bits.begin(), info_bits.end(),
                                 [&](std::size_t b) { return res.hard_bits[b] != 0; });
    return res;
}

PeelingResult decode_peeling(const TannerGraph& g, std::span<const std::uint8_t> erased) {
    if (erased.size() != g.num_bits())
        throw std::invalid_argument("decode_peeling: mask length mismatch");
    PeelingResult res;
    res.still_erased.assign(erased.begin(), erased.end());
    bool progress = true;
    while (progress) {
        progress = false;
        ++res.iterations;
        for (std::size_t c = 0; c < g.num_checks(); ++c) {
            std::size_t n_erased = 0, last = 0;
            for (std::size_t e : g.edges_of_check(c)) {
                std::size_t b = g.bit_of_edge(e);
                if (res.still_erased[b]) { ++n_erased; last = b; }
            }
            if (n_erased == 1) {
                res.still_erased[last] = 0;
                progress = true;
            }
        }
    }
    res.all_resolved = std::none_of(res.still_erased.begin(), res.still_erased.end(),
                                    [](std::uint8_t e) { return e != 0; });
    return res;
}

DecodeResult decode_ml_exhaustive(const gf2::BinaryMatrix& h, const channel::ReceivedWord& w,
                                  std::span<const std::size_t> info_bits,
                                  std::size_t max_dim) {
    const std::size_t n = h.cols();
    auto basis = gf2::kernel_basis(h);
    if (basis.size() > max_dim)
        throw std::length_error("decode_ml_exhaustive: codebook exceeds budget");
    const std::size_t nc = w.fading.alpha.size();
    const std::size_t l = n / nc;
    const double amp = std::sqrt(w.es);

    // per-bit correlation gain y_i * alpha_j * sqrt(Es)
    std::vector<double> gain(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i / l;
        double a = w.fading.is_perfect(j) ? 1.0 : w.fading.alpha[j];
        gain[i] = w.y[i] * a * amp;
    }

    auto metric = [&](const gf2::Codeword& c) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += c[i] ? -gain[i] : gain[i];
        return m;
    };

    gf2::Codeword best(n, 0), cur(n, 0);
    double best_m = metric(best);
    const std::size_t total = std::size_t(1) << basis.size();
    for (std::size_t i = 1; i < total; ++i) {
        std::size_t bit = std::countr_zero(i);
        for (std::size_t j = 0; j < n; ++j) cur[j] ^= basis[bit][j];
        double m = metric(cur);
        if (m > best_m) { best_m = m; best = cur; }
    }

    DecodeResult res;
    res.hard_bits = best;
    res.converged = true;
    res.iterations_used = 1;
    res.word_error = std::any_of(best.begin(), best.end(), [](std::uint8_t b) { return b != 0; });
    res.info_error = std::any_of(info_bits.begin(), info_bits.end(),
                                 [&](std::size_t b) { return best[b] != 0; });
    return res;
}

WerCurve simulate_wer(const gf2::BinaryMatrix& h, std::span<const std::size_t> info_bits,
                      channel::ChannelConfig ch, const DecoderConfig& dec,
                      std::span<const double> ebn0_list, const StopRule& stop,
                      std::uint64_t seed, unsigned workers) {
    if (workers == 0) workers = default_workers();
    TannerGraph graph(h);
    const gf2::Codeword zero(h.cols(), 0);
    WerCurve curve;

    for (double ebn0 : ebn0_list) {
        ch.ebn0_db = ebn0;
        const double sigma2 = ch.sigma2();
        // per-point seed offset so SNR points draw independent streams
        const std::uint64_t point_seed = splitmix64(seed ^ std::hash<double>{}(ebn0));

        std::size_t trials = 0, errors = 0, all_bit_errors = 0;
        unsigned long long iter_sum = 0;
        std::mutex mu;
        const std::size_t batch = 4096;
        while (trials < stop.max_trials && errors < stop.min_errors) {
            const std::size_t t0 = trials;
            const std::size_t t1 = std::min(stop.max_trials, t0 + batch);
            parallel_chunks(t1 - t0, 256, workers,
                            [&](std::size_t b, std::size_t e, unsigned) {
                std::size_t local_err = 0, local_all = 0;
                unsigned long long local_iter = 0;
                for (std::size_t k = b; k < e; ++k) {
                    auto rng = trial_rng(point_seed, t0 + k);
                    auto fading = channel::sample_fading(ch, rng);
                    auto word = channel::transmit(zero, fading, sigma2, ch.es, rng);
                    auto llr = channel::channel_llr(word);
                    auto res = decode(graph, llr, dec, info_bits);
                    local_iter += res.iterations_used;
                    if (res.info_error) ++local_err;
                    if (res.word_error) ++local_all;
                }
                std::lock_guard<std::mutex> lock(mu);
                errors += local_err;
                all_bit_errors += local_all;
                iter_sum += local_iter;
            });
            trials = t1;
        }
        WerPoint pt;
        pt.ebn0_db = ebn0;
        pt.trials = trials;
        pt.word_errors = errors;
        pt.all_bit_word_errors = all_bit_errors;
        pt.wer = trials ? double(errors) / double(trials) : 0.0;
        std::tie(pt.ci_low, pt.ci_high) = channel::wilson_interval(errors, trials);
        pt.avg_iterations = trials ? double(iter_sum) / double(trials) : 0.0;
        curve.push_back(pt);
    }
    return curve;
}

} // namespace rootldpc::decode
