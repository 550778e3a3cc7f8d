#include "rootldpc/analysis.hpp"
#include "rootldpc/channel.hpp"
#include "rootldpc/construct.hpp"
#include "rootldpc/de.hpp"
#include "rootldpc/decoder.hpp"
#include "rootldpc/gf2.hpp"
#include "rootldpc/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rootldpc;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v;
    return ss.str();
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

void write_header(std::ostream& os, const std::string& command, const KeyValues& kv) {
    os << "# command=" << command << "\n";
    for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

// A constructed or loaded code plus the bit positions counted as information.
struct CodeBundle {
    gf2::BinaryMatrix h;
    std::vector<std::size_t> info_bits;
    bool has_root_meta = false;
    construct::RootLdpcCode root; // valid when has_root_meta
};

struct CodeSpec {
    std::string family = "root-regular";
    std::size_t n = 200;
    std::uint64_t seed = 1;
    int dv = 3, dc = 6;
    int m = 3; // wstar3 parameter
    std::string alist, meta;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--family", family,
                        "code family: root-regular | root-irregular | random-regular | "
                        "wstar2 | wstar3")
            ->check(CLI::IsMember({"root-regular", "root-irregular", "random-regular",
                                   "wstar2", "wstar3"}));
        cmd->add_option("--n", n, "block length N");
        cmd->add_option("--code-seed", seed, "construction seed");
        cmd->add_option("--dv", dv, "variable degree (random-regular)");
        cmd->add_option("--dc", dc, "check degree (random-regular)");
        cmd->add_option("--m", m, "Hamming parameter (wstar3)");
        cmd->add_option("--alist", alist, "load parity-check matrix from alist file");
        cmd->add_option("--meta", meta, "metadata sidecar for --alist (root codes)");
    }

    void describe(KeyValues& kv) const {
        if (!alist.empty()) {
            kv.push_back({"alist", alist});
            if (!meta.empty()) kv.push_back({"meta", meta});
            return;
        }
        kv.push_back({"family", family});
        kv.push_back({"n", std::to_string(n)});
        kv.push_back({"code_seed", std::to_string(seed)});
        if (family == "random-regular") {
            kv.push_back({"dv", std::to_string(dv)});
            kv.push_back({"dc", std::to_string(dc)});
        }
        if (family == "wstar3") kv.push_back({"m", std::to_string(m)});
    }

    CodeBundle build() const {
        CodeBundle b;
        if (!alist.empty()) {
            if (!meta.empty()) {
                b.root = construct::load_code(alist, meta);
                b.h = b.root.h;
                b.info_bits = b.root.info_columns();
                b.has_root_meta = true;
            } else {
                b.h = gf2::read_alist_file(alist);
                b.info_bits.resize(b.h.cols());
                for (std::size_t i = 0; i < b.h.cols(); ++i) b.info_bits[i] = i;
            }
            return b;
        }
        if (family == "root-regular" || family == "root-irregular") {
            b.root = family == "root-regular"
                         ? construct::build_root_regular(n, seed)
                         : construct::build_root_irregular(
                               n, construct::DegreeDistribution::irregular_half_rate(), seed);
            b.h = b.root.h;
            b.info_bits = b.root.info_columns();
            b.has_root_meta = true;
            return b;
        }
        if (family == "random-regular") b.h = construct::random_regular_ldpc(n, dv, dc, seed);
        else if (family == "wstar2") b.h = construct::build_wstar2(n);
        else b.h = construct::build_wstar3(m);
        b.info_bits.resize(b.h.cols());
        for (std::size_t i = 0; i < b.h.cols(); ++i) b.info_bits[i] = i;
        return b;
    }
};

struct DeSpec {
    std::string ensemble = "root";
    std::string dd_name = "regular";
    int dv = 3, dc = 6;
    double step = 0.05, range = 30.0;
    std::size_t max_iter = 500;
    double target = 1e-7;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--ensemble", ensemble, "root | random")
            ->check(CLI::IsMember({"root", "random"}));
        cmd->add_option("--dd", dd_name, "degree distribution: regular | irregular")
            ->check(CLI::IsMember({"regular", "irregular"}));
        cmd->add_option("--dv", dv, "variable degree (regular)");
        cmd->add_option("--dc", dc, "check degree (regular)");
        cmd->add_option("--de-step", step, "LLR grid step");
        cmd->add_option("--de-range", range, "LLR grid half range");
        cmd->add_option("--de-max-iter", max_iter, "DE iteration cap");
        cmd->add_option("--de-target", target, "DE success error target");
    }

    void describe(KeyValues& kv) const {
        kv.push_back({"ensemble", ensemble});
        kv.push_back({"dd", dd_name});
        if (dd_name == "regular") {
            kv.push_back({"dv", std::to_string(dv)});
            kv.push_back({"dc", std::to_string(dc)});
        }
        kv.push_back({"de_step", fmt(step)});
        kv.push_back({"de_range", fmt(range)});
        kv.push_back({"de_max_iter", std::to_string(max_iter)});
        kv.push_back({"de_target", fmt(target)});
    }

    construct::DegreeDistribution distribution() const {
        return dd_name == "regular" ? construct::DegreeDistribution::regular(dv, dc)
                                    : construct::DegreeDistribution::irregular_half_rate();
    }

    de::DeOptions options() const {
        de::DeOptions opt;
        opt.grid.step = step;
        opt.grid.half_range = range;
        opt.max_iter = max_iter;
        opt.target = target;
        return opt;
    }

    bool is_root() const { return ensemble == "root"; }
};

int cmd_construct(const CodeSpec& code, const std::string& out) {
    if (out.empty()) throw std::runtime_error("construct requires --out PATH prefix");
    CodeBundle b = code.build();
    gf2::write_alist_file(out + ".alist", b.h);
    if (b.has_root_meta) construct::save_code(b.root, out + ".alist", out + ".json");
    std::cout << "alist=" << out << ".alist\n";
    if (b.has_root_meta) std::cout << "meta=" << out << ".json\n";
    std::cout << "n=" << b.h.cols() << "\nchecks=" << b.h.rows()
              << "\nrank=" << gf2::rank(b.h) << "\n";
    return 0;
}

int cmd_analyze(const CodeSpec& code, std::size_t nc, std::size_t budget,
                const std::string& out) {
    CodeBundle b = code.build();
    Output o(out);
    std::size_t r = gf2::rank(b.h);
    double rate = 1.0 - double(r) / double(b.h.cols());
    o.stream() << "n=" << b.h.cols() << "\nchecks=" << b.h.rows() << "\nrank=" << r
               << "\nrate=" << fmt(rate) << "\n";
    if (b.h.cols() % nc == 0 && (nc == 2 || nc == 3))
        o.stream() << "ml_full_diversity="
                   << (construct::is_ml_full_diversity(b.h, nc) ? 1 : 0) << "\n";
    o.stream() << "singleton_bound_d=" << gf2::singleton_bound(rate, nc) << "\n";
    try {
        auto div = gf2::diversity_analysis(b.h, nc, budget);
        o.stream() << "d=" << div.d << "\n";
        if (div.trivial_code) o.stream() << "wstar=inf\n";
        else o.stream() << "wstar=" << div.wstar << "\n";
    } catch (const std::length_error&) {
        o.stream() << "wstar=skipped (kernel exceeds enumeration budget)\n";
    }
    return 0;
}

int cmd_simulate(const CodeSpec& code, channel::ChannelConfig ch,
                 const std::string& decoder, std::size_t max_iter, double llr_clip,
                 const std::vector<double>& snrs, decode::StopRule stop,
                 std::uint64_t seed, unsigned workers, const std::string& out) {
    CodeBundle b = code.build();
    decode::DecoderConfig dec;
    dec.variant = decoder == "minsum" ? decode::DecoderVariant::MinSum
                                      : decode::DecoderVariant::Bp;
    dec.max_iter = max_iter;
    dec.llr_clip = llr_clip;

    auto curve = decode::simulate_wer(b.h, b.info_bits, ch, dec, snrs, stop, seed, workers);
    for (auto& pt : curve)
        if (ch.mode == channel::FadingMode::Rayleigh && ch.nc == 2)
            pt.outage = channel::outage_probability_quadrature(
                ch.rate * std::pow(10.0, pt.ebn0_db / 10.0), ch.rate);

    KeyValues kv;
    code.describe(kv);
    kv.push_back({"nc", std::to_string(ch.nc)});
    kv.push_back({"rate", fmt(ch.rate)});
    kv.push_back({"fading", ch.mode == channel::FadingMode::Rayleigh   ? "rayleigh"
                            : ch.mode == channel::FadingMode::Erasure ? "erasure"
                                                                      : "fixed"});
    if (ch.mode == channel::FadingMode::Erasure)
        kv.push_back({"erasure_prob", fmt(ch.erasure_prob)});
    kv.push_back({"decoder", decoder});
    kv.push_back({"max_iter", std::to_string(max_iter)});
    kv.push_back({"llr_clip", fmt(llr_clip)});
    kv.push_back({"min_errors", std::to_string(stop.min_errors)});
    kv.push_back({"max_trials", std::to_string(stop.max_trials)});
    kv.push_back({"seed", std::to_string(seed)});

    Output o(out);
    write_header(o.stream(), "simulate", kv);
    o.stream() << "ebn0_db,trials,word_errors,all_bit_word_errors,wer,ci_low,ci_high,"
                  "avg_iterations,outage\n";
    for (const auto& pt : curve)
        o.stream() << fmt(pt.ebn0_db) << ',' << pt.trials << ',' << pt.word_errors << ','
                   << pt.all_bit_word_errors << ',' << fmt(pt.wer) << ',' << fmt(pt.ci_low)
                   << ',' << fmt(pt.ci_high) << ',' << fmt(pt.avg_iterations) << ','
                   << fmt(pt.outage) << "\n";
    return 0;
}

int cmd_outage(const std::vector<double>& snrs, double rate, std::size_t nc,
               std::size_t samples, std::uint64_t seed, const std::string& out) {
    KeyValues kv{{"rate", fmt(rate)},
                 {"nc", std::to_string(nc)},
                 {"samples", std::to_string(samples)},
                 {"seed", std::to_string(seed)}};
    Output o(out);
    write_header(o.stream(), "outage", kv);
    o.stream() << "ebn0_db,p_mc,ci_low,ci_high,p_quadrature\n";
    for (double db : snrs) {
        double gamma = rate * std::pow(10.0, db / 10.0);
        auto est = channel::outage_probability(gamma, rate, nc, samples, seed);
        o.stream() << fmt(db) << ',' << fmt(est.p) << ',' << fmt(est.ci_low) << ','
                   << fmt(est.ci_high) << ',';
        if (nc == 2) o.stream() << fmt(channel::outage_probability_quadrature(gamma, rate));
        o.stream() << "\n";
    }
    return 0;
}

int cmd_de_threshold(const DeSpec& de_spec, double lo, double hi, const std::string& out) {
    auto rep = de::awgn_threshold(de_spec.distribution(), de_spec.is_root(),
                                  de_spec.options(), lo, hi);
    Output o(out);
    o.stream() << "threshold_db=" << fmt(rep.ebn0_db) << "\n"
               << "capacity_db=" << fmt(rep.capacity_ebn0_db) << "\n"
               << "gap_db=" << fmt(rep.gap_db) << "\n"
               << "ratio_absolute=" << fmt(rep.ratio_absolute) << "\n"
               << "ratio_gap=" << fmt(rep.ratio_gap) << "\n";
    return 0;
}

int cmd_de_wer(const DeSpec& de_spec, const std::vector<double>& snrs, std::size_t samples,
               const std::string& sampling, std::uint64_t seed, unsigned workers,
               const std::string& out) {
    auto mode = sampling == "importance" ? de::FadingSampling::ImportanceBox
                                         : de::FadingSampling::RayleighMc;
    KeyValues kv;
    de_spec.describe(kv);
    kv.push_back({"samples", std::to_string(samples)});
    kv.push_back({"sampling", sampling});
    kv.push_back({"seed", std::to_string(seed)});

    Output o(out);
    write_header(o.stream(), "de-wer", kv);
    o.stream() << "ebn0_db,wer,ci_low,ci_high,samples,avg_iterations,outage\n";
    auto dd = de_spec.distribution();
    for (double db : snrs) {
        auto w = de::de_asymptotic_wer(dd, de_spec.is_root(), db, samples, seed,
                                       de_spec.options(), mode, workers);
        double outage =
            channel::outage_probability_quadrature(0.5 * std::pow(10.0, db / 10.0), 0.5);
        o.stream() << fmt(db) << ',' << fmt(w.wer) << ',' << fmt(w.ci_low) << ','
                   << fmt(w.ci_high) << ',' << w.samples << ',' << fmt(w.avg_iterations)
                   << ',' << fmt(outage) << "\n";
    }
    return 0;
}

int cmd_appendix(const std::string& function, double a, double alpha2, double sigma2,
                 double lo, double hi, std::size_t points, const std::string& out) {
    KeyValues kv{{"function", function}};
    if (function == "chi2-pdf" || function == "chi2-cdf") kv.push_back({"a", fmt(a)});
    if (function == "g" || function == "g4") {
        kv.push_back({"alpha2", fmt(alpha2)});
        kv.push_back({"sigma2", fmt(sigma2)});
    }
    kv.push_back({"min", fmt(lo)});
    kv.push_back({"max", fmt(hi)});
    kv.push_back({"points", std::to_string(points)});

    Output o(out);
    write_header(o.stream(), "appendix", kv);
    o.stream() << "x,value\n";
    analysis::Chi2Params p{a, 1.0 - a};
    for (std::size_t i = 0; i < points; ++i) {
        double x = points > 1 ? lo + (hi - lo) * double(i) / double(points - 1) : lo;
        double v;
        if (function == "chi2-pdf") v = analysis::chi2_pdf(x, p);
        else if (function == "chi2-cdf") v = analysis::chi2_cdf(x, p);
        else if (function == "coding-loss")
            v = analysis::chi2_coding_loss_db({x, 1.0 - x}).loss_db;
        else if (function == "g") v = analysis::g_function(x, alpha2, sigma2);
        else v = analysis::g4_parity_bounds(x, alpha2, sigma2).g4;
        o.stream() << fmt(x) << ',' << fmt(v) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"root-LDPC construction, decoding and density-evolution toolbox"};
    app.require_subcommand(1);
    app.fallthrough(); // allow global flags after the subcommand name
    app.set_config("--config", "", "config file (INI; flags override file values)");

    std::string out;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    app.add_option("--out", out, "output path (default: stdout)")->configurable();
    app.add_option("--seed", seed, "master seed for stochastic commands")->configurable();
    app.add_option("--workers", workers, "worker threads (0 = machine default)")
        ->envname("ROOTLDPC_WORKERS")
        ->configurable();

    CodeSpec code;

    auto* c_construct = app.add_subcommand("construct", "build a code, write alist (+meta)");
    code.add_flags(c_construct);

    auto* c_analyze = app.add_subcommand("analyze", "rank / diversity / w* report");
    code.add_flags(c_analyze);
    std::size_t nc = 2;
    std::size_t budget = gf2::kDefaultEnumerationBudget;
    c_analyze->add_option("--nc", nc, "fading block count");
    c_analyze->add_option("--budget", budget, "codeword enumeration budget");

    auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo WER sweep");
    code.add_flags(c_sim);
    channel::ChannelConfig ch;
    std::string fading = "rayleigh", decoder = "bp";
    std::size_t max_iter = 50;
    double llr_clip = channel::kLlrMax;
    std::vector<double> snrs;
    decode::StopRule stop;
    c_sim->add_option("--nc", ch.nc, "fading block count");
    c_sim->add_option("--rate", ch.rate, "code rate for Eb/N0 conversion");
    c_sim->add_option("--fading", fading, "rayleigh | erasure | fixed")
        ->check(CLI::IsMember({"rayleigh", "erasure", "fixed"}));
    c_sim->add_option("--erasure-prob", ch.erasure_prob, "block erasure probability");
    c_sim->add_option("--alpha", ch.fixed_alpha, "fixed fading gains")->delimiter(',');
    c_sim->add_option("--decoder", decoder, "bp | minsum")
        ->check(CLI::IsMember({"bp", "minsum"}));
    c_sim->add_option("--max-iter", max_iter, "decoder iteration cap");
    c_sim->add_option("--llr-clip", llr_clip, "LLR clip magnitude");
    c_sim->add_option("--snrs", snrs, "Eb/N0 sweep values in dB")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--min-errors", stop.min_errors, "stop after this many word errors");
    c_sim->add_option("--max-trials", stop.max_trials, "hard trial cap per point");

    auto* c_outage = app.add_subcommand("outage", "outage probability sweep");
    double orate = 0.5;
    std::size_t onc = 2, osamples = 1000000;
    std::vector<double> osnrs;
    c_outage->add_option("--snrs", osnrs, "Eb/N0 sweep values in dB")
        ->required()
        ->delimiter(',');
    c_outage->add_option("--rate", orate, "code rate");
    c_outage->add_option("--nc", onc, "fading block count");
    c_outage->add_option("--samples", osamples, "Monte-Carlo fading samples");

    DeSpec de_spec;
    auto* c_th = app.add_subcommand("de-threshold", "AWGN decoding threshold by bisection");
    de_spec.add_flags(c_th);
    double lo = 0.05, hi = 3.0;
    c_th->add_option("--lo", lo, "lower bracket, dB");
    c_th->add_option("--hi", hi, "upper bracket, dB");

    auto* c_dewer = app.add_subcommand("de-wer", "asymptotic WER from DE over fading");
    de_spec.add_flags(c_dewer);
    std::vector<double> dsnrs;
    std::size_t dsamples = 10000;
    std::string sampling = "mc";
    c_dewer->add_option("--snrs", dsnrs, "Eb/N0 sweep values in dB")
        ->required()
        ->delimiter(',');
    c_dewer->add_option("--samples", dsamples, "fading samples per point");
    c_dewer->add_option("--sampling", sampling, "mc | importance")
        ->check(CLI::IsMember({"mc", "importance"}));

    auto* c_app = app.add_subcommand("appendix", "closed-form curve evaluators");
    std::string function = "chi2-cdf";
    double aw = 0.5, alpha2 = 1.0, sigma2 = 0.5, xlo = 0.0, xhi = 1.0;
    std::size_t points = 101;
    c_app->add_option("--function", function,
                      "chi2-pdf | chi2-cdf | coding-loss | g | g4")
        ->check(CLI::IsMember({"chi2-pdf", "chi2-cdf", "coding-loss", "g", "g4"}));
    c_app->add_option("--a", aw, "chi-square weight a (b = 1 - a)");
    c_app->add_option("--alpha2", alpha2, "second fading gain (g functions)");
    c_app->add_option("--sigma2", sigma2, "noise variance (g functions)");
    c_app->add_option("--min", xlo, "sweep start");
    c_app->add_option("--max", xhi, "sweep end");
    c_app->add_option("--points", points, "sweep point count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_construct->parsed()) return cmd_construct(code, out);
        if (c_analyze->parsed()) return cmd_analyze(code, nc, budget, out);
        if (c_sim->parsed()) {
            ch.mode = fading == "rayleigh"  ? channel::FadingMode::Rayleigh
                      : fading == "erasure" ? channel::FadingMode::Erasure
                                            : channel::FadingMode::Fixed;
            return cmd_simulate(code, ch, decoder, max_iter, llr_clip, snrs, stop, seed,
                                workers, out);
        }
        if (c_outage->parsed()) return cmd_outage(osnrs, orate, onc, osamples, seed, out);
        if (c_th->parsed()) return cmd_de_threshold(de_spec, lo, hi, out);
        if (c_dewer->parsed())
            return cmd_de_wer(de_spec, dsnrs, dsamples, sampling, seed, workers, out);
        if (c_app->parsed())
            return cmd_appendix(function, aw, alpha2, sigma2, xlo, xhi, points, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
