#pragma once

#include "rootldpc/construct.hpp"

#include <cstdint>
#include <vector>

namespace rootldpc::de {

/// Symmetric quantization grid for LLR densities: odd bin count, centers
/// k * step for k in [-half_bins, half_bins].
struct LlrGrid {
    double step = 0.05;
    double half_range = 30.0;

    int half_bins() const { return static_cast<int>(half_range / step + 0.5); }
    int bins() const { return 2 * half_bins() + 1; }
    double value(int i) const { return (i - half_bins()) * step; }
    int nearest_bin(double v) const;
    bool operator==(const LlrGrid& o) const {
        return step == o.step && half_range == o.half_range;
    }
};

/// Quantized LLR-message density with explicit point masses at +-infinity.
struct LlrDensity {
    LlrGrid grid;
    std::vector<double> mass;
    double p_inf = 0.0, m_inf = 0.0;

    explicit LlrDensity(const LlrGrid& g) : grid(g), mass(g.bins(), 0.0) {}

    static LlrDensity delta(const LlrGrid& g, double v);
    static LlrDensity delta_plus_inf(const LlrGrid& g);
    static LlrDensity delta_minus_inf(const LlrGrid& g);

    double total_mass() const;
    double mean() const;     // finite part only
    double variance() const; // finite part only
    void scale(double s);
    void accumulate(const LlrDensity& other, double weight);
    /// Rescale to unit mass. Rounding deficits otherwise compound through
    /// the multilinear updates and masquerade as convergence.
    void normalize();
};

/// Bin-integrated density of the channel LLR (2/sigma^2)(alpha^2 + alpha z):
/// Gaussian with mean 2 alpha^2 / sigma^2 and variance 4 alpha^2 / sigma^2.
/// alpha = 0 gives a unit mass at the zero bin; the negative "infinite gain"
/// sentinel gives a unit mass at +infinity.
LlrDensity channel_density(double alpha, double sigma2, const LlrGrid& grid);

/// Variable-node convolution (the "+" operator on messages). Out-of-range
/// mass accrues to the +-infinity masses; opposite infinities cancel to the
/// zero bin.
LlrDensity conv_var(const LlrDensity& p, const LlrDensity& q);

/// Check-node R-convolution through Y = 2 atanh(tanh(X1/2) tanh(X2/2)),
/// pairwise bin mapping with nearest-bin mass assignment.
LlrDensity conv_check(const LlrDensity& p, const LlrDensity& q);

/// Probability of a wrong hard decision: mass below zero, half the zero
/// bin, and the -infinity mass.
double error_prob(const LlrDensity& p);

// Degree-distribution mixtures. Tilde variants implement lambda(x)/x and
// rho(x)/x: unchanged coefficients, powers reduced by one.
LlrDensity mix_lambda(const LlrDensity& p, const construct::DegreeDistribution& dd);
LlrDensity mix_rho(const LlrDensity& p, const construct::DegreeDistribution& dd);
LlrDensity mix_lambda_tilde(const LlrDensity& p, const construct::DegreeDistribution& dd);
LlrDensity mix_rho_tilde(const LlrDensity& p, const construct::DegreeDistribution& dd);

/// The six multi-edge densities of a root ensemble.
struct DeState {
    LlrDensity q1, q2; // info -> own-block rootcheck
    LlrDensity f1, f2; // info -> opposite-block check
    LlrDensity g1, g2; // parity -> opposite-block check (aliases q)
    std::size_t iteration = 0;
};

DeState de_init(const LlrDensity& mu1, const LlrDensity& mu2);

/// One flooding iteration of the six-density recursion.
DeState de_step_root(const DeState& state, const LlrDensity& mu1, const LlrDensity& mu2,
                     const construct::DegreeDistribution& dd);

/// A-posteriori density of an information bit on the given block (1 or 2).
LlrDensity info_app_density(const DeState& state, const LlrDensity& mu1,
                            const LlrDensity& mu2, const construct::DegreeDistribution& dd,
                            int block);

struct DeOptions {
    LlrGrid grid;
    std::size_t max_iter = 500;
    double target = 1e-7;   // success when info-class error drops below this
    double stall = 1e-12;   // stop when per-iteration improvement is smaller
};

struct DeRunResult {
    bool decodable = false;
    std::size_t iterations = 0;
    double final_error = 1.0;
};

/// Fixed-fading DE run: root ensemble (six densities) or classical random
/// ensemble with the mixture channel (1/2 mu1 + 1/2 mu2).
DeRunResult run_de(const construct::DegreeDistribution& dd, bool root,
                   double alpha1, double alpha2, double sigma2, const DeOptions& opt);

struct ThresholdReport {
    double ebn0_db = 0.0;          // absolute decoding threshold
    double capacity_ebn0_db = 0.0; // rate-1/2 BPSK limit
    double gap_db = 0.0;
    double ratio_absolute = 0.0;   // alpha_th/alpha_0 from the absolute threshold
    double ratio_gap = 0.0;        // alpha_th/alpha_0 from the gap
};

/// AWGN (alpha1 = alpha2 = 1) decoding threshold by bisection on Eb/N0.
ThresholdReport awgn_threshold(const construct::DegreeDistribution& dd, bool root,
                               const DeOptions& opt, double lo_db = 0.05, double hi_db = 3.0);

/// alpha_th/alpha_0 = sqrt(Delta) for a rate-1/2 threshold given in dB.
double threshold_ratio(double threshold_ebn0_db);

enum class FadingSampling {
    RayleighMc,    // plain Monte Carlo over the Rayleigh density
    ImportanceBox, // uniform proposal over a box covering the failure region
};

struct AsymptoticWer {
    double wer = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    std::size_t samples = 0;
    double avg_iterations = 0.0;
};

/// DE-based asymptotic WER: sample fading pairs, run DE at each, classify
/// decodable vs outage (info-class a-posteriori for root ensembles).
AsymptoticWer de_asymptotic_wer(const construct::DegreeDistribution& dd, bool root,
                                double ebn0_db, std::size_t fading_samples,
                                std::uint64_t seed, const DeOptions& opt,
                                FadingSampling sampling = FadingSampling::RayleighMc,
                                unsigned workers = 0);

} // namespace rootldpc::de
