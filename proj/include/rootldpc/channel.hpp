#pragma once

#include "rootldpc/gf2.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace rootldpc::channel {

inline constexpr double kLlrMax = 50.0;

enum class FadingMode { Rayleigh, Erasure, Fixed };

struct ChannelConfig {
    std::size_t nc = 2;
    double rate = 0.5;
    double ebn0_db = 0.0;
    FadingMode mode = FadingMode::Rayleigh;
    double erasure_prob = 0.0;        // erasure mode only
    std::vector<double> fixed_alpha;  // fixed mode only
    double es = 1.0;

    double snr_per_symbol() const;  // gamma = R * Eb/N0, linear
    double sigma2() const;          // N0/2 with N0 = Es / gamma
};

/// Per-block channel gains; in erasure mode an "infinite" gain is the
/// explicit sentinel below rather than a large float.
struct FadingRealization {
    std::vector<double> alpha;
    static constexpr double kInf = -1.0; // sentinel: perfect (infinite-gain) block
    bool is_erased(std::size_t j) const { return alpha[j] == 0.0; }
    bool is_perfect(std::size_t j) const { return alpha[j] == kInf; }
};

struct ReceivedWord {
    std::vector<double> y;
    FadingRealization fading;
    double sigma2 = 0.0;
    double es = 1.0;
};

FadingRealization sample_fading(const ChannelConfig& cfg, std::mt19937_64& rng);

/// BPSK map (0 -> +sqrt(Es), 1 -> -sqrt(Es)) through y = alpha x + z.
ReceivedWord transmit(const gf2::Codeword& c, const FadingRealization& f,
                      double sigma2, double es, std::mt19937_64& rng);

/// Channel LLRs 2 alpha y / sigma^2, clipped to +-kLlrMax; erased blocks
/// give exactly 0, perfect blocks +-kLlrMax.
std::vector<double> channel_llr(const ReceivedWord& w);

/// Binary-input AWGN mutual information at SNR-per-symbol s (bits/use),
/// 64-node Gauss-Hermite quadrature.
double bpsk_awgn_mi(double s);

/// Eb/N0 (linear) at which rate-R BPSK capacity is reached: I(R x) = R.
double bpsk_capacity_ebn0(double rate);

double instantaneous_mi(double gamma, const FadingRealization& f);

struct OutageEstimate {
    double p = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    std::size_t samples = 0;
};

/// Monte-Carlo outage probability over Rayleigh fading with a Wilson CI.
OutageEstimate outage_probability(double gamma, double rate, std::size_t nc,
                                  std::size_t samples, std::uint64_t seed);

/// Deterministic 2-D quadrature oracle over the exponential fading density
/// (nc = 2 only).
double outage_probability_quadrature(double gamma, double rate);

/// Wilson score interval for k successes out of n at confidence z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 2.576);

} // namespace rootldpc::channel
