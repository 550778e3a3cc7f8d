#pragma once

#include "rootldpc/channel.hpp"
#include "rootldpc/construct.hpp"
#include "rootldpc/gf2.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rootldpc::decode {

enum class DecoderVariant { Bp, MinSum, Peeling, MlExhaustive };

struct DecoderConfig {
    DecoderVariant variant = DecoderVariant::Bp;
    std::size_t max_iter = 50;
    double llr_clip = channel::kLlrMax;
    bool early_stop = true;
};

struct DecodeResult {
    std::vector<std::uint8_t> hard_bits;
    bool converged = false;
    std::size_t iterations_used = 0;
    bool info_error = false;
    bool word_error = false;
};

/// Tanner graph adjacency built once from H and shared across decodes.
class TannerGraph {
public:
    explicit TannerGraph(const gf2::BinaryMatrix& h);

    std::size_t num_bits() const { return bit_edges_.size(); }
    std::size_t num_checks() const { return check_edges_.size(); }
    std::size_t num_edges() const { return edge_bit_.size(); }

    std::span<const std::size_t> edges_of_bit(std::size_t b) const { return bit_edges_[b]; }
    std::span<const std::size_t> edges_of_check(std::size_t c) const { return check_edges_[c]; }
    std::size_t bit_of_edge(std::size_t e) const { return edge_bit_[e]; }
    std::size_t check_of_edge(std::size_t e) const { return edge_check_[e]; }

private:
    std::vector<std::vector<std::size_t>> bit_edges_, check_edges_;
    std::vector<std::size_t> edge_bit_, edge_check_;
};

/// tanh-rule checknode output for the given extrinsic inputs.
double check_update_bp(std::span<const double> inputs, double clip = channel::kLlrMax);

/// min-sum checknode output: min magnitude, product of signs.
double check_update_minsum(std::span<const double> inputs);

/// Flooding BP / min-sum. info_bits selects the positions counted in
/// info_error; word_error compares every hard bit against the zero word.
DecodeResult decode(const TannerGraph& graph, std::span<const double> llr,
                    const DecoderConfig& cfg, std::span<const std::size_t> info_bits);

struct PeelingResult {
    std::vector<std::uint8_t> still_erased;
    std::size_t iterations = 0;
    bool all_resolved = false;
};

/// Erasure peeling: repeatedly solve checks with exactly one erased neighbor.
PeelingResult decode_peeling(const TannerGraph& graph, std::span<const std::uint8_t> erased);

/// Exhaustive ML over the full codebook (fading-weighted correlation metric).
DecodeResult decode_ml_exhaustive(const gf2::BinaryMatrix& h, const channel::ReceivedWord& w,
                                  std::span<const std::size_t> info_bits,
                                  std::size_t max_dim = 20);

struct StopRule {
    std::size_t min_errors = 100;
    std::size_t max_trials = 10'000'000;
};

struct WerPoint {
    double ebn0_db = 0.0;
    std::size_t trials = 0;
    std::size_t word_errors = 0; // on information bits
    std::size_t all_bit_word_errors = 0;
    double wer = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    double avg_iterations = 0.0;
    double outage = 0.0; // matching outage value, filled by the caller
};

using WerCurve = std::vector<WerPoint>;

/// Monte-Carlo WER under the all-zero codeword; fresh fading per word,
/// per-trial derived seeds, worker-count-independent stopping.
WerCurve simulate_wer(const gf2::BinaryMatrix& h, std::span<const std::size_t> info_bits,
                      channel::ChannelConfig ch, const DecoderConfig& dec,
                      std::span<const double> ebn0_list, const StopRule& stop,
                      std::uint64_t seed, unsigned workers = 0);

} // namespace rootldpc::decode
