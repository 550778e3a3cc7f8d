#pragma once

#include "rootldpc/gf2.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rootldpc::construct {

/// Edge-perspective degree distribution pair (lambda, rho).
struct DegreeDistribution {
    // (degree, fraction), degrees >= 2, fractions summing to 1
    std::vector<std::pair<int, double>> lambda;
    std::vector<std::pair<int, double>> rho;

    static DegreeDistribution regular(int dv, int dc);
    /// The irregular rate-1/2 pair used for the multi-edge threshold study.
    static DegreeDistribution irregular_half_rate();

    void validate() const; // throws std::invalid_argument on malformed input
    double design_rate() const;
    int max_lambda_degree() const;
    int max_rho_degree() const;
};

enum class ColumnClass : std::uint8_t { I1, P1, I2, P2 };
enum class CheckClass : std::uint8_t { C1, C2 };

/// Parity-check matrix with per-column class labels and fading-block map.
/// Column layout: [1i | 1p | 2i | 2p], N/4 columns each; rows [1c | 2c].
struct RootLdpcCode {
    gf2::BinaryMatrix h;
    std::vector<ColumnClass> column_class;
    std::vector<CheckClass> check_class;
    std::vector<std::size_t> block_of_column; // 1-based fading block index
    DegreeDistribution realized_dd;           // quantized distribution actually built

    std::size_t n() const { return h.cols(); }
    std::vector<std::size_t> info_columns() const; // classes 1i and 2i
    bool is_info_column(std::size_t c) const {
        return column_class[c] == ColumnClass::I1 || column_class[c] == ColumnClass::I2;
    }
};

/// Uniformly random (dv, dc)-regular parity-check matrix, multi-edge free.
gf2::BinaryMatrix random_regular_ldpc(std::size_t n, int dv, int dc, std::uint64_t seed);

/// Full-rank criterion on every union of nc-1 column blocks (nc = 2 or 3).
bool is_ml_full_diversity(const gf2::BinaryMatrix& h, std::size_t nc);

/// Rate 1/2 - 1/N construction with minimum blockwise weight 2:
/// top block [A | I], bottom row all-ones on the left half.
gf2::BinaryMatrix build_wstar2(std::size_t n);

/// Full-diversity code with w* >= 3, N = 2(2^m - 1): a rate-1/2 base
/// stacked with Hamming parity rows on each half.
gf2::BinaryMatrix build_wstar3(int m);

/// Regular (3,6) root-LDPC: identity rootcheck blocks, zero blocks, and
/// random weight-2 / weight-3 sparse submatrices.
RootLdpcCode build_root_regular(std::size_t n, std::uint64_t seed);

/// Irregular root-LDPC by socket matching of (lambda, rho) on non-root edges.
RootLdpcCode build_root_irregular(std::size_t n, const DegreeDistribution& dd,
                                  std::uint64_t seed);

/// Largest-remainder apportionment of edge fractions to integer socket counts.
std::vector<std::pair<int, long long>>
apportion_sockets(const std::vector<std::pair<int, double>>& fractions, long long total);

/// Multi-edge fractions (f_e, g_e): share of non-root-check edges coming
/// from information bits vs parity bits.
std::pair<double, double> multiedge_fraction(const DegreeDistribution& dd);

/// Sidecar metadata (classes and block map) next to an alist file.
void save_code(const RootLdpcCode& code, const std::string& alist_path,
               const std::string& meta_path);
RootLdpcCode load_code(const std::string& alist_path, const std::string& meta_path);

} // namespace rootldpc::construct
