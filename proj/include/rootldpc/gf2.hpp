#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rootldpc::gf2 {

/// Dense bit matrix over GF(2), word-packed row-major.
/// Rows are sequences of 64-bit words; bit (r, c) lives in word c/64 of row r.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols);

    static BinaryMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, bool v);
    void flip(std::size_t r, std::size_t c);

    const std::uint64_t* row_data(std::size_t r) const { return bits_.data() + r * wpr_; }
    std::uint64_t* row_data(std::size_t r) { return bits_.data() + r * wpr_; }

    /// xor row `src` into row `dst`
    void add_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    std::size_t row_weight(std::size_t r) const;
    std::size_t col_weight(std::size_t c) const;

    /// Horizontal concatenation [*this | other]; row counts must match.
    BinaryMatrix hconcat(const BinaryMatrix& other) const;
    /// Vertical stack [*this ; other]; column counts must match.
    BinaryMatrix vstack(const BinaryMatrix& other) const;
    /// Copy of the column range [c0, c1).
    BinaryMatrix col_slice(std::size_t c0, std::size_t c1) const;

    bool operator==(const BinaryMatrix& other) const;

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> bits_;
};

using Codeword = std::vector<std::uint8_t>;

/// Blockwise Hamming weights of a codeword split into nc equal fading blocks.
struct BlockProfile {
    std::size_t nc = 0;
    std::vector<std::size_t> weights;
};

struct DiversityResult {
    std::size_t d = 0;        // block diversity
    std::size_t wstar = 0;    // minimum blockwise Hamming weight
    bool trivial_code = false; // only the zero codeword: d = nc, wstar = "infinity"
};

/// GF(2) rank by Gaussian elimination on a scratch copy.
std::size_t rank(const BinaryMatrix& m);

/// Basis of the right kernel {x : M x = 0}, one codeword per basis vector.
std::vector<Codeword> kernel_basis(const BinaryMatrix& m);

inline constexpr std::size_t kDefaultEnumerationBudget = std::size_t(1) << 24;

/// All 2^(N-rank) codewords of ker(H), zero word included.
/// Throws std::length_error when the kernel is larger than `budget`.
std::vector<Codeword> enumerate_codewords(const BinaryMatrix& h,
                                          std::size_t budget = kDefaultEnumerationBudget);

/// H * c over GF(2); true iff the syndrome is zero.
bool in_kernel(const BinaryMatrix& h, const Codeword& c);

BlockProfile block_profile(const Codeword& c, std::size_t nc);

/// Exhaustive block diversity d and minimum blockwise weight w* over all
/// nonzero codewords of ker(H).
DiversityResult diversity_analysis(const BinaryMatrix& h, std::size_t nc,
                                   std::size_t budget = kDefaultEnumerationBudget);

/// Blockwise Singleton bound 1 + floor(nc (1 - R)).
std::size_t singleton_bound(double rate, std::size_t nc);

// alist sparse-matrix interchange format (1-based indices).
void write_alist(std::ostream& os, const BinaryMatrix& m);
void write_alist_file(const std::string& path, const BinaryMatrix& m);
BinaryMatrix read_alist(std::istream& is);
BinaryMatrix read_alist_file(const std::string& path);

} // namespace rootldpc::gf2
