#include "rootldpc/gf2.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rootldpc::gf2 {

BinaryMatrix::BinaryMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), bits_(rows * wpr_, 0) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("BinaryMatrix: dimensions must be positive");
}

BinaryMatrix BinaryMatrix::identity(std::size_t n) {
    BinaryMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

bool BinaryMatrix::get(std::size_t r, std::size_t c) const {
    return (bits_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
}

void BinaryMatrix::set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = bits_[r * wpr_ + c / 64];
    std::uint64_t mask = std::uint64_t(1) << (c % 64);
    if (v) w |= mask; else w &= ~mask;
}

void BinaryMatrix::flip(std::size_t r, std::size_t c) {
    bits_[r * wpr_ + c / 64] ^= std::uint64_t(1) << (c % 64);
}

void BinaryMatrix::add_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = row_data(dst);
    const std::uint64_t* s = row_data(src);
    for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
}

void BinaryMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint64_t* ra = row_data(a);
    std::uint64_t* rb = row_data(b);
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(ra[w], rb[w]);
}

std::size_t BinaryMatrix::row_weight(std::size_t r) const {
    std::size_t n = 0;
    const std::uint64_t* d = row_data(r);
    for (std::size_t w = 0; w < wpr_; ++w) n += std::popcount(d[w]);
    return n;
}

std::size_t BinaryMatrix::col_weight(std::size_t c) const {
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows_; ++r) n += get(r, c);
    return n;
}

BinaryMatrix BinaryMatrix::hconcat(const BinaryMatrix& other) const {
    if (rows_ != other.rows_)
        throw std::invalid_argument("hconcat: row count mismatch");
    BinaryMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) m.set(r, c, true);
        for (std::size_t c = 0; c < other.cols_; ++c)
            if (other.get(r, c)) m.set(r, cols_ + c, true);
    }
    return m;
}

BinaryMatrix BinaryMatrix::vstack(const BinaryMatrix& other) const {
    if (cols_ != other.cols_)
        throw std::invalid_argument("vstack: column count mismatch");
    BinaryMatrix m(rows_ + other.rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t w = 0; w < wpr_; ++w)
            m.row_data(r)[w] = row_data(r)[w];
    for (std::size_t r = 0; r < other.rows_; ++r)
        for (std::size_t w = 0; w < wpr_; ++w)
            m.row_data(rows_ + r)[w] = other.row_data(r)[w];
    return m;
}

BinaryMatrix BinaryMatrix::col_slice(std::size_t c0, std::size_t c1) const {
    if (c0 >= c1 || c1 > cols_)
        throw std::invalid_argument("col_slice: bad column range");
    BinaryMatrix m(rows_, c1 - c0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = c0; c < c1; ++c)
            if (get(r, c)) m.set(r, c - c0, true);
    return m;
}

bool BinaryMatrix::operator==(const BinaryMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
}

std::size_t rank(const BinaryMatrix& m) {
    BinaryMatrix a = m;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < a.cols() && rk < a.rows(); ++c) {
        std::size_t piv = rk;
        while (piv < a.rows() && !a.get(piv, c)) ++piv;
        if (piv == a.rows()) continue;
        a.swap_rows(rk, piv);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != rk && a.get(r, c)) a.add_row(r, rk);
        ++rk;
    }
    return rk;
}

std::vector<Codeword> kernel_basis(const BinaryMatrix& m) {
    const std::size_t n = m.cols();
    BinaryMatrix a = m;
    std::vector<std::size_t> pivot_col;
    std::size_t rk = 0;
    for (std::size_t c = 0; c < n && rk < a.rows(); ++c) {
        std::size_t piv = rk;
        while (piv < a.rows() && !a.get(piv, c)) ++piv;
        if (piv == a.rows()) continue;
        a.swap_rows(rk, piv);
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != rk && a.get(r, c)) a.add_row(r, rk);
        pivot_col.push_back(c);
        ++rk;
    }
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<Codeword> basis;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        Codeword v(n, 0);
        v[c] = 1;
        // back-substitute: pivot variable r takes the value of a(r, c)
        for (std::size_t r = 0; r < rk; ++r)
            if (a.get(r, c)) v[pivot_col[r]] = 1;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<Codeword> enumerate_codewords(const BinaryMatrix& h, std::size_t budget) {
    const std::size_t n = h.cols();
    std::vector<Codeword> basis = kernel_basis(h);
    const std::size_t k = basis.size();
    if (k >= 63 || (std::size_t(1) << k) > budget)
        throw std::length_error("enumerate_codewords: kernel dimension exceeds budget");
    std::vector<Codeword> out;
    out.reserve(std::size_t(1) << k);
    out.emplace_back(n, 0);
    // Gray-code walk: each step flips one basis vector in/out.
    Codeword cur(n, 0);
    for (std::size_t i = 1; i < (std::size_t(1) << k); ++i) {
        std::size_t bit = std::countr_zero(i);
        for (std::size_t j = 0; j < n; ++j) cur[j] ^= basis[bit][j];
        out.push_back(cur);
    }
    return out;
}

bool in_kernel(const BinaryMatrix& h, const Codeword& c) {
    if (c.size() != h.cols())
        throw std::invalid_argument("in_kernel: length mismatch");
    for (std::size_t r = 0; r < h.rows(); ++r) {
        int s = 0;
        for (std::size_t j = 0; j < h.cols(); ++j)
            s ^= (h.get(r, j) & c[j]);
        if (s) return false;
    }
    return true;
}

BlockProfile block_profile(const Codeword& c, std::size_t nc) {
    if (nc == 0 || c.size() % nc != 0)
        throw std::invalid_argument("block_profile: length not divisible by block count");
    const std::size_t l = c.size() / nc;
    BlockProfile p;
    p.nc = nc;
    p.weights.assign(nc, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) ++p.weights[i / l];
    return p;
}

DiversityResult diversity_analysis(const BinaryMatrix& h, std::size_t nc, std::size_t budget) {
    auto words = enumerate_codewords(h, budget);
    DiversityResult res;
    res.d = nc;
    res.wstar = 0;
    res.trivial_code = true;
    std::size_t best_w = std::size_t(-1);
    for (const auto& c : words) {
        bool nonzero = false;
        for (auto b : c) if (b) { nonzero = true; break; }
        if (!nonzero) continue;
        res.trivial_code = false;
        BlockProfile p = block_profile(c, nc);
        std::size_t nz = 0, wmin = std::size_t(-1);
        for (auto w : p.weights) {
            if (w) ++nz;
            wmin = std::min(wmin, w);
        }
        res.d = std::min(res.d, nz);
        best_w = std::min(best_w, wmin);
    }
    res.wstar = res.trivial_code ? 0 : best_w;
    return res;
}

std::size_t singleton_bound(double rate, std::size_t nc) {
    if (rate <= 0.0 || rate > 1.0)
        throw std::invalid_argument("singleton_bound: rate must be in (0, 1]");
    return 1 + static_cast<std::size_t>(std::floor(double(nc) * (1.0 - rate) + 1e-12));
}

} // namespace rootldpc::gf2
