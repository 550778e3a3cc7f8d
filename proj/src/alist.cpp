#include "rootldpc/gf2.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rootldpc::gf2 {

// alist layout (MacKay): N M / dmax_col dmax_row / per-column degrees /
// per-row degrees / per-column 1-based row indices (zero padded to dmax) /
// per-row 1-based column indices.
void write_alist(std::ostream& os, const BinaryMatrix& m) {
    const std::size_t M = m.rows(), N = m.cols();
    std::vector<std::vector<std::size_t>> col_idx(N), row_idx(M);
    for (std::size_t r = 0; r < M; ++r)
        for (std::size_t c = 0; c < N; ++c)
            if (m.get(r, c)) {
                col_idx[c].push_back(r + 1);
                row_idx[r].push_back(c + 1);
            }
    std::size_t dc = 0, dr = 0;
    for (const auto& v : col_idx) dc = std::max(dc, v.size());
    for (const auto& v : row_idx) dr = std::max(dr, v.size());

    os << N << " " << M << "\n" << dc << " " << dr << "\n";
    for (std::size_t c = 0; c < N; ++c) os << col_idx[c].size() << (c + 1 < N ? " " : "\n");
    for (std::size_t r = 0; r < M; ++r) os << row_idx[r].size() << (r + 1 < M ? " " : "\n");
    for (const auto& v : col_idx) {
        for (std::size_t i = 0; i < dc; ++i) os << (i < v.size() ? v[i] : 0) << (i + 1 < dc ? " " : "");
        os << "\n";
    }
    for (const auto& v : row_idx) {
        for (std::size_t i = 0; i < dr; ++i) os << (i < v.size() ? v[i] : 0) << (i + 1 < dr ? " " : "");
        os << "\n";
    }
}

void write_alist_file(const std::string& path, const BinaryMatrix& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_alist_file: cannot open " + path);
    write_alist(os, m);
}

BinaryMatrix read_alist(std::istream& is) {
    std::size_t N, M, dc, dr;
    if (!(is >> N >> M >> dc >> dr))
        throw std::runtime_error("read_alist: bad header");
    std::vector<std::size_t> cdeg(N), rdeg(M);
    for (auto& d : cdeg) is >> d;
    for (auto& d : rdeg) is >> d;
    if (!is) throw std::runtime_error("read_alist: bad degree lists");

    BinaryMatrix m(M, N);
    for (std::size_t c = 0; c < N; ++c)
        for (std::size_t i = 0; i < dc; ++i) {
            std::size_t r;
            if (!(is >> r)) throw std::runtime_error("read_alist: truncated column list");
            if (r == 0) continue; // padding
            if (r > M) throw std::runtime_error("read_alist: row index out of range");
            m.set(r - 1, c, true);
        }
    // row lists are redundant with the column lists; consume and cross-check degrees
    for (std::size_t r = 0; r < M; ++r)
        for (std::size_t i = 0; i < dr; ++i) {
            std::size_t c;
            if (!(is >> c)) throw std::runtime_error("read_alist: truncated row list");
            if (c > N) throw std::runtime_error("read_alist: column index out of range");
        }
    for (std::size_t c = 0; c < N; ++c)
        if (m.col_weight(c) != cdeg[c])
            throw std::runtime_error("read_alist: column degree mismatch");
    for (std::size_t r = 0; r < M; ++r)
        if (m.row_weight(r) != rdeg[r])
            throw std::runtime_error("read_alist: row degree mismatch");
    return m;
}

BinaryMatrix read_alist_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_alist_file: cannot open " + path);
    return read_alist(is);
}

} // namespace rootldpc::gf2
