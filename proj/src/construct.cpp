#include "rootldpc/construct.hpp"
#include "rootldpc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace rootldpc::construct {

using gf2::BinaryMatrix;

DegreeDistribution DegreeDistribution::regular(int dv, int dc) {
    DegreeDistribution dd;
    dd.lambda = {{dv, 1.0}};
    dd.rho = {{dc, 1.0}};
    dd.validate();
    return dd;
}

DegreeDistribution DegreeDistribution::irregular_half_rate() {
    DegreeDistribution dd;
    dd.lambda = {{2, 0.24426}, {3, 0.25907}, {4, 0.01054}, {5, 0.05510},
                 {8, 0.01455}, {10, 0.01275}, {12, 0.40373}};
    dd.rho = {{7, 0.25475}, {8, 0.73438}, {9, 0.01087}};
    dd.validate();
    return dd;
}

void DegreeDistribution::validate() const {
    if (lambda.empty() || rho.empty())
        throw std::invalid_argument("DegreeDistribution: empty polynomial");
    double sl = 0, sr = 0;
    for (auto [i, f] : lambda) {
        if (i < 2) throw std::invalid_argument("DegreeDistribution: lambda degree < 2");
        if (f < 0 || f > 1) throw std::invalid_argument("DegreeDistribution: fraction out of [0,1]");
        sl += f;
    }
    for (auto [j, f] : rho) {
        if (j < 2) throw std::invalid_argument("DegreeDistribution: rho degree < 2");
        if (f < 0 || f > 1) throw std::invalid_argument("DegreeDistribution: fraction out of [0,1]");
        sr += f;
    }
    if (std::abs(sl - 1.0) > 1e-12 || std::abs(sr - 1.0) > 1e-12)
        throw std::invalid_argument("DegreeDistribution: fractions must sum to 1");
}

double DegreeDistribution::design_rate() const {
    double li = 0, rj = 0;
    for (auto [i, f] : lambda) li += f / i;
    for (auto [j, f] : rho) rj += f / j;
    return 1.0 - rj / li;
}

int DegreeDistribution::max_lambda_degree() const {
    int m = 0;
    for (auto [i, f] : lambda) m = std::max(m, i);
    return m;
}

int DegreeDistribution::max_rho_degree() const {
    int m = 0;
    for (auto [j, f] : rho) m = std::max(m, j);
    return m;
}

std::vector<std::size_t> RootLdpcCode::info_columns() const {
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < column_class.size(); ++c)
        if (is_info_column(c)) idx.push_back(c);
    return idx;
}

namespace {

// Pair up bit sockets and check sockets, then remove duplicate edges by
// random swaps. Restarts from a fresh shuffle if swapping stalls.
std::vector<std::pair<std::size_t, std::size_t>>
match_sockets(const std::vector<std::size_t>& bit_sockets,
              const std::vector<std::size_t>& check_sockets,
              std::mt19937_64& rng) {
    if (bit_sockets.size() != check_sockets.size())
        throw std::invalid_argument("match_sockets: socket count mismatch");
    const std::size_t e = bit_sockets.size();
    std::vector<std::size_t> perm(e);
    for (int restart = 0; restart < 64; ++restart) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        bool ok = true;
        for (int pass = 0; pass < 200; ++pass) {
            std::set<std::pair<std::size_t, std::size_t>> seen;
            std::vector<std::size_t> dup;
            for (std::size_t k = 0; k < e; ++k) {
                auto edge = std::make_pair(bit_sockets[k], check_sockets[perm[k]]);
                if (!seen.insert(edge).second) dup.push_back(k);
            }
            if (dup.empty()) break;
            for (std::size_t k : dup) {
                std::size_t other = rng() % e;
                std::swap(perm[k], perm[other]);
            }
            if (pass == 199) ok = false;
        }
        if (ok) {
            std::vector<std::pair<std::size_t, std::size_t>> edges(e);
            for (std::size_t k = 0; k < e; ++k)
                edges[k] = {bit_sockets[k], check_sockets[perm[k]]};
            return edges;
        }
    }
    throw std::runtime_error("match_sockets: could not avoid repeated edges");
}

// Random square 0/1 matrix with exactly `w` ones per row and per column,
// built as a sum of w disjoint random permutation matrices.
BinaryMatrix random_weighted_square(std::size_t n, int w, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        BinaryMatrix m(n, n);
        std::vector<std::size_t> perm(n);
        bool ok = true;
        for (int k = 0; k < w && ok; ++k) {
            int tries = 0;
            for (;;) {
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                bool clash = false;
                for (std::size_t i = 0; i < n; ++i)
                    if (m.get(i, perm[i])) { clash = true; break; }
                if (!clash) break;
                if (++tries > 500) { ok = false; break; }
            }
            if (!ok) break;
            for (std::size_t i = 0; i < n; ++i) m.set(i, perm[i], true);
        }
        if (ok) return m;
    }
    throw std::runtime_error("random_weighted_square: rejection sampling failed");
}

bool has_four_cycle(const BinaryMatrix& m) {
    // two rows sharing two columns = a length-4 cycle; enumerate the
    // column pairs of every row and look for duplicates
    std::vector<std::uint64_t> pairs;
    std::vector<std::uint32_t> cols;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        cols.clear();
        for (std::size_t w = 0; w < m.words_per_row(); ++w) {
            std::uint64_t bits = m.row_data(r)[w];
            while (bits) {
                cols.push_back(std::uint32_t(w * 64 + std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
        for (std::size_t i = 0; i < cols.size(); ++i)
            for (std::size_t j = i + 1; j < cols.size(); ++j)
                pairs.push_back((std::uint64_t(cols[i]) << 32) | cols[j]);
    }
    std::sort(pairs.begin(), pairs.end());
    return std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end();
}

} // namespace

gf2::BinaryMatrix random_regular_ldpc(std::size_t n, int dv, int dc, std::uint64_t seed) {
    if (dv < 1 || dc < 1 || n == 0 || (n * std::size_t(dv)) % dc != 0)
        throw std::invalid_argument("random_regular_ldpc: infeasible parameters");
    const std::size_t m = n * dv / dc;
    std::mt19937_64 rng(splitmix64(seed));

    std::vector<std::size_t> bit_sockets, check_sockets;
    for (std::size_t b = 0; b < n; ++b)
        for (int k = 0; k < dv; ++k) bit_sockets.push_back(b);
    for (std::size_t c = 0; c < m; ++c)
        for (int k = 0; k < dc; ++k) check_sockets.push_back(c);

    for (int attempt = 0;; ++attempt) {
        auto edges = match_sockets(bit_sockets, check_sockets, rng);
        BinaryMatrix h(m, n);
        for (auto [b, c] : edges) h.set(c, b, true);
        if (!has_four_cycle(h) || attempt >= 2000) {
            if (attempt >= 2000)
                std::cerr << "random_regular_ldpc: accepting matrix with 4-cycles\n";
            return h;
        }
    }
}

bool is_ml_full_diversity(const gf2::BinaryMatrix& h, std::size_t nc) {
    if (nc != 2 && nc != 3)
        throw std::invalid_argument("is_ml_full_diversity: nc must be 2 or 3");
    const std::size_t n = h.cols();
    if (n % nc != 0)
        throw std::invalid_argument("is_ml_full_diversity: N not divisible by nc");
    const std::size_t l = n / nc;
    // every union of nc-1 column blocks must have full column rank
    for (std::size_t skip = 0; skip < nc; ++skip) {
        std::optional<BinaryMatrix> u;
        for (std::size_t b = 0; b < nc; ++b) {
            if (b == skip) continue;
            BinaryMatrix blk = h.col_slice(b * l, (b + 1) * l);
            u = u ? u->hconcat(blk) : blk;
        }
        if (gf2::rank(*u) != (nc - 1) * l) return false;
    }
    return true;
}

gf2::BinaryMatrix build_wstar2(std::size_t n) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("build_wstar2: N must be even and >= 8");
    const std::size_t half = n / 2;
    BinaryMatrix h(half + 1, n);
    // top block [A | I]: A's first column zero, column j >= 2 is e_{j-1} + e_j
    for (std::size_t j = 1; j < half; ++j) {
        h.set(j - 1, j, true);
        h.set(j, j, true);
    }
    for (std::size_t i = 0; i < half; ++i) h.set(i, half + i, true);
    // bottom row: all-ones on the left half
    for (std::size_t j = 0; j < half; ++j) h.set(half, j, true);
    return h;
}

gf2::BinaryMatrix build_wstar3(int m) {
    if (m < 3) throw std::invalid_argument("build_wstar3: m must be >= 3");
    const std::size_t half = (std::size_t(1) << m) - 1;
    const std::size_t n = 2 * half;

    BinaryMatrix hamming(std::size_t(m), half);
    for (std::size_t c = 0; c < half; ++c)
        for (int b = 0; b < m; ++b)
            if ((c + 1) >> b & 1) hamming.set(b, c, true);

    BinaryMatrix zero_left(std::size_t(m), half), zero_right(std::size_t(m), half);
    BinaryMatrix ident = BinaryMatrix::identity(half);

    // pick a full-rank H1 making all half + 2m rows independent
    for (std::uint64_t seed = 1; seed < 4096; ++seed) {
        std::mt19937_64 rng(splitmix64(seed));
        BinaryMatrix h1(half, half);
        for (std::size_t r = 0; r < half; ++r)
            for (std::size_t c = 0; c < half; ++c)
                if (rng() & 1) h1.set(r, c, true);
        if (gf2::rank(h1) != half) continue;
        BinaryMatrix h = h1.hconcat(ident)
                             .vstack(hamming.hconcat(zero_right))
                             .vstack(zero_left.hconcat(hamming));
        if (gf2::rank(h) == half + 2 * std::size_t(m)) return h;
    }
    throw std::runtime_error("build_wstar3: no suitable base matrix found");
}

RootLdpcCode build_root_regular(std::size_t n, std::uint64_t seed) {
    if (n % 4 != 0 || n == 0)
        throw std::invalid_argument("build_root_regular: N must be divisible by 4");
    const std::size_t q = n / 4;
    std::mt19937_64 rng(splitmix64(seed));

    // parity submatrices must be invertible: otherwise a nonzero codeword
    // can live entirely inside one fading block (and encoding fails)
    auto invertible_square = [&](int w) {
        for (int tries = 0; tries < 200; ++tries) {
            BinaryMatrix m = random_weighted_square(q, w, rng);
            if (gf2::rank(m) == q) return m;
        }
        throw std::runtime_error("build_root_regular: no invertible parity block found");
    };

    BinaryMatrix h1i(1, 1), h1p(1, 1), h2i(1, 1), h2p(1, 1);
    for (int attempt = 0;; ++attempt) {
        h1i = random_weighted_square(q, 2, rng);
        h2i = random_weighted_square(q, 2, rng);
        h1p = invertible_square(3);
        h2p = invertible_square(3);
        BinaryMatrix row1c = BinaryMatrix::identity(q)
                                 .hconcat(BinaryMatrix(q, q))
                                 .hconcat(h2i)
                                 .hconcat(h2p);
        BinaryMatrix row2c = h1i.hconcat(h1p)
                                 .hconcat(BinaryMatrix::identity(q))
                                 .hconcat(BinaryMatrix(q, q));
        BinaryMatrix h = row1c.vstack(row2c);
        if (has_four_cycle(h) && attempt < 20) continue;
        if (attempt >= 20)
            std::cerr << "build_root_regular: accepting matrix with 4-cycles\n";

        RootLdpcCode code;
        code.h = std::move(h);
        code.column_class.resize(n);
        code.block_of_column.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            code.column_class[c] = c < q       ? ColumnClass::I1
                                   : c < 2 * q ? ColumnClass::P1
                                   : c < 3 * q ? ColumnClass::I2
                                               : ColumnClass::P2;
            code.block_of_column[c] = c < 2 * q ? 1 : 2;
        }
        code.check_class.resize(2 * q);
        for (std::size_t r = 0; r < 2 * q; ++r)
            code.check_class[r] = r < q ? CheckClass::C1 : CheckClass::C2;
        code.realized_dd = DegreeDistribution::regular(3, 6);
        return code;
    }
}

std::vector<std::pair<int, long long>>
apportion_sockets(const std::vector<std::pair<int, double>>& fractions, long long total) {
    std::vector<std::pair<int, long long>> out;
    std::vector<double> rem;
    long long assigned = 0;
    for (auto [deg, f] : fractions) {
        double exact = f * double(total);
        long long base = static_cast<long long>(std::floor(exact));
        out.push_back({deg, base});
        rem.push_back(exact - double(base));
        assigned += base;
    }
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned)
        ++out[order[k % order.size()]].second;
    return out;
}

namespace {

// node counts per degree from the edge-perspective polynomial
std::vector<std::pair<int, long long>>
apportion_nodes(const std::vector<std::pair<int, double>>& poly, long long nodes) {
    double z = 0;
    for (auto [d, f] : poly) z += f / d;
    std::vector<std::pair<int, double>> node_frac;
    for (auto [d, f] : poly) node_frac.push_back({d, (f / d) / z});
    return apportion_sockets(node_frac, nodes);
}

std::vector<int> expand_degrees(const std::vector<std::pair<int, long long>>& counts) {
    std::vector<int> deg;
    for (auto [d, c] : counts)
        for (long long k = 0; k < c; ++k) deg.push_back(d);
    return deg;
}

} // namespace

RootLdpcCode build_root_irregular(std::size_t n, const DegreeDistribution& dd,
                                  std::uint64_t seed) {
    dd.validate();
    if (n % 4 != 0 || n == 0)
        throw std::invalid_argument("build_root_irregular: N must be divisible by 4");
    if (std::abs(dd.design_rate() - 0.5) > 0.02)
        throw std::invalid_argument("build_root_irregular: distribution is not rate 1/2");
    const std::size_t q = n / 4;
    std::mt19937_64 rng(splitmix64(seed));

    // Per-class node degrees. Info bits: 1 rootcheck edge + (i-1) edges into
    // opposite-class checks. Parity bits: all i edges into opposite checks.
    // Checks: 1 identity (root) edge + (j-1) sockets toward the other block.
    std::vector<int> info_deg = expand_degrees(apportion_nodes(dd.lambda, (long long)q));
    std::vector<int> par_deg = info_deg;
    std::vector<int> chk_deg = expand_degrees(apportion_nodes(dd.rho, (long long)q));

    long long s_bits = 0, s_chk = 0;
    for (int d : info_deg) s_bits += d - 1;
    for (int d : par_deg) s_bits += d;
    for (int d : chk_deg) s_chk += d - 1;
    // absorb rounding mismatch in individual check degrees
    for (std::size_t k = 0; s_chk < s_bits; k = (k + 1) % chk_deg.size(), ++s_chk)
        ++chk_deg[k];
    for (std::size_t k = 0; s_chk > s_bits; k = (k + 1) % chk_deg.size()) {
        if (chk_deg[k] > 3) { --chk_deg[k]; --s_chk; }
    }
    if (s_chk != s_bits)
        throw std::invalid_argument("build_root_irregular: unrealizable distribution");

    // Build one side: bits of classes {xi, xp} on block x against checks of
    // the opposite class. Column offsets: 1i:0, 1p:q, 2i:2q, 2p:3q.
    // The parity wiring must be invertible (same reason as the regular case),
    // so each side is redrawn until its parity square has full rank.
    BinaryMatrix h(2 * q, n);
    for (std::size_t r = 0; r < q; ++r) h.set(r, r, true);          // 1c x 1i identity
    for (std::size_t r = 0; r < q; ++r) h.set(q + r, 2 * q + r, true); // 2c x 2i identity

    auto wire_side = [&](std::size_t info_off, std::size_t par_off, std::size_t chk_row_off) {
        std::vector<std::size_t> bit_sockets, chk_sockets;
        for (std::size_t b = 0; b < q; ++b)
            for (int k = 0; k < info_deg[b] - 1; ++k) bit_sockets.push_back(info_off + b);
        for (std::size_t b = 0; b < q; ++b)
            for (int k = 0; k < par_deg[b]; ++k) bit_sockets.push_back(par_off + b);
        for (std::size_t c = 0; c < q; ++c)
            for (int k = 0; k < chk_deg[c] - 1; ++k) chk_sockets.push_back(c);
        for (int tries = 0; tries < 200; ++tries) {
            auto edges = match_sockets(bit_sockets, chk_sockets, rng);
            BinaryMatrix parity(q, q);
            for (auto [b, c] : edges)
                if (b >= par_off && b < par_off + q) parity.set(c, b - par_off, true);
            if (gf2::rank(parity) != q) continue;
            for (auto [b, c] : edges) h.set(chk_row_off + c, b, true);
            return;
        }
        throw std::runtime_error("build_root_irregular: no invertible parity wiring found");
    };
    wire_side(0, q, q);          // block-1 bits -> 2c checks
    wire_side(2 * q, 3 * q, 0);  // block-2 bits -> 1c checks

    RootLdpcCode code;
    code.h = std::move(h);
    code.column_class.resize(n);
    code.block_of_column.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        code.column_class[c] = c < q       ? ColumnClass::I1
                               : c < 2 * q ? ColumnClass::P1
                               : c < 3 * q ? ColumnClass::I2
                                           : ColumnClass::P2;
        code.block_of_column[c] = c < 2 * q ? 1 : 2;
    }
    code.check_class.resize(2 * q);
    for (std::size_t r = 0; r < 2 * q; ++r)
        code.check_class[r] = r < q ? CheckClass::C1 : CheckClass::C2;

    // realized distributions from the degrees actually assigned
    std::map<int, long long> ledges, redges;
    for (int d : info_deg) ledges[d] += d;
    for (int d : par_deg) ledges[d] += d;
    for (int d : chk_deg) redges[d] += d;
    long long le = 0, re = 0;
    for (auto [d, e] : ledges) le += e;
    for (auto [d, e] : redges) re += e;
    for (auto [d, e] : ledges) code.realized_dd.lambda.push_back({d, double(e) / double(le)});
    for (auto [d, e] : redges) code.realized_dd.rho.push_back({d, double(e) / double(re)});
    return code;
}

std::pair<double, double> multiedge_fraction(const DegreeDistribution& dd) {
    double a = 0, b = 0;
    for (auto [i, f] : dd.lambda) {
        if (i < 2) throw std::invalid_argument("multiedge_fraction: degree-1 variable node");
        a += f / i;
        b += f / (i - 1);
    }
    double fe = a / (a + b);
    return {fe, 1.0 - fe};
}

void save_code(const RootLdpcCode& code, const std::string& alist_path,
               const std::string& meta_path) {
    gf2::write_alist_file(alist_path, code.h);
    nlohmann::json j;
    static const char* col_names[] = {"1i", "1p", "2i", "2p"};
    static const char* chk_names[] = {"1c", "2c"};
    for (auto c : code.column_class) j["column_class"].push_back(col_names[int(c)]);
    for (auto c : code.check_class) j["check_class"].push_back(chk_names[int(c)]);
    j["block_of_column"] = code.block_of_column;
    std::ofstream os(meta_path);
    if (!os) throw std::runtime_error("save_code: cannot open " + meta_path);
    os << j.dump(1) << "\n";
}

RootLdpcCode load_code(const std::string& alist_path, const std::string& meta_path) {
    RootLdpcCode code;
    code.h = gf2::read_alist_file(alist_path);
    std::ifstream is(meta_path);
    if (!is) throw std::runtime_error("load_code: cannot open " + meta_path);
    nlohmann::json j;
    is >> j;
    for (const std::string s : j.at("column_class")) {
        if (s == "1i") code.column_class.push_back(ColumnClass::I1);
        else if (s == "1p") code.column_class.push_back(ColumnClass::P1);
        else if (s == "2i") code.column_class.push_back(ColumnClass::I2);
        else if (s == "2p") code.column_class.push_back(ColumnClass::P2);
        else throw std::runtime_error("load_code: bad column class " + s);
    }
    for (const std::string s : j.at("check_class"))
        code.check_class.push_back(s == "1c" ? CheckClass::C1 : CheckClass::C2);
    code.block_of_column = j.at("block_of_column").get<std::vector<std::size_t>>();
    if (code.column_class.size() != code.h.cols() ||
        code.check_class.size() != code.h.rows() ||
        code.block_of_column.size() != code.h.cols())
        throw std::runtime_error("load_code: metadata does not match matrix shape");
    return code;
}

} // namespace rootldpc::construct
