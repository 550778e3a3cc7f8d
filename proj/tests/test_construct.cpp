#include "doctest.h"

#include "rootldpc/construct.hpp"

#include <cstdio>
#include <filesystem>
#include <map>

using namespace rootldpc;
using namespace rootldpc::construct;

namespace {

std::map<ColumnClass, std::size_t> class_counts(const RootLdpcCode& code) {
    std::map<ColumnClass, std::size_t> n;
    for (auto c : code.column_class) ++n[c];
    return n;
}

} // namespace

TEST_CASE("degree distributions") {
    auto reg = DegreeDistribution::regular(3, 6);
    reg.validate();
    CHECK(reg.design_rate() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reg.max_lambda_degree() == 3);
    CHECK(reg.max_rho_degree() == 6);

    auto irr = DegreeDistribution::irregular_half_rate();
    irr.validate();
    double ls = 0, rs = 0;
    for (auto [d, f] : irr.lambda) ls += f;
    for (auto [d, f] : irr.rho) rs += f;
    CHECK(ls == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(irr.design_rate() == doctest::Approx(0.50016).epsilon(2e-4));

    DegreeDistribution bad;
    bad.lambda = {{1, 1.0}};
    bad.rho = {{6, 1.0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("socket apportionment") {
    std::vector<std::pair<int, double>> fr = {{2, 0.3}, {3, 0.33}, {7, 0.37}};
    auto parts = apportion_sockets(fr, 1000);
    long long total = 0;
    for (auto [d, k] : parts) total += k;
    CHECK(total == 1000);
    for (std::size_t i = 0; i < fr.size(); ++i)
        CHECK(std::abs(parts[i].second - fr[i].second * 1000) <= 1.0);
}

TEST_CASE("multi-edge fractions") {
    auto reg = DegreeDistribution::regular(3, 6);
    auto [fe, ge] = multiedge_fraction(reg);
    CHECK(std::abs(fe - 0.4) < 1e-12);
    CHECK(std::abs(ge - 0.6) < 1e-12);

    auto irr = DegreeDistribution::irregular_half_rate();
    auto [fi, gi] = multiedge_fraction(irr);
    CHECK(fi + gi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fi == doctest::Approx(0.37510).epsilon(1e-3));
}

TEST_CASE("random regular ldpc degrees") {
    auto h = random_regular_ldpc(96, 3, 6, 42);
    CHECK(h.rows() == 48);
    CHECK(h.cols() == 96);
    for (std::size_t c = 0; c < 96; ++c) CHECK(h.col_weight(c) == 3);
    for (std::size_t r = 0; r < 48; ++r) CHECK(h.row_weight(r) == 6);
}

TEST_CASE("regular root code structure") {
    auto code = build_root_regular(64, 9);
    const std::size_t q = 16;
    CHECK(code.n() == 64);
    CHECK(code.h.rows() == 32);

    auto counts = class_counts(code);
    CHECK(counts[ColumnClass::I1] == q);
    CHECK(counts[ColumnClass::P1] == q);
    CHECK(counts[ColumnClass::I2] == q);
    CHECK(counts[ColumnClass::P2] == q);

    // rows [1c | 2c], columns [1i | 1p | 2i | 2p]
    for (std::size_t i = 0; i < q; ++i) {
        // rootcheck identities
        CHECK(code.h.get(i, i));
        CHECK(code.h.get(q + i, 2 * q + i));
        // zero blocks: 1c x 1p and 2c x 2p
        for (std::size_t j = 0; j < q; ++j) {
            CHECK_FALSE(code.h.get(i, q + j));
            CHECK_FALSE(code.h.get(q + i, 3 * q + j));
        }
    }
    // (3,6) degrees
    for (std::size_t c = 0; c < 64; ++c) CHECK(code.h.col_weight(c) == 3);
    for (std::size_t r = 0; r < 32; ++r) CHECK(code.h.row_weight(r) == 6);

    // block map: first half fades with block 1
    for (std::size_t c = 0; c < 64; ++c)
        CHECK(code.block_of_column[c] == (c < 2 * q ? 1 : 2));

    CHECK(code.info_columns().size() == 2 * q);
    CHECK(code.is_info_column(0));
    CHECK_FALSE(code.is_info_column(q));
}

TEST_CASE("regular root code has full diversity") {
    auto code = build_root_regular(32, 4);
    CHECK(is_ml_full_diversity(code.h, 2));
    auto res = gf2::diversity_analysis(code.h, 2);
    CHECK(res.d == 2);
    CHECK(res.wstar >= 1);
}

TEST_CASE("irregular root code structure") {
    auto dd = DegreeDistribution::irregular_half_rate();
    auto code = build_root_irregular(400, dd, 17);
    const std::size_t q = 100;
    CHECK(code.n() == 400);
    CHECK(code.h.rows() == 200);

    // every information bit keeps exactly one rootcheck edge: identity into
    // the opposite-side check class
    for (std::size_t i = 0; i < q; ++i) {
        std::size_t own = 0;
        for (std::size_t r = 0; r < q; ++r) own += code.h.get(r, i);
        CHECK(own == 1);
        std::size_t own2 = 0;
        for (std::size_t r = q; r < 2 * q; ++r) own2 += code.h.get(r, 2 * q + i);
        CHECK(own2 == 1);
    }
    // zero blocks preserved
    for (std::size_t r = 0; r < q; ++r)
        for (std::size_t j = q; j < 2 * q; ++j) CHECK_FALSE(code.h.get(r, j));

    code.realized_dd.validate();
    CHECK(is_ml_full_diversity(code.h, 2));
}

TEST_CASE("wstar constructions") {
    auto w2 = build_wstar2(16);
    CHECK(w2.cols() == 16);
    auto res2 = gf2::diversity_analysis(w2, 2);
    CHECK(res2.d == 2);
    CHECK(res2.wstar == 2);

    auto w3 = build_wstar3(3); // N = 14
    CHECK(w3.cols() == 14);
    auto res3 = gf2::diversity_analysis(w3, 2);
    CHECK(res3.d == 2);
    CHECK(res3.wstar >= 3);
}

TEST_CASE("code save/load round trip") {
    auto code = build_root_regular(48, 2);
    auto dir = std::filesystem::temp_directory_path();
    auto alist = (dir / "rootldpc_rt.alist").string();
    auto meta = (dir / "rootldpc_rt.json").string();
    save_code(code, alist, meta);
    auto back = load_code(alist, meta);
    CHECK(back.h == code.h);
    CHECK(back.column_class == code.column_class);
    CHECK(back.check_class == code.check_class);
    CHECK(back.block_of_column == code.block_of_column);
    std::remove(alist.c_str());
    std::remove(meta.c_str());
}
