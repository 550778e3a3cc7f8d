#include "doctest.h"

#include "rootldpc/gf2.hpp"

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

using namespace rootldpc::gf2;

namespace {

BinaryMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, double density = 0.5) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    BinaryMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (bit(rng)) m.set(i, j, true);
    return m;
}

} // namespace

TEST_CASE("bit get/set/flip across word boundaries") {
    BinaryMatrix m(3, 130);
    m.set(1, 63, true);
    m.set(1, 64, true);
    m.set(2, 129, true);
    CHECK(m.get(1, 63));
    CHECK(m.get(1, 64));
    CHECK(m.get(2, 129));
    CHECK_FALSE(m.get(0, 63));
    m.flip(1, 63);
    CHECK_FALSE(m.get(1, 63));
    CHECK(m.row_weight(1) == 1);
    CHECK(m.col_weight(129) == 1);
}

TEST_CASE("row ops, concat and slice") {
    BinaryMatrix a(2, 5);
    a.set(0, 0, true);
    a.set(0, 2, true);
    a.set(1, 2, true);
    a.add_row(1, 0); // row1 ^= row0 -> {0}
    CHECK(a.get(1, 0));
    CHECK_FALSE(a.get(1, 2));
    a.swap_rows(0, 1);
    CHECK_FALSE(a.get(0, 2));

    auto i2 = BinaryMatrix::identity(2);
    auto cat = i2.hconcat(i2);
    CHECK(cat.cols() == 4);
    CHECK(cat.get(1, 3));
    auto right = cat.col_slice(2, 4);
    CHECK(right == i2);
    auto tall = i2.vstack(i2);
    CHECK(tall.rows() == 4);
    CHECK(tall.get(3, 1));
}

TEST_CASE("rank and kernel dimensions") {
    CHECK(rank(BinaryMatrix::identity(17)) == 17);

    auto m = random_matrix(20, 40, 11);
    auto r = rank(m);
    auto basis = kernel_basis(m);
    CHECK(basis.size() == 40 - r);
    for (const auto& v : basis) CHECK(in_kernel(m, v));

    // duplicated row does not change the rank
    auto dup = m.vstack(m);
    CHECK(rank(dup) == r);
}

TEST_CASE("codeword enumeration matches kernel size") {
    auto m = random_matrix(8, 12, 3);
    auto words = enumerate_codewords(m);
    CHECK(words.size() == (std::size_t(1) << (12 - rank(m))));
    for (const auto& w : words) CHECK(in_kernel(m, w));
    // zero word present exactly once
    std::size_t zeros = 0;
    for (const auto& w : words) {
        bool z = true;
        for (auto b : w) z = z && !b;
        zeros += z;
    }
    CHECK(zeros == 1);
    CHECK_THROWS_AS(enumerate_codewords(m, 4), std::length_error);
}

TEST_CASE("block profile and Singleton bound") {
    Codeword c = {1, 1, 0, 0, 0, 1};
    auto bp = block_profile(c, 2);
    REQUIRE(bp.weights.size() == 2);
    CHECK(bp.weights[0] == 2);
    CHECK(bp.weights[1] == 1);
    CHECK(singleton_bound(0.5, 2) == 2);
    CHECK(singleton_bound(0.5, 3) == 2);
    CHECK(singleton_bound(1.0 / 3.0, 3) == 3);
}

TEST_CASE("diversity analysis on hand-built codes") {
    // ker = {0000, 1100, 0011, 1111}: the single-block words force d = 1
    BinaryMatrix h(2, 4);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(1, 2, true);
    h.set(1, 3, true);
    auto res = diversity_analysis(h, 2);
    CHECK(res.d == 1);
    CHECK(res.wstar == 0); // a single-block word leaves the other block empty
    CHECK_FALSE(res.trivial_code);

    // repetition across the two halves: every nonzero word hits both blocks
    auto rep = BinaryMatrix::identity(2).hconcat(BinaryMatrix::identity(2));
    auto res2 = diversity_analysis(rep, 2);
    CHECK(res2.d == 2);
    CHECK(res2.wstar == 1);

    auto triv = diversity_analysis(BinaryMatrix::identity(4), 2);
    CHECK(triv.trivial_code);
}

TEST_CASE("alist round trip") {
    auto m = random_matrix(14, 30, 77, 0.2);
    std::stringstream ss;
    write_alist(ss, m);
    auto back = read_alist(ss);
    CHECK(back == m);

    // header is "cols rows" followed by the max weights
    std::stringstream ss2;
    write_alist(ss2, m);
    std::size_t n, mm;
    ss2 >> n >> mm;
    CHECK(n == 30);
    CHECK(mm == 14);
}

TEST_CASE("alist file round trip") {
    auto m = random_matrix(6, 10, 5, 0.3);
    auto path = (std::filesystem::temp_directory_path() / "rootldpc_gf2_rt.alist").string();
    write_alist_file(path, m);
    auto back = read_alist_file(path);
    CHECK(back == m);
    std::remove(path.c_str());
}
