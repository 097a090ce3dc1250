#include <catch2/catch_amalgamated.hpp>

#include "lfdn/gf2.hpp"
#include "testutil.hpp"

using namespace lfdn;

TEST_CASE("zeros") {
    Gf2Matrix z = Gf2Matrix::zeros(2, 2);
    REQUIRE(z.rows() == 2);
    REQUIRE(z.cols() == 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) REQUIRE_FALSE(z(r, c));

    Gf2Matrix empty = Gf2Matrix::zeros(0, 3);
    REQUIRE(empty.rows() == 0);
    REQUIRE(rank(empty) == 0);

    REQUIRE(rank(Gf2Matrix::zeros(4, 4)) == 0);
}

TEST_CASE("identity") {
    REQUIRE(rank(Gf2Matrix::identity(3)) == 3);
    Gf2Matrix one = Gf2Matrix::identity(1);
    REQUIRE(one.rows() == 1);
    REQUIRE(one(0, 0));
    REQUIRE(rank(Gf2Matrix::identity(0)) == 0);
}

TEST_CASE("shift_power") {
    REQUIRE(Gf2Matrix::shift_power(4, 0) == Gf2Matrix::identity(4));
    REQUIRE(rank(Gf2Matrix::shift_power(4, 2)) == 2);
    REQUIRE(Gf2Matrix::shift_power(3, 3) == Gf2Matrix::zeros(3, 3));
    REQUIRE_THROWS_AS(Gf2Matrix::shift_power(3, 4), std::invalid_argument);
}

TEST_CASE("mat_mul laws") {
    std::mt19937 rng(11);
    Gf2Matrix m = testutil::random_matrix(rng, 3, 5);
    REQUIRE(mat_mul(Gf2Matrix::identity(3), m) == m);

    REQUIRE(mat_mul(Gf2Matrix::shift_power(4, 1), Gf2Matrix::shift_power(4, 1)) ==
            Gf2Matrix::shift_power(4, 2));

    REQUIRE(mat_mul(m, Gf2Matrix::zeros(5, 2)) == Gf2Matrix::zeros(3, 2));

    REQUIRE_THROWS_AS(mat_mul(Gf2Matrix::zeros(2, 3), Gf2Matrix::zeros(2, 3)), std::invalid_argument);

    for (int trial = 0; trial < 20; ++trial) {
        Gf2Matrix a = testutil::random_matrix(rng, 4, 3);
        Gf2Matrix b = testutil::random_matrix(rng, 3, 5);
        Gf2Matrix c = testutil::random_matrix(rng, 5, 2);
        REQUIRE(mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c)));
        REQUIRE(mat_mul(a, Gf2Matrix::identity(3)) == a);
    }
}

TEST_CASE("mat_vec") {
    // Down-shift by two: top bits move to the bottom positions.
    BitVec x = {1, 0, 1, 1};
    REQUIRE(mat_vec(Gf2Matrix::shift_power(4, 2), x) == BitVec{0, 0, 1, 0});
    REQUIRE(testutil::naive_mat_vec(Gf2Matrix::shift_power(4, 2), x) == BitVec{0, 0, 1, 0});

    REQUIRE(mat_vec(Gf2Matrix::identity(4), x) == x);
    REQUIRE(mat_vec(Gf2Matrix::zeros(4, 4), x) == BitVec{0, 0, 0, 0});
    REQUIRE_THROWS_AS(mat_vec(Gf2Matrix::zeros(4, 4), BitVec{1, 0}), std::invalid_argument);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        Gf2Matrix a = testutil::random_matrix(rng, 6, 9);
        BitVec v = testutil::random_bits(rng, 9);
        REQUIRE(mat_vec(a, v) == testutil::naive_mat_vec(a, v));
    }
}

TEST_CASE("block_assemble") {
    Gf2Matrix d = block_diag(Gf2Matrix::identity(2), Gf2Matrix::identity(3));
    REQUIRE(rank(d) == 5);

    Gf2Matrix m = Gf2Matrix::shift_power(3, 1);
    REQUIRE(block_assemble({{m}}, {3}, {3}) == m);

    Gf2Matrix h = hconcat(Gf2Matrix::shift_power(4, 0), Gf2Matrix::shift_power(4, 3));
    REQUIRE(h.rows() == 4);
    REQUIRE(h.cols() == 8);
    REQUIRE(rank(h) == 4);

    REQUIRE_THROWS_AS(block_assemble({{Gf2Matrix::identity(2)}}, {3}, {2}), std::invalid_argument);
}

TEST_CASE("rank on shift stacks") {
    // rank(S^(q-n)) = n
    REQUIRE(rank(Gf2Matrix::shift_power(5, 5 - 3)) == 3);

    // Interference: horizontal concatenation of shift powers has rank max(a,b).
    {
        const std::size_t q = 4, a = 4, b = 1;
        Gf2Matrix m = hconcat(Gf2Matrix::shift_power(q, q - a), Gf2Matrix::shift_power(q, q - b));
        REQUIRE(rank(m) == 4);
        REQUIRE(row_space_size(m) == std::uint64_t(1) << 4);
    }
    // Broadcast: vertical stack of shift powers has rank max(a,b).
    {
        const std::size_t q = 4, a = 2, b = 3;
        Gf2Matrix m = vconcat(Gf2Matrix::shift_power(q, q - a), Gf2Matrix::shift_power(q, q - b));
        REQUIRE(rank(m) == 3);
        REQUIRE(row_space_size(m) == std::uint64_t(1) << 3);
    }
}

TEST_CASE("row_space_size") {
    REQUIRE(row_space_size(Gf2Matrix::identity(3)) == 8);
    REQUIRE(row_space_size(Gf2Matrix::zeros(2, 2)) == 1);
    REQUIRE(row_space_size(Gf2Matrix::shift_power(4, 2)) == 4);
    REQUIRE_THROWS_AS(row_space_size(Gf2Matrix::zeros(21, 2)), std::invalid_argument);
}

TEST_CASE("rank properties") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = rng() % 13, cols = rng() % 13;
        Gf2Matrix a = testutil::random_matrix(rng, rows, cols);
        std::size_t r = rank(a);
        REQUIRE(r <= std::min(rows, cols));
        REQUIRE(row_space_size(a) == std::uint64_t(1) << r);
    }
}

TEST_CASE("shift rank laws exhaustive") {
    for (std::size_t q = 0; q <= 8; ++q) {
        for (std::size_t k = 0; k <= q; ++k) REQUIRE(rank(Gf2Matrix::shift_power(q, k)) == q - k);
        for (std::size_t a = 0; a <= q; ++a)
            for (std::size_t b = 0; b <= q; ++b) {
                Gf2Matrix h = hconcat(Gf2Matrix::shift_power(q, q - a), Gf2Matrix::shift_power(q, q - b));
                REQUIRE(rank(h) == std::max(a, b));
                Gf2Matrix v = vconcat(Gf2Matrix::shift_power(q, q - a), Gf2Matrix::shift_power(q, q - b));
                REQUIRE(rank(v) == std::max(a, b));
            }
    }
}

TEST_CASE("block diagonal rank additivity") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        Gf2Matrix a = testutil::random_matrix(rng, rng() % 7, rng() % 7);
        Gf2Matrix b = testutil::random_matrix(rng, rng() % 7, rng() % 7);
        REQUIRE(rank(block_diag(a, b)) == rank(a) + rank(b));
    }
}

TEST_CASE("row rendering") {
    Gf2Matrix s = Gf2Matrix::shift_power(3, 1);
    REQUIRE(s.to_strings() == std::vector<std::string>{"000", "100", "010"});
    REQUIRE(Gf2Matrix::from_rows({"000", "100", "010"}) == s);
    REQUIRE_THROWS_AS(Gf2Matrix::from_rows({"01", "0"}), std::invalid_argument);
    REQUIRE_THROWS_AS(Gf2Matrix::from_rows({"0x"}), std::invalid_argument);
}
