#include <gtest/gtest.h>

#include <random>

#include "repairopt/gfalg.hpp"

using namespace repairopt;
using namespace repairopt::gf;

namespace {

/// Rank as the size of the largest nonzero minor, by cofactor expansion.
Word minor_det(const FieldMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    const PrimeField& f = m.field();
    if (rows.size() == 1) return m(rows[0], cols[0]);
    Word total = 0;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
        std::vector<std::size_t> sub_cols;
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (c != j) sub_cols.push_back(cols[c]);
        Word term = f.mul(m(rows[0], cols[j]), minor_det(m, sub_rows, sub_cols));
        total = j % 2 == 0 ? f.add(total, term) : f.sub(total, term);
    }
    return total;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::size_t rank_by_minors(const FieldMatrix& m) {
    for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
        std::vector<std::vector<std::size_t>> row_sets, col_sets;
        std::vector<std::size_t> cur;
        subsets(m.rows(), r, 0, cur, row_sets);
        subsets(m.cols(), r, 0, cur, col_sets);
        for (const auto& rs : row_sets)
            for (const auto& cs : col_sets)
                if (minor_det(m, rs, cs) != 0) return r;
    }
    return 0;
}

FieldMatrix random_matrix(Word q, std::size_t rows, std::size_t cols, std::mt19937_64& rng, int zero_bias = 0) {
    FieldMatrix m(q, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = static_cast<int>(rng() % 4) < zero_bias ? 0 : rng() % q;
    return m;
}

}  // namespace

TEST(Primes, SmallestPrimeAtLeast) {
    EXPECT_EQ(smallest_prime_geq(721), 727u);
    EXPECT_EQ(smallest_prime_geq(97), 97u);
    EXPECT_EQ(smallest_prime_geq(2), 2u);
    EXPECT_EQ(smallest_prime_geq(90), 97u);
    EXPECT_THROW(smallest_prime_geq(1), ConfigError);
    EXPECT_THROW(smallest_prime_geq(100, 101), ConfigError);
}

TEST(PrimeFieldAxioms, HoldForSeveralModuli) {
    for (Word q : {2u, 5u, 11u, 727u}) {
        const PrimeField f(q);
        const Word limit = std::min<Word>(q, 40);
        for (Word a = 0; a < limit; ++a) {
            EXPECT_EQ(f.add(a, f.neg(a)), 0u);
            if (a != 0) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
            for (Word b = 0; b < limit; ++b) {
                EXPECT_EQ(f.add(a, b), f.add(b, a));
                EXPECT_EQ(f.mul(a, b), f.mul(b, a));
                EXPECT_EQ(f.sub(f.add(a, b), b), a);
                for (Word c = 0; c < limit; c += 3) {
                    EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
        EXPECT_THROW(f.inv(0), Error);
    }
}

TEST(PrimeFieldAxioms, RejectsCompositeOrHugeModuli) {
    EXPECT_THROW(PrimeField(4), ConfigError);
    EXPECT_THROW(PrimeField(1), ConfigError);
    EXPECT_THROW(PrimeField(max_modulus + 11), ConfigError);
    EXPECT_NO_THROW(PrimeField(2147483647u));
}

TEST(Rank, AgreesWithMaximalMinorsOverGF5) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const FieldMatrix m = random_matrix(5, 4, 4, rng, trial % 4);
        EXPECT_EQ(rank(m), rank_by_minors(m));
        EXPECT_EQ(det(m), minor_det(m, {0, 1, 2, 3}, {0, 1, 2, 3}));
    }
}

TEST(Rank, RectangularShapes) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const FieldMatrix m = random_matrix(5, 3, 5, rng, 2);
        EXPECT_EQ(rank(m), rank_by_minors(m));
        EXPECT_EQ(rank(m.transpose()), rank(m));
    }
}

TEST(Solve, RoundTripsThroughMultiplication) {
    std::mt19937_64 rng(11);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const FieldMatrix a = random_matrix(11, 4, 4, rng);
        std::vector<Word> x(4);
        for (auto& v : x) v = rng() % 11;
        const std::vector<Word> b = a.apply(x);
        if (det(a) == 0) {
            EXPECT_THROW(solve(a, b), Error);
            continue;
        }
        EXPECT_EQ(solve(a, b), x);
        EXPECT_EQ(inverse(a) * a, FieldMatrix::identity(11, 4));
        ++solved;
    }
    EXPECT_GT(solved, 100);
}

TEST(Matrix, ProductAndConcatenation) {
    const FieldMatrix a(7, {{1, 2}, {3, 4}});
    const FieldMatrix b(7, {{5, 6}, {0, -1}});
    EXPECT_EQ(a * b, FieldMatrix(7, {{5, 4}, {15, 14}}));
    EXPECT_EQ(a.hconcat(b), FieldMatrix(7, {{1, 2, 5, 6}, {3, 4, 0, 6}}));
    EXPECT_EQ(a.column(1), (std::vector<Word>{2, 4}));
    EXPECT_THROW(a * FieldMatrix(5, 2, 2), ConfigError);
    EXPECT_THROW(FieldMatrix(7, 2, 3) * FieldMatrix(7, 2, 3), ConfigError);
}

TEST(Matrix, DeterminantOfKnownMatrix) {
    // det [[2,1],[1,2]] = 3 over GF(5)
    EXPECT_EQ(det(FieldMatrix(5, {{2, 1}, {1, 2}})), 3u);
    EXPECT_EQ(det(FieldMatrix(5, {{1, 2}, {2, 4}})), 0u);
    EXPECT_EQ(det(FieldMatrix(5, {{0, 1}, {1, 0}})), 4u);
    EXPECT_EQ(rank(FieldMatrix::identity(5, 4)), 4u);
    EXPECT_EQ(det(FieldMatrix::identity(5, 4)), 1u);
    EXPECT_EQ(rank(FieldMatrix(5, {{1, 2}, {2, 4}})), 1u);
}
