#pragma once

// Prime-field arithmetic GF(q) and dense exact linear algebra over it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repairopt/error.hpp"

namespace repairopt::gf {

using Word = std::uint64_t;

/// Moduli are kept below 2^31 so every product fits comfortably in 64 bits.
inline constexpr Word max_modulus = Word{1} << 31;

inline bool is_prime(Word x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    for (Word d = 3; d * d <= x; d += 2)
        if (x % d == 0) return false;
    return true;
}

/// Least prime >= x, by trial division.
inline Word smallest_prime_geq(Word x, Word limit = max_modulus) {
    if (x < 2) throw ConfigError("smallest_prime_geq: need x >= 2");
    for (Word p = x; p < limit; ++p)
        if (is_prime(p)) return p;
    throw ConfigError("smallest_prime_geq: " + std::to_string(x) + " exceeds the configured limit");
}

class PrimeField {
public:
    explicit PrimeField(Word q) : q_(q) {
        if (q >= max_modulus || !is_prime(q)) throw ConfigError("field modulus must be a prime below 2^31");
    }

    Word modulus() const { return q_; }
    Word reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(q_);
        return static_cast<Word>(r < 0 ? r + static_cast<std::int64_t>(q_) : r);
    }
    Word add(Word a, Word b) const { return (a + b) % q_; }
    Word sub(Word a, Word b) const { return (a + q_ - b) % q_; }
    Word neg(Word a) const { return (q_ - a) % q_; }
    Word mul(Word a, Word b) const { return (a * b) % q_; }
    Word pow(Word a, Word e) const {
        Word result = 1 % q_;
        a %= q_;
        while (e) {
            if (e & 1) result = mul(result, a);
            a = mul(a, a);
            e >>= 1;
        }
        return result;
    }
    Word inv(Word a) const {
        if (a % q_ == 0) throw Error("inverse of zero in GF(" + std::to_string(q_) + ")");
        return pow(a, q_ - 2);
    }
    Word div(Word a, Word b) const { return mul(a, inv(b)); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    Word q_;
};

/// Row-major matrix over one prime field.
class FieldMatrix {
public:
    FieldMatrix(Word q, std::size_t rows, std::size_t cols) : field_(q), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    FieldMatrix(Word q, const std::vector<std::vector<std::int64_t>>& values) : FieldMatrix(q, values.size(), values.empty() ? 0 : values[0].size()) {
        for (std::size_t r = 0; r < rows_; ++r) {
            if (values[r].size() != cols_) throw ConfigError("ragged matrix literal");
            for (std::size_t c = 0; c < cols_; ++c) data_[r * cols_ + c] = field_.reduce(values[r][c]);
        }
    }

    static FieldMatrix identity(Word q, std::size_t n) {
        FieldMatrix m(q, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    const PrimeField& field() const { return field_; }
    Word modulus() const { return field_.modulus(); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Word& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Word operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Word>& data() const { return data_; }

    std::vector<Word> column(std::size_t c) const {
        std::vector<Word> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    FieldMatrix transpose() const {
        FieldMatrix t(modulus(), cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
        if (a.modulus() != b.modulus()) throw ConfigError("matrix moduli differ");
        if (a.cols_ != b.rows_) throw ConfigError("matrix dimensions do not agree");
        FieldMatrix out(a.modulus(), a.rows_, b.cols_);
        const Word q = a.modulus();
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Word aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) = (out(i, j) + aik * b(k, j)) % q;
            }
        }
        return out;
    }

    std::vector<Word> apply(const std::vector<Word>& x) const {
        if (x.size() != cols_) throw ConfigError("vector length does not match matrix columns");
        std::vector<Word> y(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) y[r] = (y[r] + (*this)(r, c) * x[c]) % modulus();
        return y;
    }

    /// Columns of `this` followed by the columns of `other`.
    FieldMatrix hconcat(const FieldMatrix& other) const {
        if (other.rows_ != rows_ || other.modulus() != modulus()) throw ConfigError("cannot concatenate matrices");
        FieldMatrix out(modulus(), rows_, cols_ + other.cols_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
            for (std::size_t c = 0; c < other.cols_; ++c) out(r, cols_ + c) = other(r, c);
        }
        return out;
    }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Word> data_;
};

namespace detail {

/// In-place row reduction; pivot is the first nonzero entry at or below the current row in column order.
/// Returns the rank and the determinant factor accumulated from swaps and pivot scalings.
struct Echelon {
    std::size_t rank = 0;
    Word det = 1;
};

inline Echelon eliminate(FieldMatrix& m) {
    const PrimeField& f = m.field();
    Echelon res;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::optional<std::size_t> pivot;
        for (std::size_t r = row; r < m.rows() && !pivot; ++r)
            if (m(r, col) != 0) pivot = r;
        if (!pivot) {
            res.det = 0;
            continue;
        }
        if (*pivot != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(*pivot, c));
            res.det = f.neg(res.det);
        }
        const Word p = m(row, col);
        res.det = f.mul(res.det, p);
        const Word p_inv = f.inv(p);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) = f.mul(m(row, c), p_inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            const Word factor = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) = f.sub(m(r, c), f.mul(factor, m(row, c)));
        }
        ++row;
    }
    res.rank = row;
    if (res.rank < m.rows()) res.det = 0;
    return res;
}

}  // namespace detail

inline std::size_t rank(FieldMatrix m) { return detail::eliminate(m).rank; }

inline Word det(FieldMatrix m) {
    if (m.rows() != m.cols()) throw ConfigError("determinant of a non-square matrix");
    return detail::eliminate(m).det;
}

/// Solves A x = b for square nonsingular A.
inline std::vector<Word> solve(const FieldMatrix& a, const std::vector<Word>& b) {
    if (a.rows() != a.cols()) throw ConfigError("solve needs a square matrix");
    if (b.size() != a.rows()) throw ConfigError("right-hand side length does not match");
    FieldMatrix aug(a.modulus(), a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
        aug(r, a.cols()) = b[r] % a.modulus();
    }
    detail::eliminate(aug);
    // a singular A leaves a zero on the diagonal of the reduced form
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (aug(i, i) != 1) throw Error("solve: matrix is singular");
    std::vector<Word> x(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) x[i] = aug(i, a.cols());
    return x;
}

inline FieldMatrix inverse(const FieldMatrix& a) {
    if (a.rows() != a.cols()) throw ConfigError("inverse needs a square matrix");
    const std::size_t n = a.rows();
    FieldMatrix aug = a.hconcat(FieldMatrix::identity(a.modulus(), n));
    detail::eliminate(aug);
    for (std::size_t i = 0; i < n; ++i)
        if (aug(i, i) != 1) throw Error("inverse: matrix is singular");
    FieldMatrix out(a.modulus(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = aug(r, n + c);
    return out;
}

}  // namespace repairopt::gf
