#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfdn {

/// Bit vector over GF(2); element values are 0 or 1. Index 0 is the most
/// significant (top) position, matching the rendering of matrix rows.
using BitVec = std::vector<std::uint8_t>;

inline BitVec xor_bits(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
    BitVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

class Gf2Matrix;
class Gf2MatrixBuilder;

/// Dense matrix over GF(2). Rows are packed into 64-bit words and a value is
/// immutable after construction; every operation returns a new matrix.
///
/// Entry (0,0) is the top-left, most significant position. A q x q down-shift
/// power S^k has entry (r,c) = 1 iff r = c + k, so applying it moves bit i
/// of the input down to position i + k: the top n bits of a capacity-n link
/// input land in the bottom n output positions.
class Gf2Matrix {
public:
    Gf2Matrix() = default;

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    bool operator()(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("Gf2Matrix: index out of range");
        return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u;
    }

    /// Packed 64-bit words of one row, least significant bit = column 0.
    std::span<const std::uint64_t> row_words(std::size_t r) const {
        if (r >= rows_) throw std::out_of_range("Gf2Matrix: row out of range");
        return {bits_.data() + r * words_, words_};
    }

    /// All-zero matrix of the given shape.
    static Gf2Matrix zeros(std::size_t rows, std::size_t cols);

    /// Identity of size n.
    static Gf2Matrix identity(std::size_t n);

    /// k-th power of the q x q down-shift matrix; requires 0 <= k <= q.
    static Gf2Matrix shift_power(std::size_t q, std::size_t k);

    /// Builds a matrix from '0'/'1' strings, one row per string, column 0 first.
    static Gf2Matrix from_rows(const std::vector<std::string>& rows);

    /// Row r as a '0'/'1' string, most significant column first.
    std::string row_string(std::size_t r) const {
        std::string s(cols_, '0');
        for (std::size_t c = 0; c < cols_; ++c)
            if ((*this)(r, c)) s[c] = '1';
        return s;
    }

    std::vector<std::string> to_strings() const {
        std::vector<std::string> out;
        out.reserve(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out.push_back(row_string(r));
        return out;
    }

    friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

private:
    friend class Gf2MatrixBuilder;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;                // words per row
    std::vector<std::uint64_t> bits_;      // row-major; padding bits stay zero
};

/// The one mutable path into Gf2Matrix: set bits, then take() the result.
class Gf2MatrixBuilder {
public:
    Gf2MatrixBuilder(std::size_t rows, std::size_t cols) {
        m_.rows_ = rows;
        m_.cols_ = cols;
        m_.words_ = (cols + 63) / 64;
        m_.bits_.assign(rows * m_.words_, 0);
    }

    void set(std::size_t r, std::size_t c, bool v = true) {
        if (r >= m_.rows_ || c >= m_.cols_)
            throw std::out_of_range("Gf2MatrixBuilder: index out of range");
        std::uint64_t mask = std::uint64_t(1) << (c % 64);
        if (v)
            m_.bits_[r * m_.words_ + c / 64] |= mask;
        else
            m_.bits_[r * m_.words_ + c / 64] &= ~mask;
    }

    /// XORs a source row into row r, starting at the given column offset.
    void xor_row_at(std::size_t r, std::size_t col_offset, const Gf2Matrix& src, std::size_t src_row) {
        for (std::size_t c = 0; c < src.cols(); ++c)
            if (src(src_row, c)) flip(r, col_offset + c);
    }

    void flip(std::size_t r, std::size_t c) {
        if (r >= m_.rows_ || c >= m_.cols_)
            throw std::out_of_range("Gf2MatrixBuilder: index out of range");
        m_.bits_[r * m_.words_ + c / 64] ^= std::uint64_t(1) << (c % 64);
    }

    Gf2Matrix take() { return std::move(m_); }

private:
    Gf2Matrix m_;
};

inline Gf2Matrix Gf2Matrix::zeros(std::size_t rows, std::size_t cols) {
    return Gf2MatrixBuilder(rows, cols).take();
}

inline Gf2Matrix Gf2Matrix::identity(std::size_t n) {
    Gf2MatrixBuilder b(n, n);
    for (std::size_t i = 0; i < n; ++i) b.set(i, i);
    return b.take();
}

inline Gf2Matrix Gf2Matrix::shift_power(std::size_t q, std::size_t k) {
    if (k > q) throw std::invalid_argument("shift_power: exponent exceeds size");
    Gf2MatrixBuilder b(q, q);
    for (std::size_t c = 0; c + k < q; ++c) b.set(c + k, c);
    return b.take();
}

inline Gf2Matrix Gf2Matrix::from_rows(const std::vector<std::string>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Gf2MatrixBuilder b(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("from_rows: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (rows[r][c] == '1')
                b.set(r, c);
            else if (rows[r][c] != '0')
                throw std::invalid_argument("from_rows: entries must be '0' or '1'");
        }
    }
    return b.take();
}

/// Matrix product over GF(2); XOR accumulation of b's rows selected by a.
inline Gf2Matrix mat_mul(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    Gf2MatrixBuilder out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k)
            if (a(r, k)) out.xor_row_at(r, 0, b, k);
    return out.take();
}

/// Matrix-vector product over GF(2).
inline BitVec mat_vec(const Gf2Matrix& a, const BitVec& x) {
    if (x.size() != a.cols()) throw std::invalid_argument("mat_vec: length mismatch");
    BitVec y(a.rows(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::uint8_t acc = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) acc ^= a(r, c) & x[c];
        y[r] = acc;
    }
    return y;
}

/// Assembles a block matrix from a grid of optional blocks. Absent blocks are
/// zero. Present blocks must match the (row_sizes[i], col_sizes[j]) slot shape.
inline Gf2Matrix block_assemble(const std::vector<std::vector<std::optional<Gf2Matrix>>>& blocks,
                                const std::vector<std::size_t>& row_sizes,
                                const std::vector<std::size_t>& col_sizes) {
    if (blocks.size() != row_sizes.size())
        throw std::invalid_argument("block_assemble: grid height mismatch");
    std::size_t total_rows = 0, total_cols = 0;
    for (auto s : row_sizes) total_rows += s;
    for (auto s : col_sizes) total_cols += s;

    Gf2MatrixBuilder out(total_rows, total_cols);
    std::size_t row_off = 0;
    for (std::size_t i = 0; i < row_sizes.size(); ++i) {
        if (blocks[i].size() != col_sizes.size())
            throw std::invalid_argument("block_assemble: grid width mismatch");
        std::size_t col_off = 0;
        for (std::size_t j = 0; j < col_sizes.size(); ++j) {
            if (blocks[i][j]) {
                const Gf2Matrix& blk = *blocks[i][j];
                if (blk.rows() != row_sizes[i] || blk.cols() != col_sizes[j])
                    throw std::invalid_argument("block_assemble: block shape mismatch");
                for (std::size_t r = 0; r < blk.rows(); ++r)
                    out.xor_row_at(row_off + r, col_off, blk, r);
            }
            col_off += col_sizes[j];
        }
        row_off += row_sizes[i];
    }
    return out.take();
}

inline Gf2Matrix hconcat(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hconcat: row mismatch");
    return block_assemble({{a, b}}, {a.rows()}, {a.cols(), b.cols()});
}

inline Gf2Matrix vconcat(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vconcat: column mismatch");
    return block_assemble({{a}, {b}}, {a.rows(), b.rows()}, {a.cols()});
}

inline Gf2Matrix block_diag(const Gf2Matrix& a, const Gf2Matrix& b) {
    return block_assemble({{a, std::nullopt}, {std::nullopt, b}},
                          {a.rows(), b.rows()}, {a.cols(), b.cols()});
}

/// Rank over GF(2) by Gaussian elimination with word-parallel row XOR.
inline std::size_t rank(const Gf2Matrix& a) {
    if (a.empty()) return 0;
    const std::size_t words = a.row_words(0).size();
    std::vector<std::uint64_t> work(a.rows() * words);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto w = a.row_words(r);
        std::copy(w.begin(), w.end(), work.begin() + r * words);
    }

    std::size_t pivots = 0;
    for (std::size_t col = 0; col < a.cols() && pivots < a.rows(); ++col) {
        const std::size_t wi = col / 64;
        const std::uint64_t mask = std::uint64_t(1) << (col % 64);
        std::size_t pivot_row = pivots;
        while (pivot_row < a.rows() && !(work[pivot_row * words + wi] & mask)) ++pivot_row;
        if (pivot_row == a.rows()) continue;
        if (pivot_row != pivots)
            for (std::size_t w = 0; w < words; ++w)
                std::swap(work[pivots * words + w], work[pivot_row * words + w]);
        for (std::size_t r = pivots + 1; r < a.rows(); ++r)
            if (work[r * words + wi] & mask)
                for (std::size_t w = 0; w < words; ++w)
                    work[r * words + w] ^= work[pivots * words + w];
        ++pivots;
    }
    return pivots;
}

/// Number of distinct XOR combinations of the rows; equals 2^rank.
/// Exponential-cost oracle, rejected for more than 20 rows.
inline std::uint64_t row_space_size(const Gf2Matrix& a) {
    if (a.rows() > 20) throw std::invalid_argument("row_space_size: more than 20 rows");
    const std::size_t words = a.rows() == 0 || a.cols() == 0 ? 0 : a.row_words(0).size();
    const std::uint64_t count = std::uint64_t(1) << a.rows();

    std::vector<std::uint64_t> combos;
    combos.reserve(count * (words ? words : 1));
    std::vector<std::uint64_t> current(words, 0);
    combos.insert(combos.end(), current.begin(), current.end());
    // Gray-code walk: combination i differs from i-1 by one row.
    for (std::uint64_t i = 1; i < count; ++i) {
        std::size_t r = std::countr_zero(i);
        auto w = a.row_words(r);
        for (std::size_t k = 0; k < words; ++k) current[k] ^= w[k];
        combos.insert(combos.end(), current.begin(), current.end());
    }
    if (words == 0) return 1;

    // Sort fixed-width records and count distinct ones.
    std::vector<std::size_t> order(count);
    for (std::uint64_t i = 0; i < count; ++i) order[i] = i;
    auto record_less = [&](std::size_t x, std::size_t y) {
        return std::lexicographical_compare(combos.begin() + x * words, combos.begin() + (x + 1) * words,
                                            combos.begin() + y * words, combos.begin() + (y + 1) * words);
    };
    std::sort(order.begin(), order.end(), record_less);
    std::uint64_t distinct = 1;
    for (std::uint64_t i = 1; i < count; ++i)
        if (record_less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

}  // namespace lfdn
