#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace elbmf {

using RealMatrix = Eigen::MatrixXd;
using count_t = std::uint64_t;

/// Row/column position of a one-cell. Zero-based.
struct Coordinate {
    std::size_t row;
    std::size_t col;

    friend bool operator==(const Coordinate&, const Coordinate&) = default;
    friend auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

/**
 * Dense bit-plane Boolean matrix.
 *
 * Rows are packed into 64-bit words; bits past `cols()` in the last word of a
 * row are always zero so that popcounts over whole words are exact. Sparse
 * inputs enter through `from_coordinates` and leave through `coordinates`.
 */
class BoolMatrix {
public:
    using word_t = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BoolMatrix() = default;

    BoolMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), words_per_row_((cols + word_bits - 1) / word_bits),
          bits_(rows * words_per_row_, 0) {}

    /// Row-major literal, e.g. `BoolMatrix{{1, 0}, {0, 1}}`. Any nonzero is a one.
    BoolMatrix(std::initializer_list<std::initializer_list<int>> rows)
        : BoolMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != cols_)
                throw dimension_error("BoolMatrix literal: ragged rows");
            std::size_t j = 0;
            for (int v : row) set(i, j++, v != 0);
            ++i;
        }
    }

    static BoolMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static BoolMatrix ones(std::size_t rows, std::size_t cols) {
        BoolMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t w = 0; w < m.words_per_row_; ++w) m.bits_[i * m.words_per_row_ + w] = ~word_t{0};
        m.clear_padding();
        return m;
    }

    static BoolMatrix identity(std::size_t n) {
        BoolMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    /// Builds from a coordinate list; rejects out-of-range and duplicate positions.
    static BoolMatrix from_coordinates(std::size_t rows, std::size_t cols, const std::vector<Coordinate>& ones) {
        BoolMatrix m(rows, cols);
        for (const auto& c : ones) {
            if (c.row >= rows || c.col >= cols)
                throw dimension_error("coordinate (" + std::to_string(c.row) + ", " + std::to_string(c.col) +
                                      ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
            if (m.get(c.row, c.col))
                throw std::invalid_argument("duplicate coordinate (" + std::to_string(c.row) + ", " +
                                            std::to_string(c.col) + ")");
            m.set(c.row, c.col, true);
        }
        return m;
    }

    /// Entries strictly greater than `threshold` become one.
    static BoolMatrix from_real(const RealMatrix& x, double threshold = 0.5) {
        BoolMatrix m(static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()));
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                if (x(i, j) > threshold) m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), true);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    count_t size() const noexcept { return count_t{rows_} * count_t{cols_}; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
    std::size_t words_per_row() const noexcept { return words_per_row_; }

    bool get(std::size_t i, std::size_t j) const noexcept {
        return (bits_[i * words_per_row_ + j / word_bits] >> (j % word_bits)) & word_t{1};
    }

    bool operator()(std::size_t i, std::size_t j) const noexcept { return get(i, j); }

    void set(std::size_t i, std::size_t j, bool value) noexcept {
        word_t& w = bits_[i * words_per_row_ + j / word_bits];
        const word_t mask = word_t{1} << (j % word_bits);
        w = value ? (w | mask) : (w & ~mask);
    }

    const word_t* row_data(std::size_t i) const noexcept { return bits_.data() + i * words_per_row_; }
    word_t* row_data(std::size_t i) noexcept { return bits_.data() + i * words_per_row_; }

    /// Number of one-cells.
    count_t count() const noexcept {
        count_t n = 0;
        for (word_t w : bits_) n += static_cast<count_t>(std::popcount(w));
        return n;
    }

    std::vector<Coordinate> coordinates() const {
        std::vector<Coordinate> out;
        out.reserve(count());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t w = 0; w < words_per_row_; ++w) {
                word_t bits = bits_[i * words_per_row_ + w];
                while (bits) {
                    const auto b = static_cast<std::size_t>(std::countr_zero(bits));
                    out.push_back({i, w * word_bits + b});
                    bits &= bits - 1;
                }
            }
        return out;
    }

    RealMatrix to_real() const {
        RealMatrix x = RealMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
        for (const auto& c : coordinates()) x(static_cast<Eigen::Index>(c.row), static_cast<Eigen::Index>(c.col)) = 1.0;
        return x;
    }

    BoolMatrix transpose() const {
        BoolMatrix t(cols_, rows_);
        for (const auto& c : coordinates()) t.set(c.col, c.row, true);
        return t;
    }

    BoolMatrix complement() const {
        BoolMatrix m = *this;
        for (auto& w : m.bits_) w = ~w;
        m.clear_padding();
        return m;
    }

    friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

private:
    void clear_padding() noexcept {
        const std::size_t tail = cols_ % word_bits;
        if (tail == 0 || words_per_row_ == 0) return;
        const word_t mask = (word_t{1} << tail) - 1;
        for (std::size_t i = 0; i < rows_; ++i) bits_[i * words_per_row_ + words_per_row_ - 1] &= mask;
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_per_row_ = 0;
    std::vector<word_t> bits_;
};

namespace detail {

inline void require_same_shape(const BoolMatrix& a, const BoolMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw dimension_error(std::string(op) + ": shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

template <class Op>
count_t count_words(const BoolMatrix& a, const BoolMatrix& b, Op op) {
    count_t n = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto* ra = a.row_data(i);
        const auto* rb = b.row_data(i);
        for (std::size_t w = 0; w < a.words_per_row(); ++w) n += static_cast<count_t>(std::popcount(op(ra[w], rb[w])));
    }
    return n;
}

} // namespace detail

/// Boolean semiring product: result(i, j) = OR_l U(i, l) AND V(l, j).
inline BoolMatrix bool_product(const BoolMatrix& u, const BoolMatrix& v) {
    if (u.cols() != v.rows())
        throw dimension_error("bool_product: inner dimensions " + std::to_string(u.cols()) + " and " +
                              std::to_string(v.rows()) + " differ");
    BoolMatrix out(u.rows(), v.cols());
    const std::size_t words = out.words_per_row();
    for (std::size_t i = 0; i < u.rows(); ++i) {
        auto* dst = out.row_data(i);
        for (std::size_t l = 0; l < u.cols(); ++l) {
            if (!u.get(i, l)) continue;
            const auto* src = v.row_data(l);
            for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
        }
    }
    return out;
}

/// Number of cells where the two matrices differ.
inline count_t xor_loss(const BoolMatrix& a, const BoolMatrix& b) {
    detail::require_same_shape(a, b, "xor_loss");
    return detail::count_words(a, b, [](auto x, auto y) { return x ^ y; });
}

/// Number of cells that are one in both matrices.
inline count_t and_count(const BoolMatrix& a, const BoolMatrix& b) {
    detail::require_same_shape(a, b, "and_count");
    return detail::count_words(a, b, [](auto x, auto y) { return x & y; });
}

inline double density(const BoolMatrix& a) {
    if (a.empty()) throw dimension_error("density of an empty matrix is undefined");
    return static_cast<double>(a.count()) / static_cast<double>(a.size());
}

inline BoolMatrix transpose(const BoolMatrix& a) { return a.transpose(); }

} // namespace elbmf
