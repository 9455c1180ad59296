#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "bool_matrix.hpp"

namespace elbmf {

struct MetricsReport {
    double recall = 0.0;
    std::optional<double> recall_star;
    double similarity = 0.0;
    double relative_loss = 0.0;
    count_t xor_loss = 0;
};

namespace detail {

inline count_t require_ones(const BoolMatrix& a, const char* op) {
    const count_t ones = a.count();
    if (ones == 0) throw std::invalid_argument(std::string(op) + ": reference matrix has no ones");
    return ones;
}

} // namespace detail

/// Fraction of the ones of `a` that are also ones in `b`.
inline double recall(const BoolMatrix& a, const BoolMatrix& b) {
    detail::require_same_shape(a, b, "recall");
    const count_t ones = detail::require_ones(a, "recall");
    return static_cast<double>(and_count(a, b)) / static_cast<double>(ones);
}

/// Recall measured against the noise-free ground truth.
inline double recall_star(const BoolMatrix& a_star, const BoolMatrix& b) { return recall(a_star, b); }

/// 1 - (mismatching cells) / (all cells). Higher is better.
inline double hamming_similarity(const BoolMatrix& a, const BoolMatrix& b) {
    const count_t diff = xor_loss(a, b);
    if (a.empty()) return 1.0;
    return 1.0 - static_cast<double>(diff) / static_cast<double>(a.size());
}

/// Mismatching cells relative to the ones of `a`. Lower is better.
inline double relative_loss(const BoolMatrix& a, const BoolMatrix& b) {
    const count_t diff = xor_loss(a, b);
    const count_t ones = detail::require_ones(a, "relative_loss");
    return static_cast<double>(diff) / static_cast<double>(ones);
}

/// Sum over both factors of the mean distance of an entry to {0, 1}.
inline double boolean_gap(const RealMatrix& u, const RealMatrix& v) {
    auto mean_gap = [](const RealMatrix& x) {
        if (x.size() == 0) return 0.0;
        const double sum = x.unaryExpr([](double e) { return std::min(std::abs(e), std::abs(e - 1.0)); }).sum();
        return sum / static_cast<double>(x.size());
    };
    return mean_gap(u) + mean_gap(v);
}

/// One increment of the Hamming process: fraction of flipped cells, normalised by `cells`.
inline double hamming_flips(const BoolMatrix& prev, const BoolMatrix& next, count_t cells) {
    const count_t diff = xor_loss(prev, next);
    if (cells == 0) throw std::invalid_argument("hamming_flips: cell count must be positive");
    return static_cast<double>(diff) / static_cast<double>(cells);
}

/// Rounded XOR loss minus the relaxed fit ||A - UV||_F^2 of the unrounded factors.
constexpr double loss_gap(double relaxed_fit, count_t rounded_xor_loss) noexcept {
    return static_cast<double>(rounded_xor_loss) - relaxed_fit;
}

/// Metrics of reconstruction `b` against target `a`, with recall* when a ground truth is given.
inline MetricsReport evaluate(const BoolMatrix& a, const BoolMatrix& b, const BoolMatrix* a_star = nullptr) {
    MetricsReport r;
    r.xor_loss = xor_loss(a, b);
    r.similarity = hamming_similarity(a, b);
    r.recall = recall(a, b);
    r.relative_loss = relative_loss(a, b);
    if (a_star) r.recall_star = recall_star(*a_star, b);
    return r;
}

} // namespace elbmf
