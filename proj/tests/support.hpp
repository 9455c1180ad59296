#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "elbmf/elbmf.hpp"

namespace elbmf::oracle {

inline BoolMatrix random_bool(std::size_t rows, std::size_t cols, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution bit(p);
    BoolMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.set(i, j, bit(rng));
    return m;
}

inline RealMatrix random_real(Eigen::Index rows, Eigen::Index cols, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = d(rng);
    return m;
}

/// Brute-force Boolean product: integer product clamped to {0,1}.
inline BoolMatrix naive_product(const BoolMatrix& u, const BoolMatrix& v) {
    BoolMatrix out(u.rows(), v.cols());
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            int sum = 0;
            for (std::size_t l = 0; l < u.cols(); ++l) sum += u(i, l) * v(l, j);
            out.set(i, j, sum > 0);
        }
    return out;
}

// Scalar prox objective 1/2 (x - y)^2 + min over wells w of kappa |y - w| + lambda/2 (y - w)^2.
inline double prox_objective(double x, double y, double kappa, double lambda) {
    auto r = [&](double d) { return kappa * std::abs(d) + 0.5 * lambda * d * d; };
    return 0.5 * (x - y) * (x - y) + std::min(r(y), r(y - 1.0));
}

struct GridMin {
    double arg;
    double value;
};

/**
 * Minimizer of `prox_objective` over the grid y = w + i * 1e-6 inside [-3, 4].
 * The penalty is convex on each side of 1/2, so every side is scanned coarsely
 * and then refined on the fine grid around its coarse minimum.
 */
inline GridMin grid_prox(double x, double kappa, double lambda) {
    constexpr double fine = 1e-6;
    constexpr long coarse_stride = 1000;
    GridMin best{0.0, std::numeric_limits<double>::infinity()};
    struct Side {
        double well;
        long lo, hi;
    };
    // Offsets from the well, in fine steps, covering [-3, 0.5] and (0.5, 4].
    const Side sides[] = {{0.0, -3'000'000, 500'000}, {1.0, -499'999, 3'000'000}};
    for (const auto& s : sides) {
        auto f = [&](long i) { return prox_objective(x, s.well + static_cast<double>(i) * fine, kappa, lambda); };
        long ci = s.lo;
        double cv = f(ci);
        for (long i = s.lo; i <= s.hi; i += coarse_stride)
            if (double v = f(i); v < cv) cv = v, ci = i;
        const long lo = std::max(s.lo, ci - coarse_stride), hi = std::min(s.hi, ci + coarse_stride);
        for (long i = lo; i <= hi; ++i)
            if (double v = f(i); v < best.value) best = {s.well + static_cast<double>(i) * fine, v};
    }
    return best;
}

/// ||A - UV||_F^2 / 2 for central-difference checks.
inline double half_fit(const RealMatrix& a, const RealMatrix& u, const RealMatrix& v) {
    return 0.5 * (a - u * v).squaredNorm();
}

inline RealMatrix numeric_grad_u(const RealMatrix& a, RealMatrix u, const RealMatrix& v, double h) {
    RealMatrix g(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            const double keep = u(i, j);
            u(i, j) = keep + h;
            const double up = half_fit(a, u, v);
            u(i, j) = keep - h;
            const double down = half_fit(a, u, v);
            u(i, j) = keep;
            g(i, j) = (up - down) / (2 * h);
        }
    return g;
}

inline RealMatrix numeric_grad_v(const RealMatrix& a, const RealMatrix& u, RealMatrix v, double h) {
    return numeric_grad_u(a.transpose(), v.transpose(), u.transpose(), h).transpose();
}

/// max |g - ref| / max(1, max |ref|)
inline double relative_error(const RealMatrix& g, const RealMatrix& ref) {
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    return (g - ref).cwiseAbs().maxCoeff() / scale;
}

} // namespace elbmf::oracle
