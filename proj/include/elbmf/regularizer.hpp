#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bool_matrix.hpp"

namespace elbmf {

/// Coefficients of the elastic net r(x) = kappa |x| + lambda x^2.
struct RegCoeffs {
    double kappa = 0.0;
    double lambda = 0.0;

    void validate() const {
        if (!(kappa >= 0.0) || !(lambda >= 0.0))
            throw std::invalid_argument("regularizer coefficients must be non-negative");
    }
};

/// sign with sign(0) == 0, which keeps 0 and 1 exact fixed points of the prox.
constexpr double sign(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline double elastic_net(double x, const RegCoeffs& c) noexcept {
    if (x == 0.0) return 0.0;
    return c.kappa * std::abs(x) + c.lambda * x * x;
}

/// Elastic-binary penalty: W-shaped with zeros at exactly 0 and 1.
inline double elb(double x, const RegCoeffs& c) noexcept {
    return std::min(elastic_net(x, c), elastic_net(x - 1.0, c));
}

inline double elb(const RealMatrix& x, const RegCoeffs& c) noexcept {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        for (Eigen::Index i = 0; i < x.rows(); ++i) sum += elb(x(i, j), c);
    return sum;
}

/**
 * Scalar proximal map of the elastic-binary penalty.
 *
 * Values at or below 1/2 are pulled toward the 0 well, values above 1/2
 * toward the 1 well. Within a well the map is the elastic-net prox
 * (soft-threshold by kappa, then shrink by 1/(1+lambda)), i.e. the exact
 * minimizer of 1/2 (x - y)^2 + kappa |y - w| + lambda/2 (y - w)^2 for the
 * selected well w. Outside the kappa band around the well this is the affine
 * form `prox_scalar_affine`. lambda may be +inf (the rounding limit).
 */
inline double prox_scalar(double x, const RegCoeffs& c) noexcept {
    const double well = x <= 0.5 ? 0.0 : 1.0;
    const double d = x - well;
    const double shrunk = std::max(std::abs(d) - c.kappa, 0.0);
    if (shrunk == 0.0) return well;
    return well + sign(d) * shrunk / (1.0 + c.lambda);
}

/// The unthresholded affine branches. Agrees with `prox_scalar` whenever x is
/// at least kappa away from its well; inside that band it overshoots past the well.
inline double prox_scalar_affine(double x, const RegCoeffs& c) noexcept {
    if (x <= 0.5) return (x - c.kappa * sign(x)) / (1.0 + c.lambda);
    return (x - c.kappa * sign(x - 1.0) + c.lambda) / (1.0 + c.lambda);
}

/// Alternative operator obtained by swapping x and y in the fit term. Not
/// used by the solver. Throws std::domain_error for lambda == 1.
inline double prox_scalar_alt(double x, const RegCoeffs& c) {
    if (c.lambda == 1.0) throw std::domain_error("prox_scalar_alt: lambda == 1 makes the denominator singular");
    const double inv = 1.0 / (c.lambda - 1.0);
    if (x <= 0.5) return inv * (-x - c.kappa * sign(x));
    return inv * (-x - c.kappa * sign(x - 1.0) + c.lambda);
}

inline double prox_nonneg_scalar(double x, const RegCoeffs& c) noexcept { return std::max(0.0, prox_scalar(x, c)); }

inline void prox_inplace(RealMatrix& x, const RegCoeffs& c, bool nonneg) noexcept {
    if (nonneg)
        x = x.unaryExpr([&c](double v) { return prox_nonneg_scalar(v, c); });
    else
        x = x.unaryExpr([&c](double v) { return prox_scalar(v, c); });
}

inline RealMatrix prox_matrix(const RealMatrix& x, const RegCoeffs& c, bool nonneg) {
    RealMatrix out = x;
    prox_inplace(out, c, nonneg);
    return out;
}

} // namespace elbmf
