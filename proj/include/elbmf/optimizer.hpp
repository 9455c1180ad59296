#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bool_matrix.hpp"
#include "metrics.hpp"
#include "regularizer.hpp"

namespace elbmf {

/// Solver hyper-parameters. Defaults are the large-dataset regime
/// (kappa = 0.005, lambda = 0.001, nu_t = 1.0033^t, 1500 iterations).
struct ElbmfConfig {
    std::size_t rank = 1;
    double kappa = 0.005;
    double lambda = 0.001;
    double rate_base = 1.0033; ///< lambda_t = lambda * rate_base^t
    double beta = 0.0;         ///< inertia; 0 is plain PALM
    std::size_t max_iters = 1500;
    double tol = 1e-7;               ///< relative objective change over the convergence window
    double integrality_eps = 1e-8;   ///< Boolean gap below which factors count as Boolean
    std::uint64_t seed = 0;
    bool nonneg = true;

    void validate() const {
        if (rank == 0) throw std::invalid_argument("rank must be positive");
        if (!(kappa >= 0.0) || !(lambda >= 0.0)) throw std::invalid_argument("kappa and lambda must be non-negative");
        if (!(rate_base >= 1.0) || !std::isfinite(rate_base)) throw std::invalid_argument("rate_base must be >= 1");
        if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be non-negative");
        if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
        if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
        if (!(integrality_eps > 0.0)) throw std::invalid_argument("integrality_eps must be positive");
    }

    void validate_for(std::size_t rows, std::size_t cols) const {
        validate();
        if (rows == 0 || cols == 0) throw std::invalid_argument("target matrix is empty");
        if (rank > std::min(rows, cols))
            throw std::invalid_argument("rank " + std::to_string(rank) + " exceeds min(n, m) = " +
                                        std::to_string(std::min(rows, cols)));
    }

    /// Regularization weight at (1-based) iteration t.
    double lambda_at(std::size_t t) const { return lambda * std::pow(rate_base, static_cast<double>(t)); }
};

/// Relaxed factors: U is n x k, V is k x m.
struct FactorPair {
    RealMatrix u;
    RealMatrix v;
};

struct IterationRecord {
    std::size_t iter = 0;
    double lambda_t = 0.0;
    double relaxed_objective = 0.0;
    double relaxed_fit = 0.0; ///< ||A - UV||_F^2, no regularizer
    count_t rounded_loss = 0;
    double boolean_gap = 0.0;
    count_t bit_flips = 0;
    double cumulative_flips = 0.0; ///< running sum of bit_flips / (n m)
    double seconds = 0.0;
};

struct IterationTrace {
    std::size_t cadence = 1; ///< a record is kept for every cadence-th iteration
    std::vector<IterationRecord> records;
};

struct FactorizeResult {
    BoolMatrix u;
    BoolMatrix v;
    FactorPair relaxed; ///< factors before the final rounding
    IterationTrace trace;
    std::size_t iterations = 0;
    bool converged = false;
};

enum class Side { U, V };

/// Per half-step prox coefficients: kappa, the current lambda_t, inertia and projection.
struct StepParams {
    double kappa = 0.0;
    double lambda_t = 0.0;
    double beta = 0.0;
    bool nonneg = true;
};

inline constexpr double lipschitz_floor = 1e-12;
inline constexpr std::size_t convergence_window = 10;
inline constexpr count_t dense_trace_cells = 1'000'000;

inline FactorPair init_factors(std::size_t n, std::size_t m, std::size_t k, std::uint64_t seed) {
    if (n == 0 || m == 0 || k == 0) throw std::invalid_argument("init_factors: dimensions must be positive");
    if (k > std::min(n, m)) throw std::invalid_argument("init_factors: rank exceeds min(n, m)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    FactorPair p{RealMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)),
                 RealMatrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m))};
    for (Eigen::Index i = 0; i < p.u.rows(); ++i)
        for (Eigen::Index j = 0; j < p.u.cols(); ++j) p.u(i, j) = unit(rng);
    for (Eigen::Index i = 0; i < p.v.rows(); ++i)
        for (Eigen::Index j = 0; j < p.v.cols(); ++j) p.v(i, j) = unit(rng);
    return p;
}

namespace detail {

inline void require_conformant(const RealMatrix& a, const RealMatrix& u, const RealMatrix& v, const char* op) {
    if (u.cols() != v.rows() || a.rows() != u.rows() || a.cols() != v.cols())
        throw dimension_error(std::string(op) + ": A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              ", U is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + ", V is " +
                              std::to_string(v.rows()) + "x" + std::to_string(v.cols()));
}

} // namespace detail

/// Gradient of 1/2 ||A - UV||_F^2 with respect to U: U (V V^T) - A V^T.
inline RealMatrix grad_u(const RealMatrix& a, const RealMatrix& u, const RealMatrix& v) {
    detail::require_conformant(a, u, v, "grad_u");
    return u * (v * v.transpose()) - a * v.transpose();
}

/// Gradient of 1/2 ||A - UV||_F^2 with respect to V: (U^T U) V - U^T A.
inline RealMatrix grad_v(const RealMatrix& a, const RealMatrix& u, const RealMatrix& v) {
    detail::require_conformant(a, u, v, "grad_v");
    return (u.transpose() * u) * v - u.transpose() * a;
}

/**
 * Spectral norm of a symmetric PSD matrix by power iteration.
 *
 * Starts from the all-ones vector, stops when the Rayleigh quotient changes by
 * less than 1e-6 relative or after 1000 iterations, and never returns less
 * than `lipschitz_floor`.
 */
inline double lipschitz(const RealMatrix& gram) {
    if (gram.rows() != gram.cols()) throw dimension_error("lipschitz: matrix must be square");
    if (gram.size() == 0) return lipschitz_floor;
    constexpr double rel_tol = 1e-6;
    constexpr int max_iter = 1000;

    Eigen::VectorXd x = Eigen::VectorXd::Ones(gram.rows());
    x.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd y = gram * x;
        const double next = x.dot(y);
        const double norm = y.norm();
        if (!(norm > 0.0)) {
            estimate = std::max(estimate, next);
            break;
        }
        x = y / norm;
        const bool done = it > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next);
        estimate = next;
        if (done) break;
    }
    return std::max(std::abs(estimate), lipschitz_floor);
}

/**
 * One proximal linearized step for one factor with the other held fixed.
 *
 * Extrapolates `moving` by beta (moving - prev_moving), takes a gradient step
 * of length 1/L with L the spectral norm of the fixed factor's Gram matrix,
 * then applies the elastic-binary prox with coefficients (kappa/L, lambda_t/L).
 */
inline RealMatrix half_step(const RealMatrix& a, const RealMatrix& fixed, const RealMatrix& moving,
                            const RealMatrix& prev_moving, Side side, const StepParams& p) {
    if (moving.rows() != prev_moving.rows() || moving.cols() != prev_moving.cols())
        throw dimension_error("half_step: moving and previous iterate differ in shape");
    if (p.beta < 0.0) throw std::invalid_argument("half_step: beta must be non-negative");

    RealMatrix x = p.beta == 0.0 ? moving : RealMatrix(moving + p.beta * (moving - prev_moving));
    RealMatrix grad;
    double lip = 0.0;
    if (side == Side::U) {
        detail::require_conformant(a, x, fixed, "half_step");
        const RealMatrix gram = fixed * fixed.transpose();
        grad = x * gram - a * fixed.transpose();
        lip = lipschitz(gram);
    } else {
        detail::require_conformant(a, fixed, x, "half_step");
        const RealMatrix gram = fixed.transpose() * fixed;
        grad = gram * x - fixed.transpose() * a;
        lip = lipschitz(gram);
    }
    if (!grad.allFinite())
        throw numeric_error(std::string("non-finite gradient in the ") + (side == Side::U ? "U" : "V") + " step");

    x -= grad / lip;
    prox_inplace(x, RegCoeffs{p.kappa / lip, p.lambda_t / lip}, p.nonneg);
    return x;
}

/// 1/2 ||A - UV||_F^2 + R(U) + R(V) for the elastic-binary penalty R with coefficients `c`.
inline double relaxed_objective(const RealMatrix& a, const RealMatrix& u, const RealMatrix& v, const RegCoeffs& c) {
    detail::require_conformant(a, u, v, "relaxed_objective");
    return 0.5 * (a - u * v).squaredNorm() + elb(u, c) + elb(v, c);
}

/// Threshold at 1/2; the boundary maps to 0.
inline std::pair<BoolMatrix, BoolMatrix> binarize(const FactorPair& p) {
    return {BoolMatrix::from_real(p.u), BoolMatrix::from_real(p.v)};
}

/// Clears components whose U column or V row is empty, so they hold no ones at all. U o V is unchanged.
inline void drop_empty_components(BoolMatrix& u, BoolMatrix& v) {
    if (u.cols() != v.rows()) throw dimension_error("drop_empty_components: inner dimensions differ");
    for (std::size_t l = 0; l < u.cols(); ++l) {
        bool u_empty = true, v_empty = true;
        for (std::size_t i = 0; i < u.rows() && u_empty; ++i) u_empty = !u(i, l);
        for (std::size_t j = 0; j < v.cols() && v_empty; ++j) v_empty = !v(l, j);
        if (u_empty == v_empty) continue;
        for (std::size_t i = 0; i < u.rows(); ++i) u.set(i, l, false);
        for (std::size_t j = 0; j < v.cols(); ++j) v.set(l, j, false);
    }
}

/**
 * Proximal alternating linearized minimization with a growing l2 rate.
 *
 * Each iteration updates U then V via `half_step` with lambda_t = lambda *
 * rate_base^t. Stops after `max_iters`, or once the Boolean gap is at most
 * `integrality_eps` and the objective moved by at most `tol` (relative) over
 * the last `convergence_window` iterations, or when lambda_t overflows. The
 * factors are then thresholded at 1/2 and empty components are cleared.
 *
 * The traced objective uses quadratic weight lambda_t / 2: that is the
 * penalty whose exact prox is the step above, so with beta = 0 and a constant
 * rate the traced objective is non-increasing.
 */
inline FactorizeResult factorize(const BoolMatrix& target, const ElbmfConfig& config) {
    config.validate_for(target.rows(), target.cols());
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();

    const RealMatrix a = target.to_real();
    FactorPair cur = init_factors(target.rows(), target.cols(), config.rank, config.seed);
    FactorPair prev = cur;

    FactorizeResult result;
    result.trace.cadence = target.size() <= dense_trace_cells ? 1 : 10;
    const double cells = static_cast<double>(target.size());

    BoolMatrix prev_recon = [&] {
        auto [bu, bv] = binarize(cur);
        return bool_product(bu, bv);
    }();
    double cumulative = 0.0;
    std::deque<double> window;

    for (std::size_t t = 1; t <= config.max_iters; ++t) {
        const double lambda_t = config.lambda_at(t);
        if (!std::isfinite(lambda_t)) break;
        const StepParams step{config.kappa, lambda_t, config.beta, config.nonneg};

        RealMatrix next_u = half_step(a, cur.v, cur.u, prev.u, Side::U, step);
        prev.u = std::move(cur.u);
        cur.u = std::move(next_u);
        RealMatrix next_v = half_step(a, cur.u, cur.v, prev.v, Side::V, step);
        prev.v = std::move(cur.v);
        cur.v = std::move(next_v);
        result.iterations = t;

        const double fit = (a - cur.u * cur.v).squaredNorm();
        const RegCoeffs penalty{config.kappa, 0.5 * lambda_t};
        const double objective = 0.5 * fit + elb(cur.u, penalty) + elb(cur.v, penalty);
        if (!std::isfinite(objective))
            throw numeric_error("non-finite objective at iteration " + std::to_string(t));
        const double gap = boolean_gap(cur.u, cur.v);

        if ((t - 1) % result.trace.cadence == 0) {
            auto [bu, bv] = binarize(cur);
            BoolMatrix recon = bool_product(bu, bv);
            const count_t flips = xor_loss(prev_recon, recon);
            cumulative += static_cast<double>(flips) / cells;
            IterationRecord rec;
            rec.iter = t;
            rec.lambda_t = lambda_t;
            rec.relaxed_objective = objective;
            rec.relaxed_fit = fit;
            rec.rounded_loss = xor_loss(target, recon);
            rec.boolean_gap = gap;
            rec.bit_flips = flips;
            rec.cumulative_flips = cumulative;
            rec.seconds = std::chrono::duration<double>(clock::now() - start).count();
            result.trace.records.push_back(rec);
            prev_recon = std::move(recon);
        }

        window.push_back(objective);
        if (window.size() > convergence_window + 1) window.pop_front();
        if (gap <= config.integrality_eps && window.size() == convergence_window + 1) {
            const double change = std::abs(window.back() - window.front());
            if (change <= config.tol * std::abs(window.front())) {
                result.converged = true;
                break;
            }
        }
    }

    std::tie(result.u, result.v) = binarize(cur);
    drop_empty_components(result.u, result.v);
    result.relaxed = std::move(cur);
    return result;
}

} // namespace elbmf
