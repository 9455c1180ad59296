#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bool_matrix.hpp"
#include "optimizer.hpp"

namespace elbmf {

/// log2 of the binomial coefficient C(size, ones), via log-gamma.
inline double log_binomial(count_t size, count_t ones) {
    if (ones > size)
        throw std::invalid_argument("log_binomial: " + std::to_string(ones) + " ones exceed length " +
                                    std::to_string(size));
    if (ones == 0 || ones == size) return 0.0;
    const auto n = static_cast<double>(size);
    const auto k = static_cast<double>(ones);
    return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) / std::numbers::ln2;
}

/**
 * Description length in bits of A under the Boolean factorization U o V:
 * the error matrix, every column of U and row of V as log-binomial codes,
 * plus k log2(n m) for the components.
 */
inline double mdl_cost(const BoolMatrix& a, const BoolMatrix& u, const BoolMatrix& v, std::size_t k) {
    if (u.cols() != k || v.rows() != k)
        throw dimension_error("mdl_cost: factors carry " + std::to_string(u.cols()) + "/" + std::to_string(v.rows()) +
                              " components, expected " + std::to_string(k));
    const BoolMatrix recon = bool_product(u, v);
    double bits = log_binomial(a.size(), xor_loss(a, recon));

    const BoolMatrix ut = u.transpose();
    for (std::size_t i = 0; i < k; ++i) {
        count_t u_ones = 0;
        count_t v_ones = 0;
        for (std::size_t w = 0; w < ut.words_per_row(); ++w) u_ones += std::popcount(ut.row_data(i)[w]);
        for (std::size_t w = 0; w < v.words_per_row(); ++w) v_ones += std::popcount(v.row_data(i)[w]);
        bits += log_binomial(u.rows(), u_ones) + log_binomial(v.cols(), v_ones);
    }
    bits += static_cast<double>(k) * std::log2(static_cast<double>(a.size()));
    return bits;
}

inline double mdl_cost(const BoolMatrix& a, const BoolMatrix& u, const BoolMatrix& v) {
    return mdl_cost(a, u, v, u.cols());
}

inline constexpr double aic_epsilon = 1e-12;

/// AIC-style score 2 k (n + m) + n m log2(loss / (n m) + eps). Reported only; never selects the rank.
inline double aic_cost(std::size_t n, std::size_t m, std::size_t k, count_t xor_loss_value) {
    const double cells = static_cast<double>(n) * static_cast<double>(m);
    return 2.0 * static_cast<double>(k) * static_cast<double>(n + m) +
           cells * std::log2(static_cast<double>(xor_loss_value) / cells + aic_epsilon);
}

struct RankCandidate {
    std::size_t rank = 0;
    double mdl_cost = 0.0;
    double aic = 0.0;
    count_t xor_loss = 0;
    std::uint64_t seed = 0; ///< seed of the best restart
    std::size_t iterations = 0;
};

struct RankSweepResult {
    std::vector<RankCandidate> candidates; ///< ordered by rank
    std::size_t chosen_rank = 0;
    FactorizeResult best; ///< winning factorization at the chosen rank
};

/**
 * Factorizes A at every rank in [k_min, k_max] with `restarts` seeds
 * (base seed, base seed + 1, ...), keeps the lowest-loss run per rank and
 * scores it by MDL. The chosen rank minimizes MDL, ties going to the smaller
 * rank. Ranks may run on up to `workers` threads; output does not depend on it.
 */
inline RankSweepResult rank_select(const BoolMatrix& a, std::size_t k_min, std::size_t k_max,
                                   const ElbmfConfig& base_config, std::size_t restarts = 3,
                                   std::size_t workers = 1) {
    if (k_min == 0 || k_min > k_max || k_max > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("rank_select: need 1 <= k_min <= k_max <= min(n, m), got [" +
                                    std::to_string(k_min) + ", " + std::to_string(k_max) + "]");
    if (restarts == 0) throw std::invalid_argument("rank_select: restarts must be positive");

    const std::size_t count = k_max - k_min + 1;
    std::vector<RankCandidate> candidates(count);
    std::vector<std::optional<FactorizeResult>> runs(count);

    auto solve = [&](std::size_t idx) {
        const std::size_t k = k_min + idx;
        std::optional<FactorizeResult> best;
        count_t best_loss = std::numeric_limits<count_t>::max();
        std::uint64_t best_seed = 0;
        for (std::size_t r = 0; r < restarts; ++r) {
            ElbmfConfig cfg = base_config;
            cfg.rank = k;
            cfg.seed = base_config.seed + r;
            FactorizeResult run = factorize(a, cfg);
            const count_t loss = xor_loss(a, bool_product(run.u, run.v));
            if (loss < best_loss) {
                best_loss = loss;
                best_seed = cfg.seed;
                best = std::move(run);
            }
        }
        candidates[idx] = {k,         mdl_cost(a, best->u, best->v, k), aic_cost(a.rows(), a.cols(), k, best_loss),
                           best_loss, best_seed,                        best->iterations};
        runs[idx] = std::move(best);
    };

    workers = std::clamp<std::size_t>(workers, 1, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) solve(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < count; i = next++) solve(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RankSweepResult out;
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < count; ++i)
        if (candidates[i].mdl_cost < candidates[best_idx].mdl_cost) best_idx = i;
    out.chosen_rank = candidates[best_idx].rank;
    out.best = std::move(*runs[best_idx]);
    out.candidates = std::move(candidates);
    return out;
}

} // namespace elbmf
