#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bool_matrix.hpp"

namespace elbmf {

/// Inclusive integer range.
struct Extent {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

struct GenConfig {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::size_t n_tiles = 0;
    Extent row_extent;
    Extent col_extent;
    double noise_p = 0.0;
    bool overlap = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_rows == 0 || n_cols == 0) throw std::invalid_argument("generator: matrix dimensions must be positive");
        if (row_extent.lo == 0 || row_extent.lo > row_extent.hi || row_extent.hi > n_rows)
            throw std::invalid_argument("generator: row extent must satisfy 1 <= lo <= hi <= rows");
        if (col_extent.lo == 0 || col_extent.lo > col_extent.hi || col_extent.hi > n_cols)
            throw std::invalid_argument("generator: column extent must satisfy 1 <= lo <= hi <= cols");
        if (!(noise_p >= 0.0 && noise_p <= 1.0)) throw std::invalid_argument("generator: noise must lie in [0, 1]");
    }
};

/// Axis-aligned block of consecutive rows and columns.
struct TileSpec {
    std::size_t row_start = 0;
    std::size_t row_len = 0;
    std::size_t col_start = 0;
    std::size_t col_len = 0;

    std::size_t area() const noexcept { return row_len * col_len; }

    bool intersects(const TileSpec& o) const noexcept {
        return row_start < o.row_start + o.row_len && o.row_start < row_start + row_len &&
               col_start < o.col_start + o.col_len && o.col_start < col_start + col_len;
    }

    friend bool operator==(const TileSpec&, const TileSpec&) = default;
};

struct GeneratedData {
    BoolMatrix a;      ///< tiles plus additive noise
    BoolMatrix a_star; ///< tiles only
    std::vector<TileSpec> tiles;
};

inline constexpr std::size_t max_consecutive_rejections = 10'000;

/**
 * Places `n_tiles` random tiles, then ORs i.i.d. Bernoulli(noise_p) ones over
 * every cell. Without `overlap`, a drawn tile intersecting an earlier one is
 * rejected and redrawn; 10,000 rejections in a row raise placement_error.
 */
inline GeneratedData generate(const GenConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> row_len(cfg.row_extent.lo, cfg.row_extent.hi);
    std::uniform_int_distribution<std::size_t> col_len(cfg.col_extent.lo, cfg.col_extent.hi);

    auto draw = [&] {
        TileSpec t;
        t.row_len = row_len(rng);
        t.col_len = col_len(rng);
        t.row_start = std::uniform_int_distribution<std::size_t>(0, cfg.n_rows - t.row_len)(rng);
        t.col_start = std::uniform_int_distribution<std::size_t>(0, cfg.n_cols - t.col_len)(rng);
        return t;
    };

    GeneratedData out{BoolMatrix(cfg.n_rows, cfg.n_cols), {}, {}};
    out.tiles.reserve(cfg.n_tiles);
    while (out.tiles.size() < cfg.n_tiles) {
        TileSpec t = draw();
        if (!cfg.overlap) {
            std::size_t rejections = 0;
            auto clashes = [&](const TileSpec& c) {
                for (const auto& placed : out.tiles)
                    if (c.intersects(placed)) return true;
                return false;
            };
            while (clashes(t)) {
                if (++rejections >= max_consecutive_rejections)
                    throw placement_error("placement infeasible: tile " + std::to_string(out.tiles.size() + 1) +
                                          " rejected " + std::to_string(rejections) + " times in a row");
                t = draw();
            }
        }
        out.tiles.push_back(t);
    }

    for (const auto& t : out.tiles)
        for (std::size_t i = t.row_start; i < t.row_start + t.row_len; ++i)
            for (std::size_t j = t.col_start; j < t.col_start + t.col_len; ++j) out.a.set(i, j, true);
    out.a_star = out.a;

    if (cfg.noise_p > 0.0) {
        std::bernoulli_distribution noise(cfg.noise_p);
        for (std::size_t i = 0; i < cfg.n_rows; ++i)
            for (std::size_t j = 0; j < cfg.n_cols; ++j)
                if (noise(rng)) out.a.set(i, j, true);
    }
    return out;
}

/// Rank of the planted structure: exact for disjoint tiles, an upper bound with overlap.
inline std::size_t planted_rank(const std::vector<TileSpec>& tiles, bool /*overlap*/) noexcept { return tiles.size(); }

} // namespace elbmf
