#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bool_matrix.hpp"
#include "datagen.hpp"
#include "errors.hpp"
#include "optimizer.hpp"

namespace elbmf::io {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
    T value{};
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw parse_error("invalid " + std::string(what) + " '" + std::string(tok) + "'", line);
    return value;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

inline bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline constexpr std::string_view matrix_market_banner = "%%MatrixMarket matrix coordinate pattern general";

/**
 * Reads a Matrix Market coordinate matrix with general symmetry. Pattern
 * entries are ones; integer/real entries are ones when nonzero. Indices are
 * 1-based. Out-of-range or repeated positions are parse errors.
 */
inline BoolMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw parse_error("empty input, expected a MatrixMarket banner", 1);
    ++lineno;
    const auto banner = detail::split_ws(line);
    if (banner.size() != 5 || detail::lower(banner[0]) != "%%matrixmarket" || detail::lower(banner[1]) != "matrix")
        throw parse_error("malformed MatrixMarket banner", lineno);
    if (detail::lower(banner[2]) != "coordinate") throw parse_error("only coordinate format is supported", lineno);
    const std::string field = detail::lower(banner[3]);
    if (field != "pattern" && field != "integer" && field != "real")
        throw parse_error("unsupported field '" + field + "'", lineno);
    if (detail::lower(banner[4]) != "general") throw parse_error("only general symmetry is supported", lineno);
    const bool has_value = field != "pattern";

    std::size_t rows = 0, cols = 0, nnz = 0;
    bool have_size = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.starts_with('%') || detail::blank(line)) continue;
        const auto tok = detail::split_ws(line);
        if (tok.size() != 3) throw parse_error("size line must hold rows, cols and entry count", lineno);
        rows = detail::parse_number<std::size_t>(tok[0], lineno, "row count");
        cols = detail::parse_number<std::size_t>(tok[1], lineno, "column count");
        nnz = detail::parse_number<std::size_t>(tok[2], lineno, "entry count");
        have_size = true;
        break;
    }
    if (!have_size) throw parse_error("missing size line", lineno);

    BoolMatrix m(rows, cols);
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.starts_with('%') || detail::blank(line)) continue;
        if (seen == nnz) throw parse_error("more entries than the declared " + std::to_string(nnz), lineno);
        const auto tok = detail::split_ws(line);
        if (tok.size() != (has_value ? 3u : 2u)) throw parse_error("wrong number of fields in entry", lineno);
        const auto i = detail::parse_number<std::size_t>(tok[0], lineno, "row index");
        const auto j = detail::parse_number<std::size_t>(tok[1], lineno, "column index");
        if (i == 0 || j == 0 || i > rows || j > cols)
            throw parse_error("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                                  std::to_string(rows) + "x" + std::to_string(cols),
                              lineno);
        if (m.get(i - 1, j - 1))
            throw parse_error("duplicate entry (" + std::to_string(i) + ", " + std::to_string(j) + ")", lineno);
        const bool one = has_value ? detail::parse_number<double>(tok[2], lineno, "value") != 0.0 : true;
        if (one) m.set(i - 1, j - 1, true);
        ++seen;
    }
    if (seen != nnz)
        throw parse_error("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen), lineno);
    return m;
}

inline void write_matrix_market(const BoolMatrix& m, std::ostream& out) {
    out << matrix_market_banner << '\n';
    out << m.rows() << ' ' << m.cols() << ' ' << m.count() << '\n';
    for (const auto& c : m.coordinates()) out << c.row + 1 << ' ' << c.col + 1 << '\n';
}

/// Dense 0/1 text, one row per line, cells separated by tabs or spaces.
inline BoolMatrix read_dense_tsv(std::istream& in) {
    std::vector<std::vector<bool>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::blank(line)) continue;
        const auto tok = detail::split_ws(line);
        if (rows.empty())
            width = tok.size();
        else if (tok.size() != width)
            throw parse_error("row has " + std::to_string(tok.size()) + " cells, expected " + std::to_string(width),
                              lineno);
        std::vector<bool> row(width);
        for (std::size_t j = 0; j < width; ++j) {
            if (tok[j] == "1")
                row[j] = true;
            else if (tok[j] != "0")
                throw parse_error("cell '" + std::string(tok[j]) + "' is not 0 or 1", lineno);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("no rows in dense matrix", lineno);
    BoolMatrix m(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j)
            if (rows[i][j]) m.set(i, j, true);
    return m;
}

inline void write_dense_tsv(const BoolMatrix& m, std::ostream& out) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << '\t';
            out << (m.get(i, j) ? '1' : '0');
        }
        out << '\n';
    }
}

/// Chooses the format from content: a MatrixMarket banner, otherwise dense TSV.
inline BoolMatrix read_bool_matrix(std::istream& in) {
    const int first = in.peek();
    if (first == '%') return read_matrix_market(in);
    return read_dense_tsv(in);
}

inline BoolMatrix read_bool_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    try {
        return read_bool_matrix(in);
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.reason, e.line);
    }
}

/// `.tsv` and `.txt` are written dense; everything else as MatrixMarket.
inline void write_bool_matrix(const BoolMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path.string());
    const auto ext = detail::lower(path.extension().string());
    if (ext == ".tsv" || ext == ".txt")
        write_dense_tsv(m, out);
    else
        write_matrix_market(m, out);
    if (!out) throw io_error("failed writing " + path.string());
}

inline constexpr std::string_view trace_header =
    "iter,lambda_t,relaxed_objective,rounded_loss,boolean_gap,bit_flips,cumulative_flips,seconds";

/// Trace as CSV. Doubles carry 17 significant digits so reading back is exact.
inline void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
    out << trace_header << '\n';
    for (const auto& r : trace.records) {
        out << r.iter << ',' << detail::format_double(r.lambda_t) << ',' << detail::format_double(r.relaxed_objective)
            << ',' << r.rounded_loss << ',' << detail::format_double(r.boolean_gap) << ',' << r.bit_flips << ','
            << detail::format_double(r.cumulative_flips) << ',' << detail::format_double(r.seconds) << '\n';
    }
}

/// Parses a trace CSV. The cadence is inferred from the first two iteration numbers.
inline IterationTrace read_trace_csv(std::istream& in) {
    IterationTrace trace;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw parse_error("empty trace", 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != trace_header) throw parse_error("unexpected trace header", lineno);
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::blank(line)) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            f.push_back(rest.substr(0, pos));
        f.push_back(rest);
        if (f.size() != 8) throw parse_error("trace row needs 8 fields", lineno);
        IterationRecord r;
        r.iter = detail::parse_number<std::size_t>(f[0], lineno, "iter");
        r.lambda_t = detail::parse_number<double>(f[1], lineno, "lambda_t");
        r.relaxed_objective = detail::parse_number<double>(f[2], lineno, "relaxed_objective");
        r.rounded_loss = detail::parse_number<count_t>(f[3], lineno, "rounded_loss");
        r.boolean_gap = detail::parse_number<double>(f[4], lineno, "boolean_gap");
        r.bit_flips = detail::parse_number<count_t>(f[5], lineno, "bit_flips");
        r.cumulative_flips = detail::parse_number<double>(f[6], lineno, "cumulative_flips");
        r.seconds = detail::parse_number<double>(f[7], lineno, "seconds");
        trace.records.push_back(r);
    }
    if (trace.records.size() >= 2) trace.cadence = trace.records[1].iter - trace.records[0].iter;
    return trace;
}

inline nlohmann::json tiles_to_json(const GenConfig& cfg, const std::vector<TileSpec>& tiles) {
    nlohmann::json j;
    j["rows"] = cfg.n_rows;
    j["cols"] = cfg.n_cols;
    j["noise"] = cfg.noise_p;
    j["overlap"] = cfg.overlap;
    j["seed"] = cfg.seed;
    j["planted_rank"] = planted_rank(tiles, cfg.overlap);
    j["tiles"] = nlohmann::json::array();
    for (const auto& t : tiles)
        j["tiles"].push_back(
            {{"row_start", t.row_start}, {"row_len", t.row_len}, {"col_start", t.col_start}, {"col_len", t.col_len}});
    return j;
}

inline std::vector<TileSpec> tiles_from_json(const nlohmann::json& j) {
    std::vector<TileSpec> tiles;
    for (const auto& t : j.at("tiles"))
        tiles.push_back({t.at("row_start").get<std::size_t>(), t.at("row_len").get<std::size_t>(),
                         t.at("col_start").get<std::size_t>(), t.at("col_len").get<std::size_t>()});
    return tiles;
}

inline nlohmann::json config_to_json(const ElbmfConfig& c) {
    return {{"rank", c.rank},           {"kappa", c.kappa},
            {"lambda", c.lambda},       {"rate_base", c.rate_base},
            {"beta", c.beta},           {"max_iters", c.max_iters},
            {"tol", c.tol},             {"integrality_eps", c.integrality_eps},
            {"seed", c.seed},           {"nonneg", c.nonneg}};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path.string());
    out << text;
    if (!out) throw io_error("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace elbmf::io
