#pragma once

// Command-line front end. Exit codes: 0 ok, 2 usage, 3 numeric failure, 4 I/O or parse.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "elbmf/elbmf.hpp"

namespace elbmf::cli {

enum exit_code : int { ok = 0, usage = 2, numeric = 3, io_failure = 4 };

namespace fs = std::filesystem;
using nlohmann::json;

/// Metrics of the Boolean reconstruction U o V. Ratios that are undefined for an all-zero target are null.
inline json metrics_json(const BoolMatrix& a, const BoolMatrix& u, const BoolMatrix& v, const BoolMatrix* a_star) {
    if (u.rows() != a.rows() || v.cols() != a.cols() || u.cols() != v.rows())
        throw dimension_error("factors " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + " and " +
                              std::to_string(v.rows()) + "x" + std::to_string(v.cols()) + " do not fit a " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " target");
    const BoolMatrix b = bool_product(u, v);
    json j;
    j["xor_loss"] = xor_loss(a, b);
    j["similarity"] = hamming_similarity(a, b);
    if (a.count() > 0) {
        j["recall"] = recall(a, b);
        j["relative_loss"] = relative_loss(a, b);
    } else {
        j["recall"] = nullptr;
        j["relative_loss"] = nullptr;
    }
    if (a_star) {
        if (a_star->count() > 0)
            j["recall_star"] = recall_star(*a_star, b);
        else
            j["recall_star"] = nullptr;
    }
    return j;
}

struct SolverFlags {
    ElbmfConfig config;
    bool no_nonneg = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--kappa", config.kappa, "l1 coefficient")->capture_default_str();
        cmd.add_option("--lambda", config.lambda, "base l2 coefficient")->capture_default_str();
        cmd.add_option("--rate-base", config.rate_base, "lambda_t = lambda * rate_base^t")->capture_default_str();
        cmd.add_option("--beta", config.beta, "inertial parameter")->capture_default_str();
        cmd.add_option("--max-iters", config.max_iters, "iteration limit")->capture_default_str();
        cmd.add_option("--tol", config.tol, "relative objective change for convergence")->capture_default_str();
        cmd.add_option("--integrality-eps", config.integrality_eps, "Boolean gap for convergence")
            ->capture_default_str();
        cmd.add_option("--seed", config.seed, "random seed")->capture_default_str();
        cmd.add_flag("--no-nonneg", no_nonneg, "allow negative factor entries");
    }

    ElbmfConfig resolve() const {
        ElbmfConfig c = config;
        c.nonneg = !no_nonneg;
        return c;
    }
};

inline void write_trace(const IterationTrace& trace, const fs::path& path) {
    std::ostringstream ss;
    io::write_trace_csv(trace, ss);
    io::write_text(path, ss.str());
}

inline json run_json(const FactorizeResult& r, const BoolMatrix& a) {
    json j;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["trace_cadence"] = r.trace.cadence;
    j["boolean_gap"] = boolean_gap(r.relaxed.u, r.relaxed.v);
    const double fit = (a.to_real() - r.relaxed.u * r.relaxed.v).squaredNorm();
    j["loss_gap"] = loss_gap(fit, xor_loss(a, bool_product(r.u, r.v)));
    j["u_density"] = density(r.u);
    j["v_density"] = density(r.v);
    return j;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline void cmd_factorize(const fs::path& input, std::size_t rank, const SolverFlags& flags,
                          const std::optional<fs::path>& ground_truth, const fs::path& out_dir, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const BoolMatrix a = io::read_bool_matrix(input);
    std::optional<BoolMatrix> a_star;
    if (ground_truth) a_star = io::read_bool_matrix(*ground_truth);
    ElbmfConfig cfg = flags.resolve();
    cfg.rank = rank;
    cfg.validate_for(a.rows(), a.cols());

    const FactorizeResult r = factorize(a, cfg);
    fs::create_directories(out_dir);
    io::write_bool_matrix(r.u, out_dir / "U.mtx");
    io::write_bool_matrix(r.v, out_dir / "V.mtx");
    write_trace(r.trace, out_dir / "trace.csv");

    json s;
    s["command"] = "factorize";
    s["input"] = input.string();
    s["rows"] = a.rows();
    s["cols"] = a.cols();
    s["config"] = io::config_to_json(cfg);
    s["metrics"] = metrics_json(a, r.u, r.v, a_star ? &*a_star : nullptr);
    s["run"] = run_json(r, a);
    s["wall_seconds"] = seconds_since(t0);
    io::write_text(out_dir / "summary.json", s.dump(2) + "\n");
    out << s["metrics"].dump() << '\n';
}

inline void cmd_rank_select(const fs::path& input, std::size_t k_min, std::size_t k_max, std::size_t restarts,
                            std::size_t workers, const SolverFlags& flags, const std::optional<fs::path>& ground_truth,
                            const fs::path& out_dir, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const BoolMatrix a = io::read_bool_matrix(input);
    std::optional<BoolMatrix> a_star;
    if (ground_truth) a_star = io::read_bool_matrix(*ground_truth);
    ElbmfConfig cfg = flags.resolve();
    cfg.rank = k_min;
    cfg.validate();

    const RankSweepResult sweep = rank_select(a, k_min, k_max, cfg, restarts, workers);
    fs::create_directories(out_dir);

    std::ostringstream csv;
    csv << "rank,mdl_bits,aic,xor_loss,seed,iterations\n";
    for (const auto& c : sweep.candidates)
        csv << c.rank << ',' << io::detail::format_double(c.mdl_cost) << ',' << io::detail::format_double(c.aic) << ','
            << c.xor_loss << ',' << c.seed << ',' << c.iterations << '\n';
    io::write_text(out_dir / "sweep.csv", csv.str());
    io::write_bool_matrix(sweep.best.u, out_dir / "U.mtx");
    io::write_bool_matrix(sweep.best.v, out_dir / "V.mtx");
    write_trace(sweep.best.trace, out_dir / "trace.csv");

    json s;
    s["command"] = "rank-select";
    s["input"] = input.string();
    s["rows"] = a.rows();
    s["cols"] = a.cols();
    s["config"] = io::config_to_json(cfg);
    s["config"].erase("rank");
    s["k_min"] = k_min;
    s["k_max"] = k_max;
    s["restarts"] = restarts;
    s["chosen_rank"] = sweep.chosen_rank;
    s["metrics"] = metrics_json(a, sweep.best.u, sweep.best.v, a_star ? &*a_star : nullptr);
    s["run"] = run_json(sweep.best, a);
    s["wall_seconds"] = seconds_since(t0);
    io::write_text(out_dir / "summary.json", s.dump(2) + "\n");
    out << "chosen_rank " << sweep.chosen_rank << '\n';
}

inline Extent parse_extent(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("extent", "expected A:B, got '" + text + "'");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
        Extent e{std::stoul(lo, &used_lo), std::stoul(hi, &used_hi)};
        if (used_lo != lo.size() || used_hi != hi.size()) throw std::invalid_argument(text);
        return e;
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("extent", "expected A:B with non-negative integers, got '" + text + "'");
    }
}

inline void cmd_simulate(const GenConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    const GeneratedData d = generate(cfg);
    fs::create_directories(out_dir);
    io::write_bool_matrix(d.a, out_dir / "A.mtx");
    io::write_bool_matrix(d.a_star, out_dir / "A_star.mtx");
    io::write_text(out_dir / "tiles.json", io::tiles_to_json(cfg, d.tiles).dump(2) + "\n");
    out << "density " << density(d.a) << " planted_rank " << planted_rank(d.tiles, cfg.overlap) << '\n';
}

inline void cmd_eval(const fs::path& input, const fs::path& u_path, const fs::path& v_path,
                     const std::optional<fs::path>& ground_truth, std::ostream& out) {
    const BoolMatrix a = io::read_bool_matrix(input);
    const BoolMatrix u = io::read_bool_matrix(u_path);
    const BoolMatrix v = io::read_bool_matrix(v_path);
    std::optional<BoolMatrix> a_star;
    if (ground_truth) a_star = io::read_bool_matrix(*ground_truth);
    out << metrics_json(a, u, v, a_star ? &*a_star : nullptr).dump(2) << '\n';
}

inline void cmd_trace(const fs::path& run_dir, std::ostream& out) {
    std::istringstream in(io::read_text(run_dir / "trace.csv"));
    io::write_trace_csv(io::read_trace_csv(in), out);
}

/// Parses argv and runs one subcommand. Output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Elastic Boolean matrix factorization"};
    app.require_subcommand(1);

    std::string input, u_path, v_path, ground_truth, out_dir, run_dir;
    std::size_t rank = 0, k_min = 0, k_max = 0, restarts = 3, workers = 1;
    SolverFlags solver;

    auto* fact = app.add_subcommand("factorize", "factorize a Boolean matrix at a fixed rank");
    fact->add_option("--input", input, "target matrix (.mtx or dense .tsv)")->required();
    fact->add_option("--rank", rank, "number of components")->required();
    fact->add_option("--ground-truth", ground_truth, "noise-free matrix for recall*");
    fact->add_option("--out-dir", out_dir, "output directory")->required();
    solver.attach(*fact);

    SolverFlags sweep_solver;
    auto* sel = app.add_subcommand("rank-select", "choose the rank by minimum description length");
    sel->add_option("--input", input, "target matrix")->required();
    sel->add_option("--k-min", k_min, "smallest rank")->required();
    sel->add_option("--k-max", k_max, "largest rank")->required();
    sel->add_option("--restarts", restarts, "seeds per rank")->capture_default_str();
    sel->add_option("--workers", workers, "threads")->capture_default_str();
    sel->add_option("--ground-truth", ground_truth, "noise-free matrix for recall*");
    sel->add_option("--out-dir", out_dir, "output directory")->required();
    sweep_solver.attach(*sel);

    GenConfig gen;
    std::string row_extent, col_extent;
    auto* sim = app.add_subcommand("simulate", "generate a synthetic tiled matrix");
    sim->add_option("--rows", gen.n_rows)->required();
    sim->add_option("--cols", gen.n_cols)->required();
    sim->add_option("--tiles", gen.n_tiles)->required();
    sim->add_option("--row-extent", row_extent, "A:B tile height range")->required();
    sim->add_option("--col-extent", col_extent, "A:B tile width range")->required();
    sim->add_option("--noise", gen.noise_p, "additive noise probability")->required();
    sim->add_flag("--overlap", gen.overlap, "allow tiles to overlap");
    sim->add_option("--seed", gen.seed)->capture_default_str();
    sim->add_option("--out-dir", out_dir, "output directory")->required();

    auto* ev = app.add_subcommand("eval", "metrics of U o V against a target");
    ev->add_option("--input", input, "target matrix")->required();
    ev->add_option("--u", u_path, "left factor")->required();
    ev->add_option("--v", v_path, "right factor")->required();
    ev->add_option("--ground-truth", ground_truth, "noise-free matrix for recall*");

    auto* tr = app.add_subcommand("trace", "re-emit a run's iteration trace as CSV");
    tr->add_option("--run-dir", run_dir, "directory written by factorize")->required();

    auto gt = [&]() -> std::optional<fs::path> {
        if (ground_truth.empty()) return std::nullopt;
        return fs::path(ground_truth);
    };

    try {
        app.parse(argc, argv);
        if (*fact)
            cmd_factorize(input, rank, solver, gt(), out_dir, out);
        else if (*sel)
            cmd_rank_select(input, k_min, k_max, restarts, workers, sweep_solver, gt(), out_dir, out);
        else if (*sim) {
            gen.row_extent = parse_extent(row_extent);
            gen.col_extent = parse_extent(col_extent);
            cmd_simulate(gen, out_dir, out);
        } else if (*ev)
            cmd_eval(input, u_path, v_path, gt(), out);
        else if (*tr)
            cmd_trace(run_dir, out);
        return ok;
    } catch (const CLI::Success&) {
        out << app.help();
        return ok;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const numeric_error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return numeric;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << '\n';
        return io_failure;
    } catch (const io_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return io_failure;
    } catch (const fs::filesystem_error& e) {
        err << "i/o error: " << e.what() << '\n';
        return io_failure;
    } catch (const nlohmann::json::exception& e) {
        err << "parse error: " << e.what() << '\n';
        return io_failure;
    } catch (const dimension_error& e) {
        err << "shape mismatch: " << e.what() << '\n';
        return io_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const placement_error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
}

} // namespace elbmf::cli
