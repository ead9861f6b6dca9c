// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: chain ingestion from JSON specs or builder flags,
// spectrum/gap/bounds/separation computations, and the normalized
// Metropolis-gap sweeps.  Output is CSV (shortest round-trip doubles, LF
// endings) or JSON.  Exit codes: 0 success, 2 configuration or parse
// failure, 3 numeric failure.

#ifndef BDSPEC_CLI_HPP
#define BDSPEC_CLI_HPP

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdspec/bounds.hpp"
#include "bdspec/chain_spec.hpp"
#include "bdspec/solvers.hpp"
#include "bdspec/spectral_analysis.hpp"

namespace bdspec::cli {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace detail {

using Cell = std::variant<long long, double, std::string>;

struct Row {
    std::vector<Cell> cells;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

inline std::string cell_to_string(const Cell& cell) {
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    return std::get<std::string>(cell);
}

inline void emit_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out << table.header[c] << (c + 1 < table.header.size() ? "," : "\n");
    for (const Row& row : table.rows)
        for (std::size_t c = 0; c < row.cells.size(); ++c)
            out << cell_to_string(row.cells[c]) << (c + 1 < row.cells.size() ? "," : "\n");
}

inline void emit_json(const Table& table, std::ostream& out) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const Row& row : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t c = 0; c < row.cells.size(); ++c) {
            const Cell& cell = row.cells[c];
            if (const auto* i = std::get_if<long long>(&cell))
                obj[table.header[c]] = *i;
            else if (const auto* d = std::get_if<double>(&cell))
                obj[table.header[c]] = *d;
            else
                obj[table.header[c]] = std::get<std::string>(cell);
        }
        rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << "\n";
}

struct OutputOptions {
    std::string format = "csv";
    std::string path; // empty: stdout
};

inline void emit(const Table& table, const OutputOptions& opts, std::ostream& out,
                 std::ostream& err) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!opts.path.empty()) {
        file.open(opts.path, std::ios::binary);
        if (!file) {
            err << "cannot open output file: " << opts.path << "\n";
            throw std::invalid_argument("cannot open output file");
        }
        sink = &file;
    }
    if (opts.format == "json")
        emit_json(table, *sink);
    else
        emit_csv(table, *sink);
}

// chain selection shared by all subcommands
struct ChainOptions {
    std::string input_file;
    std::string kind;
    std::size_t n = 0;
    double a = 0.0;
    std::vector<std::size_t> positions;
    std::vector<double> epsilons;
    std::vector<double> pi, nu, p, q, r;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input,-i", input_file, "chain spec JSON file");
        cmd->add_option("--kind", kind,
                        "chain kind: explicit|birth_death|metropolis_check|metropolis_hat|"
                        "ehrenfest|srw|bottleneck");
        cmd->add_option("--n", n, "size parameter for the builder kinds");
        cmd->add_option("--a", a, "exponent for the metropolis kinds");
        cmd->add_option("--positions", positions, "bottleneck edge labels (1-based)");
        cmd->add_option("--epsilons", epsilons, "bottleneck conductance factors");
        cmd->add_option("--pi", pi, "vertex weights (explicit kind)");
        cmd->add_option("--nu", nu, "edge conductances (explicit kind)");
        cmd->add_option("--p", p, "birth rates (birth_death kind)");
        cmd->add_option("--q", q, "death rates (birth_death kind)");
        cmd->add_option("--r", r, "holding rates (birth_death kind)");
    }

    ChainSpec resolve() const {
        if (!input_file.empty()) {
            std::ifstream file(input_file);
            if (!file)
                throw std::invalid_argument("cannot open input file: " + input_file);
            std::stringstream text;
            text << file.rdbuf();
            return parse_chain_spec(text.str());
        }
        if (kind.empty())
            throw std::invalid_argument("no chain given: use --input or --kind");
        nlohmann::json j;
        j["kind"] = kind;
        if (kind == "explicit") {
            j["pi"] = pi;
            j["nu"] = nu;
        } else if (kind == "birth_death") {
            j["p"] = p;
            j["q"] = q;
            j["r"] = r;
        } else if (kind == "bottleneck") {
            j["n"] = n;
            j["positions"] = positions;
            j["epsilons"] = epsilons;
        } else {
            j["n"] = n;
            if (kind == "metropolis_check" || kind == "metropolis_hat") j["a"] = a;
        }
        return parse_chain_spec(j);
    }
};

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace detail

/// Full command dispatch; exposed for in-process testing.  argv follows the
/// usual convention (argv[0] is the program name).
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"spectral computations for weighted paths and birth-death chains"};
    app.require_subcommand(1);

    detail::OutputOptions output;
    double tol_abs = 1e-14;
    int jobs = 0;
    app.add_option("--format", output.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output,-o", output.path, "output file (default stdout)");
    app.add_option("--tol", tol_abs, "absolute tolerance for bracket widths");
    app.add_option("--jobs,-j", jobs, "parallel workers (0 = all cores)");

    detail::ChainOptions spectrum_chain, gap_chain, bounds_chain, sep_chain;

    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "all eigenvalues of the path");
    spectrum_chain.attach(cmd_spectrum);

    CLI::App* cmd_gap = app.add_subcommand("gap", "spectral gap or a chosen eigenvalue");
    gap_chain.attach(cmd_gap);
    std::string method = "a2";
    int rank_index = 1;
    double lambda0 = 0.0, start_value = 1.0;
    double lower_override = -1.0, upper_override = -1.0;
    bool trace = false;
    cmd_gap->add_option("--method", method, "a1 (fixed point), a2 (gap dichotomy), di (rank)")
        ->check(CLI::IsMember({"a1", "a2", "di"}));
    cmd_gap->add_option("--index", rank_index, "eigenvalue rank for --method di");
    cmd_gap->add_option("--lambda0", lambda0, "starting value for --method a1");
    cmd_gap->add_option("--start", start_value, "profile start magnitude for --method a1");
    cmd_gap->add_option("--lower", lower_override, "bracket lower end override");
    cmd_gap->add_option("--upper", upper_override, "bracket upper end override");
    cmd_gap->add_flag("--trace", trace, "emit the per-iteration trace");

    CLI::App* cmd_bounds = app.add_subcommand("bounds", "closed-form gap brackets");
    bounds_chain.attach(cmd_bounds);

    CLI::App* cmd_sep = app.add_subcommand("separation", "separation distance from an endpoint");
    sep_chain.attach(cmd_sep);
    std::string mode = "continuous";
    double sep_t = 1.0;
    long long sep_m = 1;
    cmd_sep->add_option("--mode", mode, "discrete|continuous")
        ->check(CLI::IsMember({"discrete", "continuous"}));
    cmd_sep->add_option("--t", sep_t, "time for continuous mode");
    cmd_sep->add_option("--m", sep_m, "step count for discrete mode");

    CLI::App* cmd_table = app.add_subcommand(
        "table1", "normalized gap products for the Metropolis family");
    std::string grid = "table1";
    std::vector<std::size_t> n_values;
    std::vector<double> a_values;
    cmd_table->add_option("--grid", grid, "preset grid: table1|figure1")
        ->check(CLI::IsMember({"table1", "figure1"}));
    cmd_table->add_option("--n-values", n_values, "explicit n grid (overrides preset)");
    cmd_table->add_option("--a-values", a_values, "explicit a grid (overrides preset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const Tolerance tol{tol_abs, 1e-12};
    try {
        detail::Table table;
        if (cmd_spectrum->parsed()) {
            const WeightedPath path = build_path(spectrum_chain.resolve());
            const Spectrum sp = full_spectrum(path, tol, detail::resolve_jobs(jobs));
            table.header = {"index", "lower", "upper", "estimate", "iterations"};
            table.rows.push_back({{0ll, 0.0, 0.0, 0.0, 0ll}});
            for (const EigenEstimate& est : sp.estimates)
                table.rows.push_back({{static_cast<long long>(est.index), est.lower,
                                       est.upper, est.estimate,
                                       static_cast<long long>(est.iterations)}});
        } else if (cmd_gap->parsed()) {
            const WeightedPath path = build_path(gap_chain.resolve());
            const auto [l0, u0] = default_bracket(path);
            const double lo = lower_override >= 0.0 ? lower_override : l0;
            const double hi = upper_override >= 0.0 ? upper_override : u0;
            EigenEstimate est;
            if (method == "a1") {
                est = solve_gap_a1(path, lambda0 > 0.0 ? lambda0 : hi, start_value);
            } else if (method == "a2") {
                est = solve_gap_a2(path, lo, hi, tol);
            } else {
                est = solve_eigen_di(path, rank_index, lo, hi, tol);
            }
            if (trace) {
                table.header = {"iteration", "lambda", "lower", "upper"};
                for (std::size_t k = 0; k < est.history.size(); ++k)
                    table.rows.push_back({{static_cast<long long>(k), est.history[k].lambda,
                                           est.history[k].lower, est.history[k].upper}});
            } else {
                table.header = {"method", "index", "lower", "upper", "estimate", "iterations"};
                table.rows.push_back({{method, static_cast<long long>(est.index), est.lower,
                                       est.upper, est.estimate,
                                       static_cast<long long>(est.iterations)}});
            }
        } else if (cmd_bounds->parsed()) {
            const ChainSpec spec = bounds_chain.resolve();
            table.header = {"method", "lower", "upper"};
            if (const auto* m = std::get_if<MetropolisCheckSpec>(&spec)) {
                const GapBracket b = metropolis_gap_bounds(m->n, m->a, MetropolisVariant::check);
                table.rows.push_back({{b.method, b.lower, b.upper}});
            } else if (const auto* h = std::get_if<MetropolisHatSpec>(&spec)) {
                const GapBracket b = metropolis_gap_bounds(h->n, h->a, MetropolisVariant::hat);
                table.rows.push_back({{b.method, b.lower, b.upper}});
            } else if (const auto* bn = std::get_if<BottleneckSpec>(&spec)) {
                const GapBracket b = bottleneck_bounds(bn->n, bn->positions, bn->epsilons);
                table.rows.push_back({{b.method, b.lower, b.upper}});
            }
            const WeightedPath path = build_path(spec);
            const double inf = std::numeric_limits<double>::infinity();
            table.rows.push_back({{std::string("hitting_time_lower"),
                                   gap_lower_bound(path), inf}});
            table.rows.push_back({{std::string("hitting_time_lower_summed"),
                                   gap_lower_bound_cprime(path), inf}});
        } else if (cmd_sep->parsed()) {
            const std::optional<BirthDeathChain> chain = build_chain(sep_chain.resolve());
            if (!chain)
                throw std::invalid_argument(
                    "separation needs a chain kind (birth_death, metropolis_*, ehrenfest, srw)");
            table.header = {"mode", "time", "separation"};
            if (mode == "discrete") {
                const double d = separation(*chain, SepMode::discrete,
                                            static_cast<double>(sep_m), tol);
                table.rows.push_back({{mode, static_cast<double>(sep_m), d}});
            } else {
                const double d = separation(*chain, SepMode::continuous, sep_t, tol);
                table.rows.push_back({{mode, sep_t, d}});
            }
        } else if (cmd_table->parsed()) {
            if (n_values.empty()) {
                if (grid == "table1")
                    n_values = {10000, 20000, 30000, 40000, 50000};
                else
                    for (std::size_t m = 1; m <= 50; ++m) n_values.push_back(100 * m);
            }
            if (a_values.empty()) a_values = {0.8, 0.9, 1.0, 1.1, 1.2};

            struct CellJob {
                std::size_t n;
                double a;
                double product;
            };
            std::vector<CellJob> cells;
            for (const double a : a_values)
                for (const std::size_t n : n_values) cells.push_back({n, a, 0.0});
            const auto run_cells = [&](std::size_t begin, std::size_t end) {
                for (std::size_t c = begin; c < end; ++c) {
                    const WeightedPath path =
                        from_birth_death(metropolis_check(cells[c].n, cells[c].a));
                    const auto [l0, u0] = default_bracket(path);
                    const double gap = solve_gap_a2(path, l0, u0, tol, false).estimate;
                    const long long ln = static_cast<long long>(cells[c].n);
                    cells[c].product =
                        gap * eta(-cells[c].a, 1, ln) * eta(cells[c].a, 2, ln + 1);
                }
            };
            const std::size_t workers = std::min<std::size_t>(
                static_cast<std::size_t>(detail::resolve_jobs(jobs)), cells.size());
            if (workers <= 1) {
                run_cells(0, cells.size());
            } else {
                std::vector<std::thread> pool;
                const std::size_t chunk = (cells.size() + workers - 1) / workers;
                for (std::size_t w = 0; w < workers; ++w) {
                    const std::size_t begin = w * chunk;
                    const std::size_t end = std::min(cells.size(), begin + chunk);
                    if (begin >= end) break;
                    pool.emplace_back(run_cells, begin, end);
                }
                for (std::thread& th : pool) th.join();
            }
            table.header = {"n", "a", "product"};
            for (const CellJob& cell : cells)
                table.rows.push_back(
                    {{static_cast<long long>(cell.n), cell.a, cell.product}});
        }
        detail::emit(table, output, out, err);
    } catch (const numeric_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace bdspec::cli

#endif // BDSPEC_CLI_HPP
