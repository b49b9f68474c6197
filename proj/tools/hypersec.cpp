// Benchmark driver: runs the Jacobian strategies on a test problem and writes
// convergence traces.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hypersec/cli.hpp"

namespace {

using namespace hypersec;
using namespace hypersec::cli;

struct Overrides {
    std::optional<std::string> config_file;
    std::optional<std::string> problem;
    std::optional<std::string> strategies;
    std::optional<std::size_t> n_cells;
    std::optional<double> dt;
    std::optional<double> theta;
    std::optional<double> tol;
    std::optional<std::size_t> max_iters;
    std::optional<std::string> line_search;
    std::optional<std::string> out_dir;
    bool gnuplot = false;
    bool dump = false;
};

void add_common_flags(CLI::App& cmd, Overrides& o) {
    cmd.add_option("--config", o.config_file, "INI configuration file");
    cmd.add_option("--problem", o.problem, "linear3 | nonlinear3 | transport");
    cmd.add_option("--strategies", o.strategies, "comma list of hypersecant, broyden, fd");
    cmd.add_option("--n-cells", o.n_cells, "transport grid cells N");
    cmd.add_option("--dt", o.dt, "transport time step");
    cmd.add_option("--theta", o.theta, "transport implicitness in [0,1]");
    cmd.add_option("--tol", o.tol, "absolute max-norm residual tolerance");
    cmd.add_option("--max-iters", o.max_iters, "Newton iteration limit");
    cmd.add_option("--line-search", o.line_search, "off | backtracking");
    cmd.add_option("--out-dir", o.out_dir, "trace output directory (default $HYPERSEC_OUT_DIR or .)");
    cmd.add_flag("--gnuplot", o.gnuplot, "also write a gnuplot script");
}

/// File values first, then flags.
RunConfig resolve(const Overrides& o) {
    RunConfig c;
    if (o.config_file) {
        c = load_config_file(*o.config_file);
    } else {
        ProblemKind p = ProblemKind::Nonlinear3;
        if (o.problem) {
            const auto parsed = parse_problem(*o.problem);
            if (!parsed) throw ConfigError("problem", fmt::format("unknown problem '{}'", *o.problem));
            p = *parsed;
        }
        c = RunConfig::defaults_for(p);
    }

    std::map<std::string, std::string> sections;
    auto set = [&](const char* section, const char* key, const std::string& value) {
        sections[section] += fmt::format("{} = {}\n", key, value);
    };
    if (o.problem) set("run", "problem", *o.problem);
    if (o.strategies) set("run", "strategies", *o.strategies);
    if (o.n_cells) set("transport", "n_cells", std::to_string(*o.n_cells));
    if (o.dt) set("transport", "dt", fmt::format("{}", *o.dt));
    if (o.theta) set("transport", "theta", fmt::format("{}", *o.theta));
    if (o.tol) set("solver", "abs_tol", fmt::format("{}", *o.tol));
    if (o.max_iters) set("solver", "max_iterations", std::to_string(*o.max_iters));
    if (o.line_search) set("solver", "line_search", *o.line_search);
    if (o.out_dir) set("run", "out_dir", *o.out_dir);
    if (o.gnuplot) set("run", "gnuplot", "true");
    std::string ini;
    for (const auto& [name, body] : sections) ini += fmt::format("[{}]\n{}", name, body);
    std::istringstream in(ini);
    return parse_config(in, c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-Newton Jacobian strategy benchmark"};
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run_cmd = app.add_subcommand("run", "solve with each strategy and write traces");
    add_common_flags(*run_cmd, run_opts);
    run_cmd->add_flag("--dump-config", run_opts.dump, "print the effective configuration and exit");

    Overrides dump_opts;
    auto* dump_cmd = app.add_subcommand("dump-config", "print the effective configuration");
    add_common_flags(*dump_cmd, dump_opts);

    auto* list_cmd = app.add_subcommand("list-problems", "list the available test problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*list_cmd) {
            for (ProblemKind p : all_problems()) fmt::print("{:<12} {}\n", to_string(p), describe(p));
            return 0;
        }
        if (*dump_cmd) {
            std::cout << dump_config(resolve(dump_opts));
            return 0;
        }
        const RunConfig config = resolve(run_opts);
        if (run_opts.dump) {
            std::cout << dump_config(config);
            return 0;
        }
        return run(config, std::cout, std::cerr).exit_code;
    } catch (const ConfigError& e) {
        fmt::print(std::cerr, "config error: {}\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        fmt::print(std::cerr, "config error: {}\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(std::cerr, "error: {}\n", e.what());
        return 2;
    }
}
