#include "hypersec/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hypersec::cli {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string_view to_string(ProblemKind p) noexcept {
    switch (p) {
        case ProblemKind::Linear3: return "linear3";
        case ProblemKind::Nonlinear3: return "nonlinear3";
        case ProblemKind::Transport: return "transport";
    }
    return "unknown";
}

std::optional<ProblemKind> parse_problem(std::string_view name) noexcept {
    for (ProblemKind p : all_problems())
        if (to_string(p) == name) return p;
    return std::nullopt;
}

const std::vector<ProblemKind>& all_problems() {
    static const std::vector<ProblemKind> kAll{ProblemKind::Linear3, ProblemKind::Nonlinear3, ProblemKind::Transport};
    return kAll;
}

std::string_view describe(ProblemKind p) noexcept {
    switch (p) {
        case ProblemKind::Linear3: return "3-variable tridiagonal linear system, root (1,1,1)";
        case ProblemKind::Nonlinear3: return "3-variable quadratic system, root (1,1,1)";
        case ProblemKind::Transport: return "one implicit step of radial critical-gradient transport";
    }
    return "";
}

RunConfig RunConfig::defaults_for(ProblemKind problem) {
    RunConfig c;
    c.problem = problem;
    if (const char* env = std::getenv("HYPERSEC_OUT_DIR"); env != nullptr && *env != '\0') c.out_dir = env;
    switch (problem) {
        case ProblemKind::Linear3:
            c.abs_tol = 1e-12;
            c.rel_tol = 1e-12;
            c.bootstrap = BootstrapMode::Broyden;
            c.x0 = {0.5, 0.5, 0.5};
            break;
        case ProblemKind::Nonlinear3:
            c.abs_tol = 1e-8;
            c.rel_tol = 1e-8;
            c.x0 = {0.5, 0.5, 1.5};
            break;
        case ProblemKind::Transport:
            c.initial_jacobian = InitialJacobianChoice::AxisBc;
            c.fd_coloring = ColoringStructure::Symmetrized;
            break;
    }
    return c;
}

void RunConfig::validate() const {
    if (strategies.empty()) throw ConfigError("run.strategies", "at least one strategy is required");
    for (std::size_t a = 0; a < strategies.size(); ++a)
        for (std::size_t b = a + 1; b < strategies.size(); ++b)
            if (strategies[a] == strategies[b])
                throw ConfigError("run.strategies", fmt::format("duplicate strategy '{}'", to_string(strategies[a])));
    if (!(abs_tol > 0.0)) throw ConfigError("solver.abs_tol", "must be positive");
    if (!(rel_tol > 0.0)) throw ConfigError("solver.rel_tol", "must be positive");
    if (max_iterations < 1) throw ConfigError("solver.max_iterations", "must be at least 1");
    if (!(svd_cutoff > 0.0 && svd_cutoff < 1.0)) throw ConfigError("solver.svd_cutoff", "must lie in (0,1)");
    if (!(fd_step > 0.0)) throw ConfigError("solver.fd_step", "must be positive");
    if (out_dir.empty()) throw ConfigError("run.out_dir", "must not be empty");

    const std::size_t n = problem == ProblemKind::Transport ? transport.n_cells + 1 : 3;
    if (!x0.empty() && x0.size() != n)
        throw ConfigError("solver.x0", fmt::format("expected {} values, got {}", n, x0.size()));
    if (initial_jacobian == InitialJacobianChoice::AxisBc && problem != ProblemKind::Transport)
        throw ConfigError("solver.initial_jacobian", "axis-bc applies to the transport problem only");
    if (initial_jacobian == InitialJacobianChoice::Exact && problem == ProblemKind::Transport)
        throw ConfigError("solver.initial_jacobian", "the transport problem has no exact Jacobian");

    const auto& t = transport;
    if (t.n_cells < 4) throw ConfigError("transport.n_cells", "must be at least 4");
    if (!(t.theta >= 0.0 && t.theta <= 1.0)) throw ConfigError("transport.theta", "must lie in [0,1]");
    if (!(t.dt > 0.0)) throw ConfigError("transport.dt", "must be positive");
    if (!(t.critical_length > 0.0)) throw ConfigError("transport.critical_length", "must be positive");
    if (!(t.chi_min >= 0.0)) throw ConfigError("transport.chi_min", "must be nonnegative");
    if (!(t.edge_value > 0.0)) throw ConfigError("transport.edge_value", "must be positive");
    if (!(t.profile_amplitude >= 0.0)) throw ConfigError("transport.profile_amplitude", "must be nonnegative");
}

// ---------------------------------------------------------------------------
// INI round-trip
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(key, fmt::format("'{}' is not a number", text));
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(key, fmt::format("'{}' is not a nonnegative integer", text));
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key, fmt::format("'{}' is not a boolean", text));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<JacobianStrategy> parse_strategies(const std::string& key, const std::string& text) {
    std::vector<JacobianStrategy> out;
    for (const auto& name : split_list(text)) {
        const auto s = parse_strategy(name);
        if (!s) throw ConfigError(key, fmt::format("unknown strategy '{}'", name));
        out.push_back(*s);
    }
    return out;
}

Vector parse_vector(const std::string& key, const std::string& text) {
    Vector out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
    return out;
}

std::string join_strategies(const std::vector<JacobianStrategy>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::string(to_string(s[i]));
    return out;
}

std::string_view to_string(LineSearch l) { return l == LineSearch::Backtracking ? "backtracking" : "off"; }
std::string_view to_string(BootstrapMode b) { return b == BootstrapMode::Broyden ? "broyden" : "partial"; }
std::string_view to_string(ColoringStructure c) {
    return c == ColoringStructure::Symmetrized ? "symmetrized" : "pattern";
}
std::string_view to_string(InitialJacobianChoice c) {
    switch (c) {
        case InitialJacobianChoice::Identity: return "identity";
        case InitialJacobianChoice::Exact: return "exact";
        case InitialJacobianChoice::AxisBc: return "axis-bc";
    }
    return "identity";
}

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& key, const std::string& text, const std::array<Enum, N>& values) {
    const std::string t = trim(text);
    for (Enum v : values)
        if (to_string(v) == t) return v;
    throw ConfigError(key, fmt::format("unknown value '{}'", text));
}

void apply_key(RunConfig& c, const std::string& section, const std::string& name, const std::string& value) {
    const std::string key = section + "." + name;
    auto& t = c.transport;
    if (section == "run") {
        if (name == "problem") {
            const auto p = parse_problem(trim(value));
            if (!p) throw ConfigError(key, fmt::format("unknown problem '{}'", value));
            c.problem = *p;
        } else if (name == "strategies") {
            c.strategies = parse_strategies(key, value);
        } else if (name == "out_dir") {
            c.out_dir = trim(value);
        } else if (name == "gnuplot") {
            c.gnuplot = parse_bool(key, value);
        } else if (name == "seed") {
            c.seed = parse_int<std::uint64_t>(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    } else if (section == "solver") {
        if (name == "abs_tol") c.abs_tol = parse_double(key, value);
        else if (name == "rel_tol") c.rel_tol = parse_double(key, value);
        else if (name == "max_iterations") c.max_iterations = parse_int<std::size_t>(key, value);
        else if (name == "line_search")
            c.line_search = parse_enum(key, value, std::array{LineSearch::Off, LineSearch::Backtracking});
        else if (name == "bootstrap")
            c.bootstrap = parse_enum(key, value, std::array{BootstrapMode::Partial, BootstrapMode::Broyden});
        else if (name == "svd_cutoff") c.svd_cutoff = parse_double(key, value);
        else if (name == "always_svd") c.always_svd = parse_bool(key, value);
        else if (name == "fd_step") c.fd_step = parse_double(key, value);
        else if (name == "fd_coloring")
            c.fd_coloring =
                parse_enum(key, value, std::array{ColoringStructure::Pattern, ColoringStructure::Symmetrized});
        else if (name == "initial_jacobian")
            c.initial_jacobian = parse_enum(key, value,
                                            std::array{InitialJacobianChoice::Identity, InitialJacobianChoice::Exact,
                                                       InitialJacobianChoice::AxisBc});
        else if (name == "x0") c.x0 = parse_vector(key, value);
        else throw ConfigError(key, "unknown key");
    } else if (section == "transport") {
        if (name == "n_cells") t.n_cells = parse_int<std::size_t>(key, value);
        else if (name == "theta") t.theta = parse_double(key, value);
        else if (name == "dt") t.dt = parse_double(key, value);
        else if (name == "critical_length") t.critical_length = parse_double(key, value);
        else if (name == "chi_min") t.chi_min = parse_double(key, value);
        else if (name == "source_exponent") t.source_exponent = parse_double(key, value);
        else if (name == "edge_value") t.edge_value = parse_double(key, value);
        else if (name == "profile_amplitude") t.profile_amplitude = parse_double(key, value);
        else throw ConfigError(key, "unknown key");
    } else {
        throw ConfigError(section, "unknown section");
    }
}

pt::ptree read_tree(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", fmt::format("line {}: {}", e.line(), e.message()));
    }
    for (const auto& [section, body] : tree)
        if (body.empty() && !body.data().empty())
            throw ConfigError(section, "key outside of a section");
    return tree;
}

RunConfig apply_tree(const pt::ptree& tree, RunConfig c) {
    for (const auto& [section, body] : tree)
        for (const auto& [name, value] : body) apply_key(c, section, name, value.data());
    return c;
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

}  // namespace

RunConfig parse_config(std::istream& in, const RunConfig& base) {
    RunConfig c = apply_tree(read_tree(in), base);
    c.validate();
    return c;
}

RunConfig load_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path.string()));
    const pt::ptree tree = read_tree(in);

    ProblemKind problem = ProblemKind::Nonlinear3;
    if (const auto run = tree.get_child_optional("run")) {
        if (const auto name = run->get_optional<std::string>("problem")) {
            const auto p = parse_problem(trim(*name));
            if (!p) throw ConfigError("run.problem", fmt::format("unknown problem '{}'", *name));
            problem = *p;
        }
    }
    RunConfig c = apply_tree(tree, RunConfig::defaults_for(problem));
    c.validate();
    return c;
}

void write_config(const RunConfig& c, std::ostream& out) {
    std::string x0;
    for (std::size_t i = 0; i < c.x0.size(); ++i) x0 += (i ? "," : "") + fmt_double(c.x0[i]);
    const auto& t = c.transport;
    fmt::print(out,
               "[run]\n"
               "problem = {}\nstrategies = {}\nout_dir = {}\ngnuplot = {}\nseed = {}\n\n"
               "[solver]\n"
               "abs_tol = {}\nrel_tol = {}\nmax_iterations = {}\nline_search = {}\nbootstrap = {}\n"
               "svd_cutoff = {}\nalways_svd = {}\nfd_step = {}\nfd_coloring = {}\ninitial_jacobian = {}\nx0 = {}\n\n"
               "[transport]\n"
               "n_cells = {}\ntheta = {}\ndt = {}\ncritical_length = {}\nchi_min = {}\nsource_exponent = {}\n"
               "edge_value = {}\nprofile_amplitude = {}\n",
               to_string(c.problem), join_strategies(c.strategies), c.out_dir, c.gnuplot, c.seed,
               fmt_double(c.abs_tol), fmt_double(c.rel_tol), c.max_iterations, to_string(c.line_search),
               to_string(c.bootstrap), fmt_double(c.svd_cutoff), c.always_svd, fmt_double(c.fd_step),
               to_string(c.fd_coloring), to_string(c.initial_jacobian), x0, t.n_cells, fmt_double(t.theta),
               fmt_double(t.dt), fmt_double(t.critical_length), fmt_double(t.chi_min),
               fmt_double(t.source_exponent), fmt_double(t.edge_value), fmt_double(t.profile_amplitude));
}

std::string dump_config(const RunConfig& config) {
    std::ostringstream ss;
    write_config(config, ss);
    return ss.str();
}

// ---------------------------------------------------------------------------
// Problem and solver assembly
// ---------------------------------------------------------------------------

namespace {

TransportConfig transport_config(const TransportParams& p) {
    TransportConfig t;
    t.n_cells = p.n_cells;
    t.theta = p.theta;
    t.dt = p.dt;
    t.flux = {p.critical_length, p.chi_min};
    t.source_exponent = p.source_exponent;
    t.edge_value = p.edge_value;
    t.u_n = parabolic_profile(p.n_cells, p.edge_value, p.profile_amplitude);
    return t;
}

}  // namespace

Problem build_problem(const RunConfig& config) {
    switch (config.problem) {
        case ProblemKind::Linear3: return make_linear3();
        case ProblemKind::Nonlinear3: return make_nonlinear3();
        case ProblemKind::Transport: return make_transport(transport_config(config.transport));
    }
    throw ConfigError("run.problem", "unknown problem");
}

Vector initial_guess(const RunConfig& config) {
    if (!config.x0.empty()) return config.x0;
    switch (config.problem) {
        case ProblemKind::Linear3: return {0.5, 0.5, 0.5};
        case ProblemKind::Nonlinear3: return {0.5, 0.5, 1.5};
        case ProblemKind::Transport: return Vector(config.transport.n_cells + 1, 0.0);
    }
    return {};
}

SolveOptions build_options(const RunConfig& config, JacobianStrategy strategy) {
    SolveOptions o;
    o.strategy = strategy;
    o.abs_residual_tol = config.abs_tol;
    o.rel_residual_tol = config.rel_tol;
    o.max_iterations = config.max_iterations;
    o.line_search = config.line_search;
    o.hypersecant.svd_cutoff = config.svd_cutoff;
    o.hypersecant.always_svd = config.always_svd;
    o.hypersecant.bootstrap = config.bootstrap;
    o.step_svd_cutoff = config.svd_cutoff;
    o.fd.step = config.fd_step;
    o.fd.coloring = config.fd_coloring;
    switch (config.initial_jacobian) {
        case InitialJacobianChoice::Identity: o.initial_jacobian = InitialJacobian::Identity; break;
        case InitialJacobianChoice::Exact: o.initial_jacobian = InitialJacobian::ExactAtStart; break;
        case InitialJacobianChoice::AxisBc:
            o.initial_jacobian = InitialJacobian::Custom;
            o.custom_jacobian = transport_initial_jacobian(config.transport.n_cells);
            break;
    }
    return o;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

std::string format_trace(const ConvergenceTrace& trace) {
    if (trace.records.empty()) throw std::invalid_argument("format_trace: empty trace");
    std::string out = "iteration,fevals,residual_norm,step_norm,mode\n";
    for (const auto& r : trace.records)
        out += fmt::format("{},{},{:.16e},{:.16e},{}\n", r.iteration, r.fevals, r.residual_norm, r.step_norm,
                           to_string(r.mode));
    return out;
}

void emit_trace(const ConvergenceTrace& trace, const fs::path& path) {
    const std::string text = format_trace(trace);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write trace file '{}'", path.string()));
    out << text;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("cannot write trace file '{}'", path.string()));
}

fs::path trace_path(const RunConfig& config, JacobianStrategy strategy) {
    return fs::path(config.out_dir) / fmt::format("{}_{}.csv", to_string(config.problem), to_string(strategy));
}

std::string gnuplot_script(const RunConfig& config) {
    std::string s = fmt::format(
        "set datafile separator ','\n"
        "set logscale y\n"
        "set xlabel 'function evaluations'\n"
        "set ylabel 'max-norm residual'\n"
        "set title '{}'\n"
        "plot ",
        to_string(config.problem));
    for (std::size_t i = 0; i < config.strategies.size(); ++i) {
        const auto file = fmt::format("{}_{}.csv", to_string(config.problem), to_string(config.strategies[i]));
        s += fmt::format("{}'{}' using 2:3 skip 1 with linespoints title '{}'", i ? ", \\\n     " : "", file,
                         to_string(config.strategies[i]));
    }
    return s + "\n";
}

std::string summary_line(const StrategyOutcome& o) {
    return fmt::format("{:<12} status={:<18} iterations={:<3} fevals={:<4} residual={:.6e}", to_string(o.strategy),
                       to_string(o.report.status), o.report.iterations, o.report.trace.total_fevals(),
                       o.report.residual_norm);
}

RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    config.validate();
    RunResult result;
    const Problem problem = build_problem(config);
    const Vector x0 = initial_guess(config);

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) {
        fmt::print(err, "error: cannot create output directory '{}': {}\n", config.out_dir, ec.message());
        result.exit_code = 2;
        return result;
    }

    for (JacobianStrategy s : config.strategies) {
        StrategyOutcome o{s, newton_solve(problem, x0, build_options(config, s)), trace_path(config, s)};
        try {
            emit_trace(o.report.trace, o.trace_file);
        } catch (const std::exception& e) {
            fmt::print(err, "error: {}\n", e.what());
            result.exit_code = 2;
        }
        fmt::print(out, "{}\n", summary_line(o));
        if (!o.report.converged()) {
            result.exit_code = 2;
            if (!o.report.failure_message.empty())
                fmt::print(err, "{}: {}\n", to_string(s), o.report.failure_message);
        }
        result.outcomes.push_back(std::move(o));
    }

    if (config.gnuplot) {
        const fs::path script = fs::path(config.out_dir) / fmt::format("{}.gp", to_string(config.problem));
        std::ofstream gp(script, std::ios::binary | std::ios::trunc);
        gp << gnuplot_script(config);
        if (!gp) {
            fmt::print(err, "error: cannot write plot script '{}'\n", script.string());
            result.exit_code = 2;
        }
    }
    return result;
}

}  // namespace hypersec::cli
