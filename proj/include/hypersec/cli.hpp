#pragma once

// Benchmark harness: run configuration, INI round-trip, trace files and the
// multi-strategy driver behind the `hypersec` executable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypersec/problems.hpp"
#include "hypersec/solver.hpp"

namespace hypersec::cli {

enum class ProblemKind { Linear3, Nonlinear3, Transport };

[[nodiscard]] std::string_view to_string(ProblemKind p) noexcept;
[[nodiscard]] std::optional<ProblemKind> parse_problem(std::string_view name) noexcept;
[[nodiscard]] const std::vector<ProblemKind>& all_problems();
[[nodiscard]] std::string_view describe(ProblemKind p) noexcept;

/// Invalid configuration; `key()` is the offending "section.key".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Transport parameters; the initial profile is parabolic with this amplitude.
struct TransportParams {
    std::size_t n_cells = 10;
    double theta = 1.0;
    double dt = 0.1;
    double critical_length = 0.5;
    double chi_min = 0.1;
    double source_exponent = 2.0;
    double edge_value = 0.1;
    double profile_amplitude = 1.0;

    friend bool operator==(const TransportParams&, const TransportParams&) = default;
};

/// How the iteration-0 Jacobian is chosen. AxisBc is the transport-specific
/// identity with the linearized axis row.
enum class InitialJacobianChoice { Identity, Exact, AxisBc };

struct RunConfig {
    ProblemKind problem = ProblemKind::Nonlinear3;
    TransportParams transport;
    std::vector<JacobianStrategy> strategies{JacobianStrategy::Hypersecant, JacobianStrategy::Broyden,
                                             JacobianStrategy::ColoredFd};

    double abs_tol = 1e-12;
    double rel_tol = 1e-8;
    std::size_t max_iterations = 50;
    LineSearch line_search = LineSearch::Off;
    BootstrapMode bootstrap = BootstrapMode::Partial;
    double svd_cutoff = kDefaultSvdCutoff;
    bool always_svd = false;
    double fd_step = kDefaultFdStep;
    ColoringStructure fd_coloring = ColoringStructure::Pattern;
    InitialJacobianChoice initial_jacobian = InitialJacobianChoice::Identity;
    Vector x0;  ///< empty selects the problem default

    std::string out_dir = ".";
    bool gnuplot = false;
    std::uint64_t seed = 0;  ///< reserved; every run is deterministic

    /// Defaults tuned per problem (start point, tolerances, Jacobian seed).
    [[nodiscard]] static RunConfig defaults_for(ProblemKind problem);

    /// Throws ConfigError.
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses INI text over `base`; unknown sections or keys are errors.
[[nodiscard]] RunConfig parse_config(std::istream& in, const RunConfig& base);
/// Parses a file; the [run] problem key picks the defaults the file overrides.
[[nodiscard]] RunConfig load_config_file(const std::filesystem::path& path);
/// Writes every field, so that parsing the output reproduces `config`.
void write_config(const RunConfig& config, std::ostream& out);
[[nodiscard]] std::string dump_config(const RunConfig& config);

[[nodiscard]] Problem build_problem(const RunConfig& config);
[[nodiscard]] Vector initial_guess(const RunConfig& config);
[[nodiscard]] SolveOptions build_options(const RunConfig& config, JacobianStrategy strategy);

/// Throws std::runtime_error naming the path on I/O failure.
void emit_trace(const ConvergenceTrace& trace, const std::filesystem::path& path);
[[nodiscard]] std::string format_trace(const ConvergenceTrace& trace);

[[nodiscard]] std::filesystem::path trace_path(const RunConfig& config, JacobianStrategy strategy);
[[nodiscard]] std::string gnuplot_script(const RunConfig& config);

struct StrategyOutcome {
    JacobianStrategy strategy;
    SolveReport report;
    std::filesystem::path trace_file;
};

struct RunResult {
    int exit_code = 0;
    std::vector<StrategyOutcome> outcomes;
};

[[nodiscard]] std::string summary_line(const StrategyOutcome& outcome);

/// Solves with each strategy, writes traces (and the plot script if
/// requested) and prints one summary line per strategy to `out`.
/// Exit code 0 when every solve converged, 2 on any failure or I/O error.
[[nodiscard]] RunResult run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace hypersec::cli
