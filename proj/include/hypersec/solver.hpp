#pragma once

// Quasi-Newton driver with pluggable Jacobian strategies, evaluation
// accounting and per-iteration convergence traces.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypersec/jacobian.hpp"
#include "hypersec/linalg.hpp"
#include "hypersec/problem.hpp"

namespace hypersec {

enum class LineSearch { Off, Backtracking };
enum class InitialJacobian { Identity, ExactAtStart, Custom };

struct SolveOptions {
    JacobianStrategy strategy = JacobianStrategy::Hypersecant;
    HypersecantConfig hypersecant;
    FdConfig fd;
    double abs_residual_tol = 1e-12;  ///< max norm
    double rel_residual_tol = 1e-8;   ///< relative to the initial max norm
    std::size_t max_iterations = 50;
    LineSearch line_search = LineSearch::Off;
    /// Relative SVD cutoff for the Newton step when the direct solve is singular.
    double step_svd_cutoff = kDefaultSvdCutoff;
    double step_rcond_floor = kDefaultRcondFloor;
    InitialJacobian initial_jacobian = InitialJacobian::Identity;
    std::optional<DenseMatrix> custom_jacobian;  ///< used with InitialJacobian::Custom
    /// Broyden only: reset to the initial Jacobian every this many iterations (0 = never).
    std::size_t broyden_reinitialize_every = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class JacobianMode { Initial, Broyden, BroydenBootstrap, FullHypersecant, Fd };

[[nodiscard]] std::string_view to_string(JacobianMode m) noexcept;

/// One row per completed iteration plus the initial state at iteration 0.
/// `mode` names how the Jacobian used for the step was obtained.
struct TraceRecord {
    std::size_t iteration = 0;
    std::size_t fevals = 0;  ///< cumulative residual evaluations
    double residual_norm = 0.0;
    double step_norm = 0.0;
    JacobianMode mode = JacobianMode::Initial;
    bool step_used_svd = false;
    bool line_search_failed = false;
    std::size_t line_search_trials = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ConvergenceTrace {
    std::vector<TraceRecord> records;
    std::vector<std::string> notes;

    [[nodiscard]] std::size_t total_fevals() const noexcept { return records.empty() ? 0 : records.back().fevals; }
    friend bool operator==(const ConvergenceTrace&, const ConvergenceTrace&) = default;
};

enum class SolveStatus { Converged, MaxIterations, Stagnated, EvaluationFailure };

[[nodiscard]] std::string_view to_string(SolveStatus s) noexcept;

struct SolveReport {
    SolveStatus status = SolveStatus::MaxIterations;
    Vector x;
    double residual_norm = 0.0;
    std::size_t iterations = 0;
    ConvergenceTrace trace;
    /// Jacobian in effect after the final update (the one the next step would use).
    DenseMatrix jacobian;
    /// Hypersecant diagnostics from the last update, if any.
    std::vector<RowReport> last_row_reports;
    std::string failure_message;

    [[nodiscard]] bool converged() const noexcept { return status == SolveStatus::Converged; }
};

/// Observer invoked after every completed iteration with the iterate and the
/// Jacobian that will be used for the next step.
struct IterationView {
    std::size_t iteration;
    std::span<const double> x;
    std::span<const double> f;
    const DenseMatrix& jacobian;
    JacobianMode next_mode;
    const std::vector<RowReport>* row_reports;  ///< hypersecant only, else nullptr
};
using IterationObserver = std::function<void(const IterationView&)>;

[[nodiscard]] SolveReport newton_solve(const Problem& problem, std::span<const double> x0,
                                       const SolveOptions& options, const IterationObserver& observer = {});

struct LineSearchResult {
    double scale = 1.0;
    std::size_t trials = 0;
    bool success = false;
    Vector f;  ///< residual at the accepted trial (empty on failure)
};

inline constexpr std::size_t kMaxLineSearchHalvings = 10;

/// Tries s = 1, 1/2, ..., 2^-10 and accepts the first with ||F(x + s dx)||_inf < f_norm.
/// Evaluation errors at a trial count as rejection.
[[nodiscard]] LineSearchResult backtracking_line_search(const ResidualFunction& residual,
                                                        std::span<const double> x, std::span<const double> dx,
                                                        double f_norm);

}  // namespace hypersec
