#include "hypersec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypersec {

std::string_view to_string(JacobianMode m) noexcept {
    switch (m) {
        case JacobianMode::Initial: return "initial";
        case JacobianMode::Broyden: return "broyden";
        case JacobianMode::BroydenBootstrap: return "broyden-bootstrap";
        case JacobianMode::FullHypersecant: return "full-hypersecant";
        case JacobianMode::Fd: return "fd";
    }
    return "unknown";
}

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::Stagnated: return "stagnated";
        case SolveStatus::EvaluationFailure: return "evaluation-failure";
    }
    return "unknown";
}

void SolveOptions::validate() const {
    if (!(abs_residual_tol > 0.0)) throw std::invalid_argument("abs_residual_tol: must be positive");
    if (!(rel_residual_tol > 0.0)) throw std::invalid_argument("rel_residual_tol: must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations: must be at least 1");
    if (!(step_svd_cutoff > 0.0 && step_svd_cutoff < 1.0))
        throw std::invalid_argument("step_svd_cutoff: must lie in (0,1)");
    if (!(hypersecant.svd_cutoff > 0.0 && hypersecant.svd_cutoff < 1.0))
        throw std::invalid_argument("svd_cutoff: must lie in (0,1)");
    if (!(fd.step > 0.0)) throw std::invalid_argument("fd_step: must be positive");
    if (initial_jacobian == InitialJacobian::Custom && !custom_jacobian)
        throw std::invalid_argument("initial_jacobian: custom matrix not supplied");
}

namespace {

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

/// Residual evaluation that counts calls and rejects non-finite output.
class CountingResidual {
public:
    CountingResidual(const Problem& p) : problem_(p) {}

    Vector operator()(std::span<const double> x) {
        ++count_;
        Vector f = problem_.residual(x);
        if (f.size() != problem_.dimension) throw std::invalid_argument("residual returned the wrong length");
        if (!all_finite(f)) throw EvaluationError("residual returned non-finite values");
        return f;
    }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }
    void add(std::size_t n) noexcept { count_ += n; }

private:
    const Problem& problem_;
    std::size_t count_ = 0;
};

DenseMatrix initial_matrix(const Problem& problem, std::span<const double> x0, const SolveOptions& options) {
    const std::size_t n = problem.dimension;
    switch (options.initial_jacobian) {
        case InitialJacobian::Identity: return DenseMatrix::identity(n);
        case InitialJacobian::ExactAtStart:
            if (!problem.exact_jacobian)
                throw std::invalid_argument("initial_jacobian: problem has no exact Jacobian");
            return problem.exact_jacobian(x0);
        case InitialJacobian::Custom:
            if (options.custom_jacobian->rows() != n || options.custom_jacobian->cols() != n)
                throw std::invalid_argument("initial_jacobian: custom matrix has the wrong shape");
            return *options.custom_jacobian;
    }
    return DenseMatrix::identity(n);
}

}  // namespace

LineSearchResult backtracking_line_search(const ResidualFunction& residual, std::span<const double> x,
                                          std::span<const double> dx, double f_norm) {
    if (x.size() != dx.size()) throw std::invalid_argument("backtracking_line_search: dimension mismatch");
    LineSearchResult out;
    Vector trial(x.size());
    double s = 1.0;
    for (std::size_t h = 0; h <= kMaxLineSearchHalvings; ++h, s *= 0.5) {
        for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + s * dx[i];
        ++out.trials;
        Vector f;
        try {
            f = residual(trial);
        } catch (const EvaluationError&) {
            continue;
        }
        if (all_finite(f) && norm_inf(f) < f_norm) {
            out.scale = s;
            out.success = true;
            out.f = std::move(f);
            return out;
        }
    }
    out.scale = 1.0;
    return out;
}

SolveReport newton_solve(const Problem& problem, std::span<const double> x0, const SolveOptions& options,
                         const IterationObserver& observer) {
    options.validate();
    const std::size_t n = problem.dimension;
    if (x0.size() != n) throw std::invalid_argument("newton_solve: x0 has the wrong length");
    if (problem.pattern.size() != n) throw std::invalid_argument("newton_solve: pattern has the wrong size");

    SolveReport report;
    report.x.assign(x0.begin(), x0.end());
    CountingResidual eval(problem);
    auto& trace = report.trace;

    Vector f;
    try {
        f = eval(report.x);
    } catch (const EvaluationError& e) {
        report.status = SolveStatus::EvaluationFailure;
        report.failure_message = e.what();
        report.residual_norm = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    const DenseMatrix j_initial = initial_matrix(problem, x0, options);
    DenseMatrix j = j_initial;
    double f_norm = norm_inf(f);
    const double tol = std::max(options.abs_residual_tol, options.rel_residual_tol * f_norm);
    report.residual_norm = f_norm;
    report.jacobian = j;
    trace.records.push_back({0, eval.count(), f_norm, 0.0, JacobianMode::Initial});

    const bool hyper = options.strategy == JacobianStrategy::Hypersecant;
    const bool fd = options.strategy == JacobianStrategy::ColoredFd;
    IterationHistory history(hypersecant_history_capacity(problem.pattern));
    if (hyper) history.push(report.x, f);
    ColumnColoring coloring;
    if (fd) coloring = fd_coloring(problem.pattern, options.fd.coloring);

    if (f_norm <= tol) {
        report.status = SolveStatus::Converged;
        return report;
    }

    JacobianMode mode = JacobianMode::Initial;
    ResidualFunction counted = [&eval](std::span<const double> x) { return eval(x); };
    Vector x_new(n);

    for (std::size_t k = 1; k <= options.max_iterations; ++k) {
        TraceRecord rec;
        rec.iteration = k;
        Vector f_new;
        try {
            if (fd) {
                j = fd_colored_jacobian(counted, report.x, f, coloring, problem.pattern, options.fd.step);
                mode = JacobianMode::Fd;
            }
            rec.mode = mode;

            Vector neg_f(n);
            for (std::size_t i = 0; i < n; ++i) neg_f[i] = -f[i];
            auto direct = solve_dense(j, neg_f, options.step_rcond_floor);
            Vector dx;
            if (direct.singular) {
                dx = svd_least_norm_solve(j, neg_f, options.step_svd_cutoff);
                rec.step_used_svd = true;
            } else {
                dx = std::move(direct.x);
            }

            double scale = 1.0;
            if (options.line_search == LineSearch::Backtracking) {
                auto ls = backtracking_line_search(counted, report.x, dx, f_norm);
                rec.line_search_trials = ls.trials;
                if (ls.success) {
                    scale = ls.scale;
                    f_new = std::move(ls.f);
                } else {
                    rec.line_search_failed = true;
                    trace.notes.push_back("iteration " + std::to_string(k) +
                                          ": line search failed, full step accepted");
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                dx[i] *= scale;
                x_new[i] = report.x[i] + dx[i];
            }
            if (f_new.empty()) f_new = eval(x_new);
            rec.step_norm = norm_inf(dx);

            if (options.strategy == JacobianStrategy::Broyden) {
                if (options.broyden_reinitialize_every != 0 && k % options.broyden_reinitialize_every == 0) {
                    j = j_initial;
                    mode = JacobianMode::Initial;
                } else if (auto b = broyden_update(j, dx, subtract(f_new, f))) {
                    j = std::move(*b);
                    mode = JacobianMode::Broyden;
                } else {
                    trace.notes.push_back("iteration " + std::to_string(k) + ": zero step, Broyden update skipped");
                }
            } else if (hyper) {
                history.push(x_new, f_new);
                auto h = hypersecant_update(j, history, problem.pattern, options.hypersecant);
                for (auto& note : h.notes) trace.notes.push_back("iteration " + std::to_string(k) + ": " + note);
                mode = h.all_full() ? JacobianMode::FullHypersecant : JacobianMode::BroydenBootstrap;
                j = std::move(h.jacobian);
                report.last_row_reports = std::move(h.rows);
            }
        } catch (const EvaluationError& e) {
            report.status = SolveStatus::EvaluationFailure;
            report.failure_message = "iteration " + std::to_string(k) + ": " + e.what();
            trace.notes.push_back(report.failure_message);
            report.iterations = k - 1;
            report.jacobian = j;
            return report;
        }

        report.x = x_new;
        f = std::move(f_new);
        f_norm = norm_inf(f);
        rec.fevals = eval.count();
        rec.residual_norm = f_norm;
        trace.records.push_back(rec);
        report.iterations = k;
        report.residual_norm = f_norm;
        report.jacobian = j;

        if (observer)
            observer({k, report.x, f, j, mode, hyper ? &report.last_row_reports : nullptr});

        if (f_norm <= tol) {
            report.status = SolveStatus::Converged;
            return report;
        }
        if (rec.step_norm <= 1e-14 * (1.0 + norm_inf(report.x))) {
            report.status = SolveStatus::Stagnated;
            return report;
        }
    }
    report.status = SolveStatus::MaxIterations;
    return report;
}

}  // namespace hypersec
