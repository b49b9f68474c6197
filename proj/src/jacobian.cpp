#include "hypersec/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypersec {

std::string_view to_string(JacobianStrategy s) noexcept {
    switch (s) {
        case JacobianStrategy::Broyden: return "broyden";
        case JacobianStrategy::Hypersecant: return "hypersecant";
        case JacobianStrategy::ColoredFd: return "fd";
    }
    return "unknown";
}

std::optional<JacobianStrategy> parse_strategy(std::string_view name) noexcept {
    if (name == "broyden") return JacobianStrategy::Broyden;
    if (name == "hypersecant") return JacobianStrategy::Hypersecant;
    if (name == "fd") return JacobianStrategy::ColoredFd;
    return std::nullopt;
}

IterationHistory::IterationHistory(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 2) throw std::invalid_argument("IterationHistory: capacity must be at least 2");
}

void IterationHistory::push(Vector x, Vector f) {
    if (x.size() != f.size()) throw std::invalid_argument("IterationHistory::push: x and F lengths differ");
    if (!records_.empty() && records_.front().x.size() != x.size())
        throw std::invalid_argument("IterationHistory::push: record length changed");
    if (records_.size() == capacity_) records_.pop_front();
    records_.push_back({std::move(x), std::move(f)});
}

std::size_t hypersecant_history_capacity(const SparsityPattern& pattern) noexcept {
    return std::max<std::size_t>(pattern.max_row_length(), 1) + 1;
}

std::optional<DenseMatrix> broyden_update(const DenseMatrix& j, std::span<const double> dx,
                                          std::span<const double> df) {
    if (!j.square() || dx.size() != j.cols() || df.size() != j.rows())
        throw std::invalid_argument("broyden_update: dimension mismatch");
    const double dxdx = dot(dx, dx);
    if (dxdx == 0.0) return std::nullopt;
    Vector u = j.apply(dx);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = (df[i] - u[i]) / dxdx;
    return rank_one_update(j, u, dx);
}

std::optional<RowSystem> hypersecant_row_system(const IterationHistory& history, std::size_t row,
                                                std::span<const std::size_t> support) {
    const std::size_t l_count = support.size();
    if (history.size() < l_count + 1) return std::nullopt;
    const auto& newest = history.from_newest(0);
    if (row >= newest.f.size()) throw std::invalid_argument("hypersecant_row_system: row out of range");

    RowSystem sys{DenseMatrix(l_count, l_count), Vector(l_count)};
    for (std::size_t l = 0; l < l_count; ++l) {
        const auto& older = history.from_newest(l_count - l);  // x^{k-L+l}
        for (std::size_t m = 0; m < l_count; ++m) sys.a(l, m) = newest.x[support[m]] - older.x[support[m]];
        sys.b[l] = newest.f[row] - older.f[row];
    }
    return sys;
}

bool HypersecantResult::all_full() const noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const RowReport& r) { return r.mode == RowMode::Full; });
}

namespace {

struct RowSolve {
    Vector x;
    bool used_svd = false;
    bool singular = false;
    double rcond = 0.0;
};

RowSolve solve_row_system(const DenseMatrix& a, std::span<const double> b, const HypersecantConfig& config) {
    RowSolve out;
    if (!config.always_svd) {
        auto direct = solve_dense(a, b, config.rcond_floor);
        out.rcond = direct.rcond;
        if (!direct.singular) {
            out.x = std::move(direct.x);
            return out;
        }
        out.singular = true;
    }
    out.used_svd = true;
    out.x = svd_least_norm_solve(a, b, config.svd_cutoff);
    return out;
}

}  // namespace

HypersecantResult hypersecant_update(const DenseMatrix& previous, const IterationHistory& history,
                                     const SparsityPattern& pattern, const HypersecantConfig& config) {
    const std::size_t n = pattern.size();
    if (previous.rows() != n || previous.cols() != n)
        throw std::invalid_argument("hypersecant_update: previous Jacobian has the wrong shape");
    if (history.size() < 2) throw std::invalid_argument("hypersecant_update: need at least two records");

    HypersecantResult result{DenseMatrix(n, n), std::vector<RowReport>(n), {}};
    const std::size_t steps = history.size() - 1;
    const auto& newest = history.from_newest(0);

    // Broyden update from the newest step, built only if some row lacks history.
    std::optional<DenseMatrix> broyden;
    auto broyden_matrix = [&]() -> const DenseMatrix& {
        if (!broyden) {
            const auto& prev = history.from_newest(1);
            auto b = broyden_update(previous, subtract(newest.x, prev.x), subtract(newest.f, prev.f));
            if (!b) result.notes.emplace_back("zero newest step: bootstrap uses the previous Jacobian");
            broyden = b ? std::move(*b) : previous;
        }
        return *broyden;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto support = pattern.row(i);
        auto& report = result.rows[i];
        auto row_out = result.jacobian.row(i);

        if (steps >= support.size()) {
            const auto sys = hypersecant_row_system(history, i, support);
            const auto solved = solve_row_system(sys->a, sys->b, config);
            report.mode = RowMode::Full;
            report.used_svd = solved.used_svd;
            report.rcond = solved.rcond;
            for (std::size_t m = 0; m < support.size(); ++m) row_out[support[m]] = solved.x[m];
            continue;
        }

        const DenseMatrix& b = broyden_matrix();
        for (std::size_t j : support) row_out[j] = b(i, j);
        report.mode = RowMode::BroydenRow;
        if (config.bootstrap == BootstrapMode::Broyden) continue;

        // Retain `steps` unknowns: the diagonal, then the largest |B| off-diagonals.
        std::vector<std::size_t> off;
        for (std::size_t j : support)
            if (j != i) off.push_back(j);
        std::stable_sort(off.begin(), off.end(),
                         [&](std::size_t p, std::size_t q) { return std::abs(b(i, p)) > std::abs(b(i, q)); });
        std::vector<std::size_t> keep{i};
        keep.insert(keep.end(), off.begin(), off.begin() + static_cast<std::ptrdiff_t>(steps - 1));
        std::vector<std::size_t> fixed(off.begin() + static_cast<std::ptrdiff_t>(steps - 1), off.end());

        DenseMatrix a(steps, steps);
        Vector rhs(steps);
        for (std::size_t l = 0; l < steps; ++l) {
            const auto& older = history.from_newest(steps - l);
            for (std::size_t m = 0; m < steps; ++m) a(l, m) = newest.x[keep[m]] - older.x[keep[m]];
            double r = newest.f[i] - older.f[i];
            for (std::size_t j : fixed) r -= b(i, j) * (newest.x[j] - older.x[j]);
            rhs[l] = r;
        }
        const auto direct = solve_dense(a, rhs, config.rcond_floor);
        report.rcond = direct.rcond;
        if (direct.singular) {
            result.notes.push_back("row " + std::to_string(i) + ": degenerate bootstrap system, Broyden row kept");
            continue;
        }
        report.mode = RowMode::Bootstrap;
        for (std::size_t m = 0; m < steps; ++m) row_out[keep[m]] = direct.x[m];
    }
    return result;
}

ColumnColoring fd_coloring(const SparsityPattern& pattern, ColoringStructure structure) {
    return structure == ColoringStructure::Symmetrized ? greedy_color_columns(pattern.symmetrized())
                                                       : greedy_color_columns(pattern);
}

DenseMatrix fd_colored_jacobian(const ResidualFunction& residual, std::span<const double> x,
                                std::span<const double> fx, const ColumnColoring& coloring,
                                const SparsityPattern& pattern, double h) {
    const std::size_t n = pattern.size();
    if (x.size() != n || fx.size() != n || coloring.color_of.size() != n)
        throw std::invalid_argument("fd_colored_jacobian: dimension mismatch");
    if (!(h > 0.0)) throw std::invalid_argument("fd_colored_jacobian: step must be positive");

    DenseMatrix j(n, n);
    Vector scale(n);
    for (std::size_t c = 0; c < n; ++c) scale[c] = std::max(1.0, std::abs(x[c]));

    Vector xp(x.begin(), x.end());
    for (std::size_t color = 0; color < coloring.num_colors; ++color) {
        for (std::size_t c = 0; c < n; ++c) xp[c] = coloring.color_of[c] == color ? x[c] + h * scale[c] : x[c];
        const Vector fp = residual(xp);
        if (fp.size() != n) throw std::invalid_argument("fd_colored_jacobian: residual returned wrong length");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c : pattern.row(i))
                if (coloring.color_of[c] == color) j(i, c) = (fp[i] - fx[i]) / (h * scale[c]);
    }
    return j;
}

}  // namespace hypersec
