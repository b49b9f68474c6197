#pragma once

// Jacobian approximation strategies: Broyden rank-one updates, hypersecant
// reconstruction from iteration history, and colored finite differences.

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypersec/linalg.hpp"
#include "hypersec/problem.hpp"
#include "hypersec/sparsity.hpp"

namespace hypersec {

enum class JacobianStrategy { Broyden, Hypersecant, ColoredFd };

[[nodiscard]] std::string_view to_string(JacobianStrategy s) noexcept;
/// Accepts "broyden", "hypersecant" and "fd".
[[nodiscard]] std::optional<JacobianStrategy> parse_strategy(std::string_view name) noexcept;

/// Bounded record of recent iterates and residuals, oldest first.
class IterationHistory {
public:
    struct Record {
        Vector x;
        Vector f;
    };

    explicit IterationHistory(std::size_t capacity);

    /// Appends a record, dropping the oldest one when full. All records must share one length.
    void push(Vector x, Vector f);
    void clear() noexcept { records_.clear(); }

    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    /// Record i, counted from the oldest retained one.
    [[nodiscard]] const Record& record(std::size_t i) const { return records_.at(i); }
    /// Record `back` steps before the newest (0 is the newest).
    [[nodiscard]] const Record& from_newest(std::size_t back) const {
        return records_.at(records_.size() - 1 - back);
    }

private:
    std::size_t capacity_;
    std::deque<Record> records_;
};

/// History capacity required by the hypersecant update: max row length + 1.
[[nodiscard]] std::size_t hypersecant_history_capacity(const SparsityPattern& pattern) noexcept;

/// J + ((dF - J dx) / (dx . dx)) dx^T. Returns nullopt when dx is zero.
[[nodiscard]] std::optional<DenseMatrix> broyden_update(const DenseMatrix& j, std::span<const double> dx,
                                                        std::span<const double> df);

struct RowSystem {
    DenseMatrix a;
    Vector b;
};

/// Multi-secant system for one row. With L = support.size() and k the newest
/// record: a(l, m) = x^k[s_m] - x^{k-L+l}[s_m], b(l) = F_row^k - F_row^{k-L+l}.
/// Returns nullopt when fewer than L + 1 records are available.
[[nodiscard]] std::optional<RowSystem> hypersecant_row_system(const IterationHistory& history,
                                                              std::size_t row,
                                                              std::span<const std::size_t> support);

/// How rows without enough history are filled.
enum class BootstrapMode {
    Partial,  ///< fix some unknowns at their Broyden values and solve for the rest
    Broyden,  ///< take the pattern-restricted Broyden row as is
};

struct HypersecantConfig {
    double svd_cutoff = kDefaultSvdCutoff;
    double rcond_floor = kDefaultRcondFloor;
    bool always_svd = false;
    BootstrapMode bootstrap = BootstrapMode::Partial;
};

enum class RowMode { Full, Bootstrap, BroydenRow };

struct RowReport {
    RowMode mode = RowMode::Full;
    bool used_svd = false;
    /// Reciprocal condition of the row system; 0 when singular or not computed.
    double rcond = 0.0;
};

struct HypersecantResult {
    DenseMatrix jacobian;
    std::vector<RowReport> rows;
    std::vector<std::string> notes;

    /// True when every row came from a fully determined history system.
    [[nodiscard]] bool all_full() const noexcept;
};

/// Rebuilds the Jacobian from history. Requires at least two records. Only
/// rows lacking history consult `previous` (through its Broyden update from
/// the newest step). Entries outside the pattern are zero.
[[nodiscard]] HypersecantResult hypersecant_update(const DenseMatrix& previous, const IterationHistory& history,
                                                   const SparsityPattern& pattern,
                                                   const HypersecantConfig& config = {});

inline constexpr double kDefaultFdStep = 1e-7;

/// Which structure the FD column coloring is computed from. The symmetrized
/// structure yields a coloring that is also valid for the transposed pattern.
enum class ColoringStructure { Pattern, Symmetrized };

struct FdConfig {
    double step = kDefaultFdStep;
    ColoringStructure coloring = ColoringStructure::Pattern;
};

[[nodiscard]] ColumnColoring fd_coloring(const SparsityPattern& pattern, ColoringStructure structure);

/// Forward-difference Jacobian using one residual evaluation per color. Each
/// column of a color group is perturbed by h * max(1, |x_j|). Evaluation
/// errors from the residual propagate.
[[nodiscard]] DenseMatrix fd_colored_jacobian(const ResidualFunction& residual, std::span<const double> x,
                                              std::span<const double> fx, const ColumnColoring& coloring,
                                              const SparsityPattern& pattern, double h = kDefaultFdStep);

}  // namespace hypersec
