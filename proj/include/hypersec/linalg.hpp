#pragma once

// Small dense linear-algebra kernel: LU solve with condition detection,
// one-sided Jacobi SVD and truncated-SVD least-norm solves.

#include <cstddef>
#include <span>
#include <vector>

namespace hypersec {

using Vector = std::vector<double>;

inline constexpr double kDefaultRcondFloor = 1e-14;
inline constexpr double kDefaultSvdCutoff = 1e-12;

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    /// Builds from nested rows; all rows must have equal length.
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    /// y = A x
    [[nodiscard]] Vector apply(std::span<const double> x) const;
    [[nodiscard]] DenseMatrix transpose() const;
    [[nodiscard]] double norm_inf() const noexcept;
    [[nodiscard]] double norm_one() const noexcept;
    [[nodiscard]] double norm_frobenius() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
[[nodiscard]] double norm_inf(std::span<const double> v) noexcept;
[[nodiscard]] double norm2(std::span<const double> v);
/// a - b
[[nodiscard]] Vector subtract(std::span<const double> a, std::span<const double> b);

/// Outcome of `solve_dense`. When `singular` is set the caller is expected to
/// fall back to `svd_least_norm_solve`; `x` is empty in that case.
struct DenseSolveResult {
    Vector x;
    double rcond = 0.0;  ///< reciprocal 1-norm condition number
    bool singular = false;
};

/// Solves A x = b by LU with partial pivoting. Signals singularity when the
/// reciprocal condition number falls below `rcond_floor` (or a pivot is
/// exactly zero). Throws std::invalid_argument on dimension mismatch.
[[nodiscard]] DenseSolveResult solve_dense(const DenseMatrix& a, std::span<const double> b,
                                           double rcond_floor = kDefaultRcondFloor);

/// Thin SVD, A = U diag(w) V^T with w nonincreasing.
/// For an m x n input with k = min(m, n): U is m x k, V is n x k.
/// Columns of U belonging to zero singular values are zero.
struct SvdResult {
    DenseMatrix u;
    Vector singular_values;
    DenseMatrix v;
};

[[nodiscard]] SvdResult svd(const DenseMatrix& a);

/// Minimum-norm least-squares solution. Singular values below
/// rel_cutoff * w_max are treated as exactly zero.
[[nodiscard]] Vector svd_least_norm_solve(const DenseMatrix& a, std::span<const double> b,
                                          double rel_cutoff = kDefaultSvdCutoff);

/// Returns J + u v^T.
[[nodiscard]] DenseMatrix rank_one_update(DenseMatrix j, std::span<const double> u,
                                          std::span<const double> v);

}  // namespace hypersec
