#include "hypersec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hypersec {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("DenseMatrix: entry count " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows_) + "x" +
                                    std::to_string(cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

Vector DenseMatrix::apply(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
    return y;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (double v : row(i)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

double DenseMatrix::norm_one() const noexcept {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double DenseMatrix::norm_frobenius() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector subtract(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("subtract: dimension mismatch");
    Vector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

namespace {

struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> perm;
    bool zero_pivot = false;
};

LuFactors lu_factor(DenseMatrix a) {
    const std::size_t n = a.rows();
    LuFactors f{std::move(a), std::vector<std::size_t>(n), false};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    DenseMatrix& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                p = i;
            }
        }
        if (best == 0.0) {
            f.zero_pivot = true;
            return f;
        }
        if (p != k) {
            std::swap_ranges(m.row(k).begin(), m.row(k).end(), m.row(p).begin());
            std::swap(f.perm[k], f.perm[p]);
        }
        const double pivot = m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m(i, k) / pivot;
            m(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, std::span<const double> b) {
    const std::size_t n = f.lu.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= f.lu(ii, j) * x[j];
        x[ii] /= f.lu(ii, ii);
    }
    return x;
}

}  // namespace

DenseSolveResult solve_dense(const DenseMatrix& a, std::span<const double> b, double rcond_floor) {
    if (!a.square()) throw std::invalid_argument("solve_dense: matrix is not square");
    if (a.rows() != b.size()) throw std::invalid_argument("solve_dense: dimension mismatch");
    const std::size_t n = a.rows();
    DenseSolveResult result;
    if (n == 0) return result;

    const double anorm = a.norm_one();
    if (anorm == 0.0 || !std::isfinite(anorm)) {
        result.singular = true;
        return result;
    }
    const LuFactors f = lu_factor(a);
    if (f.zero_pivot) {
        result.singular = true;
        return result;
    }

    // Exact ||A^-1||_1 from the columns of the inverse; systems here are small.
    double inv_norm = 0.0;
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const Vector col = lu_solve(f, e);
        e[j] = 0.0;
        double s = 0.0;
        for (double v : col) s += std::abs(v);
        inv_norm = std::max(inv_norm, s);
    }
    result.rcond = std::isfinite(inv_norm) ? 1.0 / (anorm * inv_norm) : 0.0;
    if (!(result.rcond >= rcond_floor)) {
        result.singular = true;
        return result;
    }
    result.x = lu_solve(f, b);
    return result;
}

namespace {

// One-sided Jacobi on the columns of a tall (m >= n) matrix.
SvdResult jacobi_svd_tall(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    DenseMatrix w = a;
    DenseMatrix v = DenseMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int kMaxSweeps = 80;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    Vector sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out{DenseMatrix(m, n), Vector(n), DenseMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.singular_values[k] = sigma[j];
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = sigma[j] > 0.0 ? w(i, j) / sigma[j] : 0.0;
        for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    }
    return out;
}

}  // namespace

SvdResult svd(const DenseMatrix& a) {
    if (a.rows() >= a.cols()) return jacobi_svd_tall(a);
    SvdResult t = jacobi_svd_tall(a.transpose());
    return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

Vector svd_least_norm_solve(const DenseMatrix& a, std::span<const double> b, double rel_cutoff) {
    if (a.rows() != b.size()) throw std::invalid_argument("svd_least_norm_solve: dimension mismatch");
    if (!(rel_cutoff > 0.0 && rel_cutoff < 1.0))
        throw std::invalid_argument("svd_least_norm_solve: rel_cutoff must lie in (0,1)");
    Vector x(a.cols(), 0.0);
    const SvdResult d = svd(a);
    const double wmax = d.singular_values.empty() ? 0.0 : d.singular_values.front();
    if (wmax == 0.0) return x;
    for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
        const double wk = d.singular_values[k];
        if (wk < rel_cutoff * wmax) continue;
        double ub = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) ub += d.u(i, k) * b[i];
        const double coeff = ub / wk;
        for (std::size_t j = 0; j < a.cols(); ++j) x[j] += coeff * d.v(j, k);
    }
    return x;
}

DenseMatrix rank_one_update(DenseMatrix j, std::span<const double> u, std::span<const double> v) {
    if (u.size() != j.rows() || v.size() != j.cols())
        throw std::invalid_argument("rank_one_update: dimension mismatch");
    for (std::size_t r = 0; r < j.rows(); ++r) {
        if (u[r] == 0.0) continue;
        auto row = j.row(r);
        for (std::size_t c = 0; c < j.cols(); ++c) row[c] += u[r] * v[c];
    }
    return j;
}

}  // namespace hypersec
