#include "hypersec/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hypersec {

std::array<double, 3> linear3_residual(std::span<const double, 3> x) noexcept {
    return {x[0] + 0.5 * x[1] - 1.5, 0.5 * x[0] + x[1] + 0.5 * x[2] - 2.0, 0.5 * x[1] + x[2] - 1.5};
}

std::array<double, 3> nonlinear3_residual(std::span<const double, 3> x) noexcept {
    const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
    return {a / 2.0 + b / 4.0 - 0.75, a / 4.0 + b / 2.0 + c / 4.0 - 1.0, b / 4.0 + c / 2.0 - 0.75};
}

DenseMatrix linear3_jacobian() {
    return DenseMatrix::from_rows({{1.0, 0.5, 0.0}, {0.5, 1.0, 0.5}, {0.0, 0.5, 1.0}});
}

DenseMatrix nonlinear3_jacobian(std::span<const double, 3> x) {
    return DenseMatrix::from_rows({{x[0], x[1] / 2.0, 0.0},
                                   {x[0] / 2.0, x[1], x[2] / 2.0},
                                   {0.0, x[1] / 2.0, x[2]}});
}

namespace {

std::span<const double, 3> as3(std::span<const double> x) {
    if (x.size() != 3) throw std::invalid_argument("three-variable problem expects a 3-vector");
    return std::span<const double, 3>(x.data(), 3);
}

}  // namespace

Problem make_linear3() {
    Problem p;
    p.name = "linear3";
    p.dimension = 3;
    p.pattern = tridiagonal_pattern(3);
    p.residual = [](std::span<const double> x) {
        const auto f = linear3_residual(as3(x));
        return Vector(f.begin(), f.end());
    };
    p.exact_jacobian = [](std::span<const double>) { return linear3_jacobian(); };
    return p;
}

Problem make_nonlinear3() {
    Problem p;
    p.name = "nonlinear3";
    p.dimension = 3;
    p.pattern = tridiagonal_pattern(3);
    p.residual = [](std::span<const double> x) {
        const auto f = nonlinear3_residual(as3(x));
        return Vector(f.begin(), f.end());
    };
    p.exact_jacobian = [](std::span<const double> x) { return nonlinear3_jacobian(as3(x)); };
    return p;
}

// ---------------------------------------------------------------------------

void TransportConfig::validate() const {
    if (n_cells < 4) throw std::invalid_argument("n_cells: must be at least 4");
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta: must lie in [0,1]");
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt: must be nonnegative");
    if (!(flux.critical_length > 0.0)) throw std::invalid_argument("critical_length: must be positive");
    if (!(flux.chi_min >= 0.0)) throw std::invalid_argument("chi_min: must be nonnegative");
    if (!volume_element) throw std::invalid_argument("volume_element: not set");
    if (u_n.size() != n_cells + 1)
        throw std::invalid_argument("u_n: expected " + std::to_string(n_cells + 1) + " values, got " +
                                    std::to_string(u_n.size()));
    for (double u : u_n)
        if (!(u > 0.0) || !std::isfinite(u)) throw std::invalid_argument("u_n: profile must be positive");
}

Vector parabolic_profile(std::size_t n_cells, double edge_value, double amplitude) {
    Vector u(n_cells + 1);
    for (std::size_t j = 0; j <= n_cells; ++j) {
        const double r = static_cast<double>(j) / static_cast<double>(n_cells);
        u[j] = edge_value + amplitude * (1.0 - r * r);
    }
    return u;
}

TransportConfig default_transport_config(std::size_t n_cells) {
    TransportConfig c;
    c.n_cells = n_cells;
    c.u_n = parabolic_profile(n_cells, c.edge_value);
    return c;
}

double critical_gradient_chi(double u, double uprime, const FluxModel& model) {
    if (!(u > 0.0) || !std::isfinite(u) || !std::isfinite(uprime))
        throw EvaluationError("critical_gradient_chi: nonpositive or non-finite profile value");
    // 1/L = |u'|/u; u' = 0 means an infinite gradient length.
    const double inv_length = std::abs(uprime) / u;
    const double turbulent = (inv_length - 1.0 / model.critical_length) * inv_length;
    return std::max(turbulent, model.chi_min);
}

double face_flux(double u_left, double u_right, double dr, const FluxModel& model) {
    const double u_face = 0.5 * (u_left + u_right);
    const double uprime = (u_right - u_left) / dr;
    return -critical_gradient_chi(u_face, uprime, model) * uprime;
}

namespace {

void check_profile(std::span<const double> u) {
    for (double v : u)
        if (!(v > 0.0) || !std::isfinite(v))
            throw EvaluationError("transport: profile value is nonpositive or non-finite");
}

// Discrete (1/V') d/dr (V' Gamma) at node j.
double divergence(std::span<const double> u, std::size_t j, const TransportConfig& c) {
    const double dr = c.dr();
    const double r = static_cast<double>(j) * dr;
    const double g_plus = face_flux(u[j], u[j + 1], dr, c.flux);
    const double g_minus = face_flux(u[j - 1], u[j], dr, c.flux);
    return (c.volume_element(r + 0.5 * dr) * g_plus - c.volume_element(r - 0.5 * dr) * g_minus) /
           (c.volume_element(r) * dr);
}

double source(double r, const TransportConfig& c) { return 1.0 - std::pow(r, c.source_exponent); }

Vector advanced_profile(std::span<const double> delta_u, const TransportConfig& c) {
    if (delta_u.size() != c.n_cells + 1)
        throw std::invalid_argument("transport: delta_u must have n_cells + 1 entries");
    Vector u(delta_u.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = c.u_n[j] + delta_u[j];
    return u;
}

}  // namespace

double axis_bc_residual(std::span<const double> delta_u, const TransportConfig& config) {
    const Vector u = advanced_profile(delta_u, config);
    check_profile(std::span<const double>(u).first(3));
    const double dr = config.dr();
    return 3.0 * face_flux(u[0], u[1], dr, config.flux) - face_flux(u[1], u[2], dr, config.flux);
}

Vector transport_residual(std::span<const double> delta_u, const TransportConfig& config) {
    const std::size_t n = config.n_cells;
    const Vector u = advanced_profile(delta_u, config);
    check_profile(u);

    Vector f(n + 1);
    f[0] = axis_bc_residual(delta_u, config);
    const double dt = config.dt;
    const double theta = config.theta;
    for (std::size_t j = 1; j < n; ++j) {
        const double r = static_cast<double>(j) * config.dr();
        const double s = source(r, config);
        double fj = delta_u[j];
        if (theta != 0.0) fj += theta * (divergence(u, j, config) - s) * dt;
        if (theta != 1.0) fj += (1.0 - theta) * (divergence(config.u_n, j, config) - s) * dt;
        f[j] = fj;
    }
    f[n] = delta_u[n] - (config.edge_value - config.u_n[n]);
    return f;
}

DenseMatrix transport_initial_jacobian(std::size_t n_cells) {
    if (n_cells < 4) throw std::invalid_argument("transport_initial_jacobian: n_cells must be at least 4");
    DenseMatrix j = DenseMatrix::identity(n_cells + 1);
    const double n = static_cast<double>(n_cells);
    j(0, 0) = 0.3 * n;
    j(0, 1) = -0.4 * n;
    j(0, 2) = 0.1 * n;
    return j;
}

Problem make_transport(TransportConfig config) {
    config.validate();
    Problem p;
    p.name = "transport";
    p.dimension = config.n_cells + 1;
    p.pattern = transport_pattern(p.dimension);
    p.residual = [c = std::move(config)](std::span<const double> du) { return transport_residual(du, c); };
    return p;
}

}  // namespace hypersec
