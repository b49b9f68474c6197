#pragma once

// Benchmark systems: a 3-variable linear system, a 3-variable quadratic
// system, and one implicit time step of a radial transport equation with a
// critical-gradient diffusivity.

#include <array>
#include <functional>
#include <span>

#include "hypersec/problem.hpp"

namespace hypersec {

// ---------------------------------------------------------------------------
// Three-variable systems, both rooted at (1, 1, 1)
// ---------------------------------------------------------------------------

[[nodiscard]] std::array<double, 3> linear3_residual(std::span<const double, 3> x) noexcept;
[[nodiscard]] std::array<double, 3> nonlinear3_residual(std::span<const double, 3> x) noexcept;

/// Constant Jacobian of the linear system.
[[nodiscard]] DenseMatrix linear3_jacobian();
[[nodiscard]] DenseMatrix nonlinear3_jacobian(std::span<const double, 3> x);

[[nodiscard]] Problem make_linear3();
[[nodiscard]] Problem make_nonlinear3();

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

struct FluxModel {
    double critical_length = 0.5;  ///< L_c
    double chi_min = 0.1;
};

/// Volume element V'(r); cylindrical geometry by default.
using VolumeElement = std::function<double(double)>;

struct TransportConfig {
    std::size_t n_cells = 10;  ///< N; unknowns are the N + 1 nodes r_j = j / N
    double theta = 1.0;
    double dt = 0.1;
    FluxModel flux;
    double source_exponent = 2.0;  ///< S(r) = 1 - r^alpha
    VolumeElement volume_element = [](double r) { return r; };
    Vector u_n;  ///< profile at time level n, length N + 1
    double edge_value = 0.1;

    [[nodiscard]] double dr() const noexcept { return 1.0 / static_cast<double>(n_cells); }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Default initial profile u(r) = edge + amplitude * (1 - r^2) on the N + 1 nodes.
[[nodiscard]] Vector parabolic_profile(std::size_t n_cells, double edge_value, double amplitude = 1.0);
[[nodiscard]] TransportConfig default_transport_config(std::size_t n_cells = 10);

/// chi = max{(1/L - 1/L_c)/L, chi_min} with L = u/|u'|. Throws EvaluationError for u <= 0.
[[nodiscard]] double critical_gradient_chi(double u, double uprime, const FluxModel& model);
/// Gamma = -chi u' at a face, using the face average and one-sided difference.
[[nodiscard]] double face_flux(double u_left, double u_right, double dr, const FluxModel& model);

/// 3 Gamma_{1/2} - Gamma_{3/2} at time level n + 1.
[[nodiscard]] double axis_bc_residual(std::span<const double> delta_u, const TransportConfig& config);
/// Full residual, length N + 1: axis row, interior rows, Dirichlet edge row.
/// Throws EvaluationError on nonpositive or non-finite profiles.
[[nodiscard]] Vector transport_residual(std::span<const double> delta_u, const TransportConfig& config);

/// Identity of size N + 1 whose first row holds the linearized steady-state
/// axis condition, (0.3 N, -0.4 N, 0.1 N).
[[nodiscard]] DenseMatrix transport_initial_jacobian(std::size_t n_cells);

[[nodiscard]] Problem make_transport(TransportConfig config);

}  // namespace hypersec
