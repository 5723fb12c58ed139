#pragma once

// Method-of-lines evolution of H^{mu nu}_{JL}(df) d_mu d_nu f^J = 0:
// per-cell solve for d_tt f, classical RK4, and the divergence-form
// residual used as an independent cross-check.

#include <cstddef>
#include <span>
#include <vector>

#include "tms/geometry.hpp"
#include "tms/grid.hpp"

namespace tms {

/// The evolved system. kLinearWave (d_tt f = Laplacian f, same stencils)
/// is the eps -> 0 reference used by the nonlinearity-scaling checks.
enum class System { kMinimalSurface, kLinearWave };

struct EngineOptions {
  System system = System::kMinimalSurface;
  HForm form = HForm::kEulerLagrange;
};

/// d_tt f on the grid plus the coercivity summary of the state it came from.
struct Acceleration {
  std::vector<double> a;  // field-major, like FieldState::f
  double min_margin = 0.5;
  std::size_t min_cell = 0;
  double max_abs = 0.0;
};

/// Solves H^{00}_{JL} a^J = -2 H^{0k}_{JL} d_k v^J - H^{jk}_{JL} d_j d_k f^J
/// cell by cell.
///
/// Throws NonFinite if any sample is not finite, CoercivityLost for the
/// lowest-index cell whose margin is <= 0 (a non-Lorentzian metric counts as
/// margin -inf), and SingularBlock if the q x q block cannot be inverted.
Acceleration second_time_derivative(const FieldState& state, const EngineOptions& options = {});

/// d_ttt f: the time derivative of the discrete right-hand side along the
/// solution, with `a` = d_tt f. Computed by forward-mode differentiation.
std::vector<double> third_time_derivative(const FieldState& state, std::span<const double> a,
                                          const EngineOptions& options = {});

/// Time derivatives supplied to the diagnostics: d_tt f and d_ttt f.
struct TimeDerivatives {
  std::vector<double> a;
  std::vector<double> a_t;
};

TimeDerivatives time_derivatives(const FieldState& state, const EngineOptions& options = {});

/// One classical RK4 step of d/dt (f, v) = (v, a(f, v)). `first_stage`, when
/// given, must be second_time_derivative(state). dt may be negative.
FieldState rk4_step(const FieldState& state, double dt, const EngineOptions& options = {},
                    const Acceleration* first_stage = nullptr);

/// Per-field L2 norm of  Box f^I - d_mu[F^{mu nu} f^I_nu]  at the middle of
/// 3 or 5 equally spaced time levels (2nd or 4th order in dt).
std::vector<double> divergence_residual_per_field(std::span<const FieldState* const> levels);

/// Max over fields of divergence_residual_per_field.
double divergence_residual(std::span<const FieldState* const> levels);

}  // namespace tms
