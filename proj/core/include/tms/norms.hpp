#pragma once

// Vector-field Sobolev norms M1, M2, N1, N2 and the per-step monitors.

#include <array>
#include <cstddef>
#include <limits>

#include "tms/evolution.hpp"
#include "tms/grid.hpp"

namespace tms {

/// Spacetime derivatives of one scalar up to order 3 at a cell (index 0 is t).
struct Jet3 {
  double d0 = 0.0;
  std::array<double, 4> d1{};
  std::array<std::array<double, 4>, 4> d2{};
  std::array<std::array<std::array<double, 4>, 4>, 4> d3{};
};

/// levels = (u, d_t u, d_tt u, d_ttt u) as grid functions; spatial
/// derivatives by the 4th-order stencils.
Jet3 pointwise_jet(const GridSpec& grid, const std::array<const double*, 4>& levels, std::size_t cell,
                   const Neighborhood& nb);

/// One row of norms.csv plus the energy monitors.
///
///   M1 = sum_{|a|<=2} ||d Z^a f||_L2     M2 = sum_{|a|<=2} ||Z^a f||_L2
///   N1 = sum_{|a|<=1} ||d Z^a f||_inf    N2 = sum_{|a|<=2} ||Z^a f||_inf
///
/// with |d g|^2 = sum_I sum_mu (d_mu g^I)^2, |g|^2 = sum_I (g^I)^2, and the
/// |a| = 2 words taken over unordered pairs Z_i Z_j, i <= j.
struct NormsRecord {
  double t = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double energy = 0.0;  // ||d f||_L2
  double min_coercivity_margin = 0.5;
  double divergence_residual = std::numeric_limits<double>::quiet_NaN();

  // Partial sums by word length |a| = 0, 1, 2.
  std::array<double, 3> M1_by_order{};
  std::array<double, 3> M2_by_order{};
  std::array<double, 2> N1_by_order{};
  std::array<double, 3> N2_by_order{};

  double df_linf = 0.0;    // sup |d f|
  double source_l2 = 0.0;  // sum_I ||H^{mu nu}_{IJ} d_mu d_nu f^J||_L2
  double dH_linf = 0.0;    // sup sum |d_lambda H^{mu nu}_{IJ}|

  // Filled by the run driver from the series so far (see energy.hpp).
  double energy_bound = std::numeric_limits<double>::quiet_NaN();
  double energy_margin = std::numeric_limits<double>::quiet_NaN();
};

/// All norms and monitors of a state. `td` must hold d_tt f and d_ttt f of
/// the same state. Deterministic for any worker count.
NormsRecord compute_norms(const FieldState& state, const TimeDerivatives& td, HForm form = HForm::kEulerLagrange);

}  // namespace tms
