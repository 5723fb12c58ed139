#pragma once

// Small-data families f(0) = eps g, d_t f(0) = eps k, and exact-solution states.

#include <utility>
#include <vector>

#include "tms/grid.hpp"

namespace tms {

enum class DataKind { kGaussianBump, kPlanePlusBump, kNullWave, kLinearPlane, kCustom };

struct DataFamily {
  DataKind kind = DataKind::kGaussianBump;
  double epsilon = 0.0;
  double sigma = 1.0;                // width (Gaussian sigma, or null-wave bump half-width)
  std::vector<double> center;        // spatial point, size n (empty = origin)
  std::vector<double> polarization;  // unit vector in R^q (empty = e_1)
  int null_axis = 0;                 // 0-based spatial axis of propagation
  int null_profile_power = 1;        // null-wave profile id m: phi(s)^m
  std::vector<double> plane_gradient;  // a_mu, size n+1; only a_0 may be nonzero
};

/// Gaussian tails are cut at this many widths; the cut radius is r_support.
inline constexpr double kGaussianTruncation = 12.0;

/// phi(s) = exp(1 - 1/(1 - s^2)) for |s| < 1, else 0; returns (phi, phi').
std::pair<double, double> bump_profile(double s);

/// Radius outside which realized data vanish; 0 for planar exact solutions.
double support_radius(const DataFamily& family);

/// Throws UnresolvableProfile (width <= 2 dx), IncompatibleWithPeriodicity
/// (plane with spatial gradient) or ValidationError (bad shapes, eps > 1).
void validate_family(const DataFamily& family, const GridSpec& grid);

/// Samples the family on the grid at t = 0. kCustom is rejected here (custom
/// data come from a snapshot file).
FieldState realize(const DataFamily& family, const GridSpec& grid);

/// The exact null-wave solution eps phi((t + c_k - x^k)/sigma) pol at time t,
/// periodised along the propagation axis.
FieldState null_wave_exact(const DataFamily& family, const GridSpec& grid, double t);

/// d_tt f of the exact null wave at time t (field-major).
std::vector<double> null_wave_acceleration(const DataFamily& family, const GridSpec& grid, double t);

}  // namespace tms
