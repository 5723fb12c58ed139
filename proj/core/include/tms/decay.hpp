#pragma once

// Power-law fits N(t) ~ (1 + t)^p on a diagnostics series.

#include <cstddef>
#include <span>

namespace tms {

struct PowerLawFit {
  double exponent = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the exponent
  double intercept = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log N against log(1 + t) over samples with
/// t_lo <= t <= t_hi. Requires t_hi >= 2 t_lo (ValidationError), at least
/// three samples in the window and N > 0 on it (DegenerateSeries).
PowerLawFit power_law_fit(std::span<const double> t, std::span<const double> values, double t_lo, double t_hi);

}  // namespace tms
