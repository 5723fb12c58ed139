#include "tms/initial_data.hpp"

#include <cmath>

namespace tms {
namespace {

// (phi^m, (phi^m)', (phi^m)'') of the compact bump.
std::array<double, 3> bump_derivatives(double s, int m = 1) {
  if (!(std::abs(s) < 1.0)) return {0.0, 0.0, 0.0};
  const double w = 1.0 - s * s;
  const double phi = std::exp(m * (1.0 - 1.0 / w));
  const double g1 = -2.0 * m * s / (w * w);
  const double g2 = m * (-2.0 / (w * w) - 8.0 * s * s / (w * w * w));
  return {phi, g1 * phi, (g2 + g1 * g1) * phi};
}

// Wraps a displacement into [-L, L).
double wrap(double d, double L) {
  const double period = 2.0 * L;
  d = std::fmod(d + L, period);
  if (d < 0.0) d += period;
  return d - L;
}

std::vector<double> polarization_or_default(const DataFamily& family, int q) {
  if (family.polarization.empty()) {
    std::vector<double> p(static_cast<std::size_t>(q), 0.0);
    p[0] = 1.0;
    return p;
  }
  return family.polarization;
}

double center_component(const DataFamily& family, int k) {
  return family.center.empty() ? 0.0 : family.center[static_cast<std::size_t>(k)];
}

}  // namespace

std::pair<double, double> bump_profile(double s) {
  const auto d = bump_derivatives(s);
  return {d[0], d[1]};
}

double support_radius(const DataFamily& family) {
  switch (family.kind) {
    case DataKind::kGaussianBump:
    case DataKind::kPlanePlusBump:
      return kGaussianTruncation * family.sigma;
    default:
      return 0.0;
  }
}

void validate_family(const DataFamily& family, const GridSpec& grid) {
  grid.validate();
  if (!(family.epsilon >= 0.0 && family.epsilon <= 1.0))
    throw ValidationError("epsilon", "amplitude must lie in [0, 1]");
  if (!family.center.empty() && static_cast<int>(family.center.size()) != grid.n)
    throw ValidationError("center", "needs n components");
  if (!family.polarization.empty()) {
    if (static_cast<int>(family.polarization.size()) != grid.q)
      throw ValidationError("polarization", "needs q components");
    double norm2 = 0.0;
    for (double p : family.polarization) norm2 += p * p;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw ValidationError("polarization", "must be a unit vector");
  }
  const double dx = grid.dx();
  switch (family.kind) {
    case DataKind::kGaussianBump:
    case DataKind::kPlanePlusBump:
      if (!(family.sigma > 2.0 * dx))
        throw UnresolvableProfile("sigma = " + std::to_string(family.sigma) + " must exceed 2 dx = " +
                                  std::to_string(2.0 * dx));
      break;
    case DataKind::kNullWave:
      if (!(family.sigma > 2.0 * dx))
        throw UnresolvableProfile("sigma = " + std::to_string(family.sigma) + " must exceed 2 dx = " +
                                  std::to_string(2.0 * dx));
      if (!(family.sigma < grid.half_width))
        throw ValidationError("sigma", "null-wave profile must fit inside one period");
      if (family.null_axis < 0 || family.null_axis >= grid.n) throw ValidationError("null_axis", "out of range");
      if (family.null_profile_power < 1 || family.null_profile_power > 8)
        throw ValidationError("null_profile_power", "must be 1..8");
      break;
    case DataKind::kLinearPlane:
      break;
    case DataKind::kCustom:
      throw ValidationError("data", "custom data are loaded from a snapshot, not realized");
  }
  if (family.kind == DataKind::kLinearPlane || family.kind == DataKind::kPlanePlusBump) {
    if (!family.plane_gradient.empty()) {
      if (static_cast<int>(family.plane_gradient.size()) != grid.n + 1)
        throw ValidationError("plane_gradient", "needs n+1 components");
      for (int k = 1; k <= grid.n; ++k)
        if (family.plane_gradient[static_cast<std::size_t>(k)] != 0.0)
          throw IncompatibleWithPeriodicity("a plane with a spatial gradient is not periodic");
    }
  }
}

FieldState realize(const DataFamily& family, const GridSpec& grid) {
  validate_family(family, grid);
  if (family.kind == DataKind::kNullWave) return null_wave_exact(family, grid, 0.0);

  FieldState s(grid, 0.0);
  const std::size_t cells = grid.cells();
  const auto pol = polarization_or_default(family, grid.q);
  const double eps = family.epsilon;
  const double a0 = family.plane_gradient.empty() ? 0.0 : family.plane_gradient[0];
  const bool bump = family.kind != DataKind::kLinearPlane;
  const bool plane = family.kind != DataKind::kGaussianBump;
  const double cutoff2 = std::pow(kGaussianTruncation * family.sigma, 2);

  for (std::size_t c = 0; c < cells; ++c) {
    double profile = 0.0;
    if (bump) {
      const auto x = grid.position(c);
      double r2 = 0.0;
      for (int k = 0; k < grid.n; ++k) {
        const double d = wrap(x[k] - center_component(family, k), grid.half_width);
        r2 += d * d;
      }
      if (r2 <= cutoff2) profile = std::exp(-r2 / (family.sigma * family.sigma));
    }
    for (int I = 0; I < grid.q; ++I) {
      const double p = pol[static_cast<std::size_t>(I)];
      s.f[I * cells + c] = eps * (profile * p);  // exactly eps times the unit-amplitude sample
      s.v[I * cells + c] = plane ? eps * a0 * p : 0.0;
    }
  }
  return s;
}

FieldState null_wave_exact(const DataFamily& family, const GridSpec& grid, double t) {
  FieldState s(grid, t);
  const std::size_t cells = grid.cells();
  const auto pol = polarization_or_default(family, grid.q);
  const int k = family.null_axis;
  const double ck = center_component(family, k);
  for (std::size_t c = 0; c < cells; ++c) {
    const double xk = grid.position(c)[k];
    const double arg = wrap(t + ck - xk, grid.half_width) / family.sigma;
    const auto d = bump_derivatives(arg, family.null_profile_power);
    for (int I = 0; I < grid.q; ++I) {
      const double p = pol[static_cast<std::size_t>(I)] * family.epsilon;
      s.f[I * cells + c] = p * d[0];
      s.v[I * cells + c] = p * d[1] / family.sigma;
    }
  }
  return s;
}

std::vector<double> null_wave_acceleration(const DataFamily& family, const GridSpec& grid, double t) {
  const std::size_t cells = grid.cells();
  std::vector<double> a(cells * static_cast<std::size_t>(grid.q));
  const auto pol = polarization_or_default(family, grid.q);
  const int k = family.null_axis;
  const double ck = center_component(family, k);
  for (std::size_t c = 0; c < cells; ++c) {
    const double xk = grid.position(c)[k];
    const double arg = wrap(t + ck - xk, grid.half_width) / family.sigma;
    const auto d = bump_derivatives(arg, family.null_profile_power);
    for (int I = 0; I < grid.q; ++I)
      a[I * cells + c] = pol[static_cast<std::size_t>(I)] * family.epsilon * d[2] / (family.sigma * family.sigma);
  }
  return a;
}

}  // namespace tms
