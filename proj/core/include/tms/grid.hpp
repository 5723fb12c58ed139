#pragma once

// Periodic spatial grid, field state, 4th-order central stencils and
// bit-reproducible reductions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tms/errors.hpp"

namespace tms {

inline constexpr int kMaxSpatialDim = 3;

/// Box [-L, L)^n, periodic, N points per axis.
struct GridSpec {
  int n = 2;
  int q = 1;
  double half_width = 1.0;
  int points = 16;

  /// Throws ValidationError unless n in 1..3, q >= 1, L > 0, N >= 16 and even.
  void validate() const;

  double dx() const { return 2.0 * half_width / points; }
  std::size_t cells() const;
  /// Stride of `axis` (0-based spatial axis) in row-major storage; axis 0 is slowest.
  std::size_t stride(int axis) const;
  double coordinate(int index) const { return -half_width + index * dx(); }
  /// Per-axis indices of a flat cell index.
  std::array<int, kMaxSpatialDim> indices(std::size_t cell) const;
  std::array<double, kMaxSpatialDim> position(std::size_t cell) const;
  std::size_t flat(const std::array<int, kMaxSpatialDim>& idx) const;

  bool operator==(const GridSpec&) const = default;
};

/// A grid function: one scalar per cell.
using GridFunction = std::vector<double>;

/// (f, d_t f) on the grid at time t. Field-major: f[I * cells + cell].
struct FieldState {
  GridSpec grid;
  double t = 0.0;
  std::vector<double> f;
  std::vector<double> v;

  FieldState() = default;
  explicit FieldState(const GridSpec& g, double time = 0.0);

  std::span<double> field(int I) { return {f.data() + I * grid.cells(), grid.cells()}; }
  std::span<const double> field(int I) const { return {f.data() + I * grid.cells(), grid.cells()}; }
  std::span<double> velocity(int I) { return {v.data() + I * grid.cells(), grid.cells()}; }
  std::span<const double> velocity(int I) const { return {v.data() + I * grid.cells(), grid.cells()}; }

  /// Index of the first non-finite sample in f then v, or -1 if none.
  std::ptrdiff_t first_non_finite() const;
};

// ---------------------------------------------------------------------------
// Stencils

/// Periodic neighbour offsets of one cell, for m = -4..4 along each axis.
struct Neighborhood {
  std::array<std::array<std::ptrdiff_t, 9>, kMaxSpatialDim> off{};

  std::ptrdiff_t operator()(int axis, int m) const { return off[axis][m + 4]; }
};

Neighborhood neighborhood(const GridSpec& grid, std::size_t cell);

namespace stencil {

/// (1/12dx)(-u_{+2} + 8u_{+1} - 8u_{-1} + u_{-2})
inline double d1(const double* u, std::size_t c, const Neighborhood& nb, int axis, double inv12dx) {
  return (-u[c + nb(axis, 2)] + 8.0 * u[c + nb(axis, 1)] - 8.0 * u[c + nb(axis, -1)] +
          u[c + nb(axis, -2)]) *
         inv12dx;
}

/// (1/12dx^2)(-u_{+2} + 16u_{+1} - 30u_0 + 16u_{-1} - u_{-2})
inline double d2(const double* u, std::size_t c, const Neighborhood& nb, int axis, double inv12dx2) {
  return (-u[c + nb(axis, 2)] + 16.0 * u[c + nb(axis, 1)] - 30.0 * u[c] + 16.0 * u[c + nb(axis, -1)] -
          u[c + nb(axis, -2)]) *
         inv12dx2;
}

/// d1 along `outer` applied to d1 along `inner` (outer != inner). Neighbours
/// along `outer` share the `inner` offsets of the centre cell.
inline double d11(const double* u, std::size_t c, const Neighborhood& nb, int outer, int inner,
                  double inv12dx) {
  auto at = [&](int m) { return d1(u, c + nb(outer, m), nb, inner, inv12dx); };
  return (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) * inv12dx;
}

/// Derivative with per-axis orders (each 0..3) as a tensor product of 1D
/// stencils; order 3 is d1 composed with d2.
double mixed(const double* u, std::size_t c, const Neighborhood& nb, const GridSpec& grid,
             const std::array<int, kMaxSpatialDim>& orders);

}  // namespace stencil

/// d^order/dx_axis^order of a single grid function (order 1 or 2).
GridFunction spatial_derivative(const GridSpec& grid, std::span<const double> u, int axis, int order);

/// Same, for field I of the state.
GridFunction spatial_derivative(const FieldState& state, int field, int axis, int order);

/// Mixed second derivative d_j d_k by composed first-derivative stencils.
GridFunction mixed_derivative(const GridSpec& grid, std::span<const double> u, int axis_j, int axis_k);

// ---------------------------------------------------------------------------
// Reductions

/// Pairwise tree sum whose shape depends only on the input length.
double pairwise_sum(std::span<const double> values);

enum class NormKind { kL2, kLinf, kL1Weighted };

/// L2 = sqrt(sum u^2 dx^n), Linf = max|u|, L1_weighted = sum |u| w dx^n.
/// `weight` is only read for kL1Weighted and must match u in length.
double reduce_norm(const GridSpec& grid, std::span<const double> u, NormKind kind,
                   std::span<const double> weight = {});

/// Cell volume dx^n.
double cell_volume(const GridSpec& grid);

}  // namespace tms
