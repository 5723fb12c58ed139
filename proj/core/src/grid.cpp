#include "tms/grid.hpp"

#include <algorithm>
#include <cmath>

namespace tms {

void GridSpec::validate() const {
  if (n < 1 || n > kMaxSpatialDim) throw ValidationError("n", "spatial dimension must be in 1..3");
  if (q < 1) throw ValidationError("q", "codimension must be >= 1");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ValidationError("L", "half-width must be positive");
  if (points < 16 || points % 2 != 0) throw ValidationError("N", "points per axis must be even and >= 16");
}

std::size_t GridSpec::cells() const {
  std::size_t c = 1;
  for (int k = 0; k < n; ++k) c *= static_cast<std::size_t>(points);
  return c;
}

std::size_t GridSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int k = axis + 1; k < n; ++k) s *= static_cast<std::size_t>(points);
  return s;
}

std::array<int, kMaxSpatialDim> GridSpec::indices(std::size_t cell) const {
  std::array<int, kMaxSpatialDim> idx{};
  for (int k = n - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(cell % static_cast<std::size_t>(points));
    cell /= static_cast<std::size_t>(points);
  }
  return idx;
}

std::array<double, kMaxSpatialDim> GridSpec::position(std::size_t cell) const {
  const auto idx = indices(cell);
  std::array<double, kMaxSpatialDim> x{};
  for (int k = 0; k < n; ++k) x[k] = coordinate(idx[k]);
  return x;
}

std::size_t GridSpec::flat(const std::array<int, kMaxSpatialDim>& idx) const {
  std::size_t c = 0;
  for (int k = 0; k < n; ++k) {
    const int i = ((idx[k] % points) + points) % points;
    c = c * static_cast<std::size_t>(points) + static_cast<std::size_t>(i);
  }
  return c;
}

FieldState::FieldState(const GridSpec& g, double time)
    : grid(g), t(time), f(g.cells() * static_cast<std::size_t>(g.q), 0.0), v(f.size(), 0.0) {}

std::ptrdiff_t FieldState::first_non_finite() const {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!std::isfinite(f[i])) return static_cast<std::ptrdiff_t>(i);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) return static_cast<std::ptrdiff_t>(f.size() + i);
  return -1;
}

Neighborhood neighborhood(const GridSpec& grid, std::size_t cell) {
  Neighborhood nb;
  const auto idx = grid.indices(cell);
  const int N = grid.points;
  for (int k = 0; k < grid.n; ++k) {
    const auto s = static_cast<std::ptrdiff_t>(grid.stride(k));
    if (idx[k] >= 4 && idx[k] < N - 4) {
      for (int m = -4; m <= 4; ++m) nb.off[k][m + 4] = m * s;
      continue;
    }
    for (int m = -4; m <= 4; ++m) {
      const int j = (idx[k] + m + N) % N;
      nb.off[k][m + 4] = static_cast<std::ptrdiff_t>(j - idx[k]) * s;
    }
  }
  return nb;
}

namespace stencil {
namespace {

struct Tap {
  int offset;
  double weight;
};

struct Taps1D {
  std::array<Tap, 9> taps{};
  int count = 0;
};

// Unscaled 1D stencils; the 1/dx^order factor is applied by the caller.
const std::array<Taps1D, 4>& unit_taps() {
  static const std::array<Taps1D, 4> table = [] {
    std::array<Taps1D, 4> t{};
    t[0].taps[0] = {0, 1.0};
    t[0].count = 1;
    const double w1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
    const double w2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};
    for (int m = -2; m <= 2; ++m)
      if (w1[m + 2] != 0.0) t[1].taps[t[1].count++] = {m, w1[m + 2]};
    for (int m = -2; m <= 2; ++m) t[2].taps[t[2].count++] = {m, w2[m + 2]};
    double w3[9] = {};
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) w3[a + b + 4] += w1[a + 2] * w2[b + 2];
    for (int m = -4; m <= 4; ++m)
      if (w3[m + 4] != 0.0) t[3].taps[t[3].count++] = {m, w3[m + 4]};
    return t;
  }();
  return table;
}

double mixed_rec(const double* u, std::size_t c, const Neighborhood& nb, int axis, int n,
                 const std::array<int, kMaxSpatialDim>& orders) {
  if (axis == n) return u[c];
  const int o = orders[axis];
  if (o == 0) return mixed_rec(u, c, nb, axis + 1, n, orders);
  const Taps1D& taps = unit_taps()[o];
  double s = 0.0;
  for (int i = 0; i < taps.count; ++i)
    s += taps.taps[i].weight * mixed_rec(u, c + nb(axis, taps.taps[i].offset), nb, axis + 1, n, orders);
  return s;
}

}  // namespace

double mixed(const double* u, std::size_t c, const Neighborhood& nb, const GridSpec& grid,
             const std::array<int, kMaxSpatialDim>& orders) {
  int total = 0;
  for (int k = 0; k < grid.n; ++k) total += orders[k];
  double scale = 1.0;
  const double inv = 1.0 / grid.dx();
  for (int k = 0; k < total; ++k) scale *= inv;
  return mixed_rec(u, c, nb, 0, grid.n, orders) * scale;
}

}  // namespace stencil

GridFunction spatial_derivative(const GridSpec& grid, std::span<const double> u, int axis, int order) {
  if (axis < 0 || axis >= grid.n) throw ValidationError("axis", "out of range");
  if (order != 1 && order != 2) throw ValidationError("order", "must be 1 or 2");
  const std::size_t cells = grid.cells();
  GridFunction out(cells);
  const double dx = grid.dx();
  const double inv1 = 1.0 / (12.0 * dx);
  const double inv2 = 1.0 / (12.0 * dx * dx);
  for (std::size_t c = 0; c < cells; ++c) {
    const Neighborhood nb = neighborhood(grid, c);
    out[c] = order == 1 ? stencil::d1(u.data(), c, nb, axis, inv1) : stencil::d2(u.data(), c, nb, axis, inv2);
  }
  return out;
}

GridFunction spatial_derivative(const FieldState& state, int field, int axis, int order) {
  return spatial_derivative(state.grid, state.field(field), axis, order);
}

GridFunction mixed_derivative(const GridSpec& grid, std::span<const double> u, int axis_j, int axis_k) {
  if (axis_j == axis_k) return spatial_derivative(grid, u, axis_j, 2);
  const std::size_t cells = grid.cells();
  GridFunction out(cells);
  const double inv1 = 1.0 / (12.0 * grid.dx());
  for (std::size_t c = 0; c < cells; ++c) {
    const Neighborhood nb = neighborhood(grid, c);
    out[c] = stencil::d11(u.data(), c, nb, axis_j, axis_k, inv1);
  }
  return out;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double x : values) s += x;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double cell_volume(const GridSpec& grid) { return std::pow(grid.dx(), grid.n); }

double reduce_norm(const GridSpec& grid, std::span<const double> u, NormKind kind,
                   std::span<const double> weight) {
  switch (kind) {
    case NormKind::kLinf: {
      double m = 0.0;
      for (double x : u) m = std::max(m, std::abs(x));
      return m;
    }
    case NormKind::kL2: {
      std::vector<double> sq(u.size());
      std::transform(u.begin(), u.end(), sq.begin(), [](double x) { return x * x; });
      return std::sqrt(pairwise_sum(sq) * cell_volume(grid));
    }
    case NormKind::kL1Weighted: {
      if (weight.size() != u.size()) throw ValidationError("weight", "length must match the grid function");
      std::vector<double> a(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::abs(u[i]) * weight[i];
      return pairwise_sum(a) * cell_volume(grid);
    }
  }
  return 0.0;
}

}  // namespace tms
