#include "tms/vector_fields.hpp"

#include <algorithm>
#include <cmath>

namespace tms {

std::string VectorFieldId::name() const {
  switch (kind) {
    case FieldKind::kTranslation: return "d" + std::to_string(a);
    case FieldKind::kRotation: return "Omega" + std::to_string(a) + std::to_string(b);
    case FieldKind::kBoost: return "Omega0" + std::to_string(a);
    case FieldKind::kScaling: return "L";
  }
  return "?";
}

void validate_field(const VectorFieldId& z, int n) {
  switch (z.kind) {
    case FieldKind::kTranslation:
      if (z.a < 0 || z.a > n) throw ValidationError("vector_field", "translation index out of range");
      break;
    case FieldKind::kRotation:
      if (z.a < 1 || z.b > n || z.a >= z.b) throw ValidationError("vector_field", "rotation needs 1 <= a < b <= n");
      break;
    case FieldKind::kBoost:
      if (z.a < 1 || z.a > n) throw ValidationError("vector_field", "boost index out of range");
      break;
    case FieldKind::kScaling:
      break;
  }
}

std::vector<VectorFieldId> lorentz_fields(int n) {
  std::vector<VectorFieldId> out;
  for (int mu = 0; mu <= n; ++mu) out.push_back(VectorFieldId::translation(mu));
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back(VectorFieldId::rotation(a, b));
  for (int a = 1; a <= n; ++a) out.push_back(VectorFieldId::boost(a));
  out.push_back(VectorFieldId::scaling());
  return out;
}

AffineCoefficients coefficients(const VectorFieldId& z, int n) {
  validate_field(z, n);
  AffineCoefficients c;
  switch (z.kind) {
    case FieldKind::kTranslation:
      c.offset[z.a] = 1.0;
      break;
    case FieldKind::kRotation:
      c.C[z.a][z.b] = 1.0;
      c.C[z.b][z.a] = -1.0;
      break;
    case FieldKind::kBoost:
      c.C[z.a][0] = 1.0;
      c.C[0][z.a] = 1.0;
      break;
    case FieldKind::kScaling:
      for (int mu = 0; mu <= n; ++mu) c.C[mu][mu] = 1.0;
      break;
  }
  return c;
}

namespace {

// table[field][nu][alpha] for n = 1..3, built once from the coefficient matrices:
// [Z, d_nu] = -(d_nu c^alpha) d_alpha.
struct CommutatorTable {
  std::vector<std::array<std::array<double, 4>, 4>> rows;
  std::vector<VectorFieldId> fields;
};

const CommutatorTable& commutator_table(int n) {
  static const std::array<CommutatorTable, kMaxSpatialDim + 1> tables = [] {
    std::array<CommutatorTable, kMaxSpatialDim + 1> t{};
    for (int dim = 1; dim <= kMaxSpatialDim; ++dim) {
      t[dim].fields = lorentz_fields(dim);
      for (const auto& z : t[dim].fields) {
        const auto c = coefficients(z, dim);
        std::array<std::array<double, 4>, 4> row{};
        for (int nu = 0; nu <= dim; ++nu)
          for (int alpha = 0; alpha <= dim; ++alpha) row[nu][alpha] = c.C[alpha][nu] == 0.0 ? 0.0 : -c.C[alpha][nu];
        t[dim].rows.push_back(row);
      }
    }
    return t;
  }();
  if (n < 1 || n > kMaxSpatialDim) throw ValidationError("n", "spatial dimension must be in 1..3");
  return tables[n];
}

}  // namespace

std::array<double, 4> commutator_with_partial(const VectorFieldId& z, int nu, int n) {
  validate_field(z, n);
  if (nu < 0 || nu > n) throw ValidationError("nu", "out of range");
  const auto& table = commutator_table(n);
  const auto it = std::find(table.fields.begin(), table.fields.end(), z);
  return table.rows[static_cast<std::size_t>(it - table.fields.begin())][nu];
}

// ---------------------------------------------------------------------------

TimeTower sample(const SpaceTimeField& field, const GridSpec& grid, double t, int depth) {
  TimeTower tower;
  tower.grid = grid;
  tower.t = t;
  const std::size_t cells = grid.cells();
  for (int k = 0; k < depth; ++k) {
    GridFunction level(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const auto x = grid.position(c);
      level[c] = field.derivative({k, 0, 0, 0}, {t, x[0], x[1], x[2]});
    }
    tower.levels.push_back(std::move(level));
  }
  return tower;
}

TimeTower tower_from(const GridSpec& grid, double t, std::vector<GridFunction> levels) {
  for (const auto& l : levels)
    if (l.size() != grid.cells()) throw ValidationError("tower", "level size does not match the grid");
  TimeTower tower;
  tower.grid = grid;
  tower.t = t;
  tower.levels = std::move(levels);
  return tower;
}

namespace {

TimeTower shallower(const TimeTower& u, int by) {
  if (u.depth() <= by) throw ValidationError("tower", "not enough time levels");
  TimeTower out;
  out.grid = u.grid;
  out.t = u.t;
  out.levels.resize(static_cast<std::size_t>(u.depth() - by));
  return out;
}

}  // namespace

TimeTower partial(int nu, const TimeTower& u) {
  if (nu == 0) {
    TimeTower out = shallower(u, 1);
    for (int k = 0; k < out.depth(); ++k) out.levels[k] = u.levels[k + 1];
    return out;
  }
  TimeTower out = shallower(u, 0);
  for (int k = 0; k < out.depth(); ++k) out.levels[k] = spatial_derivative(u.grid, u.levels[k], nu - 1, 1);
  return out;
}

TimeTower apply(const VectorFieldId& z, const TimeTower& u) {
  const GridSpec& grid = u.grid;
  const int n = grid.n;
  const auto coeff = coefficients(z, n);
  TimeTower out = shallower(u, 1);
  const std::size_t cells = grid.cells();

  // spatial gradients of the levels that are needed
  std::vector<std::array<GridFunction, kMaxSpatialDim>> grad(static_cast<std::size_t>(out.depth()));
  for (int k = 0; k < out.depth(); ++k)
    for (int j = 0; j < n; ++j) grad[k][j] = spatial_derivative(grid, u.levels[k], j, 1);

  auto d = [&](int mu, int k, std::size_t c) {
    return mu == 0 ? u.levels[k + 1][c] : grad[k][mu - 1][c];
  };
  for (int k = 0; k < out.depth(); ++k) {
    GridFunction level(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const auto x = grid.position(c);
      const auto cz = coeff.at({u.t, x[0], x[1], x[2]});
      double s = 0.0;
      for (int mu = 0; mu <= n; ++mu) {
        s += cz[mu] * d(mu, k, c);
        if (k > 0 && coeff.C[mu][0] != 0.0) s += k * coeff.C[mu][0] * d(mu, k - 1, c);
      }
      level[c] = s;
    }
    out.levels[k] = std::move(level);
  }
  return out;
}

TimeTower box(const TimeTower& u) {
  TimeTower out = shallower(u, 2);
  const std::size_t cells = u.grid.cells();
  for (int k = 0; k < out.depth(); ++k) {
    GridFunction level(cells);
    for (std::size_t c = 0; c < cells; ++c) level[c] = -u.levels[k + 2][c];
    for (int j = 0; j < u.grid.n; ++j) {
      const auto d2 = spatial_derivative(u.grid, u.levels[k], j, 2);
      for (std::size_t c = 0; c < cells; ++c) level[c] += d2[c];
    }
    out.levels[k] = std::move(level);
  }
  return out;
}

namespace {

template <typename Op>
TimeTower combine(const TimeTower& a, const TimeTower& b, Op op) {
  if (!(a.grid == b.grid)) throw ValidationError("tower", "grids differ");
  TimeTower out;
  out.grid = a.grid;
  out.t = a.t;
  const int depth = std::min(a.depth(), b.depth());
  for (int k = 0; k < depth; ++k) {
    GridFunction level(a.levels[k].size());
    for (std::size_t c = 0; c < level.size(); ++c) level[c] = op(a.levels[k][c], b.levels[k][c]);
    out.levels.push_back(std::move(level));
  }
  return out;
}

}  // namespace

TimeTower operator-(const TimeTower& a, const TimeTower& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

TimeTower operator+(const TimeTower& a, const TimeTower& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

TimeTower operator*(double s, const TimeTower& a) {
  TimeTower out = a;
  for (auto& level : out.levels)
    for (double& x : level) x *= s;
  return out;
}

GridFunction apply_word(const std::vector<VectorFieldId>& word, const TimeTower& u) {
  TimeTower w = u;
  for (auto it = word.rbegin(); it != word.rend(); ++it) w = apply(*it, w);
  return w.levels.at(0);
}

// ---------------------------------------------------------------------------

double interior_max_difference(const GridSpec& grid, std::span<const double> lhs, std::span<const double> rhs,
                               int margin) {
  double worst = 0.0;
  for (std::size_t c = 0; c < grid.cells(); ++c) {
    const auto idx = grid.indices(c);
    bool inside = true;
    for (int k = 0; k < grid.n; ++k)
      if (idx[k] < margin || idx[k] >= grid.points - margin) inside = false;
    if (inside) worst = std::max(worst, std::abs(lhs[c] - rhs[c]));
  }
  return worst;
}

std::vector<CommutatorCheck> commutator_check(const std::vector<const SpaceTimeField*>& battery,
                                              const GridSpec& grid, double t, int margin) {
  const int n = grid.n;
  std::vector<CommutatorCheck> out;
  // Coordinate functions are affine, so a small grid with the same spacing suffices.
  GridSpec small = grid;
  small.points = std::min(grid.points, 2 * margin + 8 + (margin % 2));
  small.half_width = grid.half_width * small.points / grid.points;
  std::vector<TimeTower> coords, fields, boxed;
  for (int alpha = 0; alpha <= n; ++alpha) coords.push_back(sample(Polynomial::coordinate(alpha), small, t, 3));
  for (const SpaceTimeField* psi : battery) {
    fields.push_back(sample(*psi, grid, t, 4));
    boxed.push_back(box(fields.back()));
  }
  for (const VectorFieldId& z : lorentz_fields(n)) {
    // [Z, d_nu] x^alpha = -d_nu (Z x^alpha); compare with the table.
    CommutatorCheck partial_check{z.name(), "[Z,d_nu]", 0.0};
    for (int alpha = 0; alpha <= n; ++alpha) {
      const TimeTower& x = coords[static_cast<std::size_t>(alpha)];
      for (int nu = 0; nu <= n; ++nu) {
        const TimeTower lhs = apply(z, partial(nu, x)) - partial(nu, apply(z, x));
        const double expected = commutator_with_partial(z, nu, n)[alpha];
        const GridFunction rhs(small.cells(), expected);
        partial_check.max_deviation =
            std::max(partial_check.max_deviation, interior_max_difference(small, lhs.levels[0], rhs, margin));
      }
    }
    out.push_back(partial_check);

    CommutatorCheck box_check{z.name(), "[Z,Box]", 0.0};
    const double factor = z.kind == FieldKind::kScaling ? -2.0 : 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const TimeTower lhs = apply(z, boxed[i]) - box(apply(z, fields[i]));
      const TimeTower rhs = factor * boxed[i];
      box_check.max_deviation =
          std::max(box_check.max_deviation, interior_max_difference(grid, lhs.levels[0], rhs.levels[0], margin));
    }
    out.push_back(box_check);
  }
  return out;
}

}  // namespace tms
