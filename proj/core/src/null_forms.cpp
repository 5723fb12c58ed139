#include "tms/null_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tms {

std::string NullFormId::name() const {
  return is_q00 ? "Q00" : "Q" + std::to_string(a) + std::to_string(b);
}

std::vector<NullFormId> null_forms(int n) {
  std::vector<NullFormId> out{NullFormId::q00()};
  for (int a = 0; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) out.push_back(NullFormId::q(a, b));
  return out;
}

SquareMatrix<double> bilinear_matrix(const NullFormId& Q, int n) {
  SquareMatrix<double> B{};
  if (Q.is_q00) {
    for (int a = 0; a <= n; ++a) B[a][a] = eta(a, a);
    return B;
  }
  if (Q.a < 0 || Q.b > n || Q.a >= Q.b) throw ValidationError("null_form", "needs 0 <= a < b <= n");
  B[Q.a][Q.b] = 1.0;
  B[Q.b][Q.a] = -1.0;
  return B;
}

double null_form(const NullFormId& Q, int n, std::span<const double> du, std::span<const double> dw) {
  const auto B = bilinear_matrix(Q, n);
  double s = 0.0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if (B[a][b] != 0.0) s += B[a][b] * du[a] * dw[b];
  return s;
}

std::vector<TimeTower> tower_gradient(const TimeTower& u) {
  std::vector<TimeTower> du;
  for (int a = 0; a <= u.grid.n; ++a) du.push_back(partial(a, u));
  return du;
}

TimeTower null_form(const NullFormId& Q, const TimeTower& u, const TimeTower& w) {
  return null_form(Q, tower_gradient(u), tower_gradient(w));
}

TimeTower null_form(const NullFormId& Q, const std::vector<TimeTower>& du, const std::vector<TimeTower>& dw) {
  const TimeTower& u = du.at(0);
  const int n = u.grid.n;
  if (static_cast<int>(du.size()) != n + 1 || dw.size() != du.size())
    throw ValidationError("gradient", "needs n+1 components");
  const auto B = bilinear_matrix(Q, n);
  TimeTower out;
  out.grid = u.grid;
  out.t = u.t;
  const int depth = std::min(du[0].depth(), dw[0].depth());
  const std::size_t cells = u.grid.cells();
  for (int k = 0; k < depth; ++k) {
    // Leibniz: d_t^k (d_a u d_b w) = sum_j binom(k, j) d_t^j d_a u d_t^{k-j} d_b w
    GridFunction level(cells, 0.0);
    double binom = 1.0;
    for (int j = 0; j <= k; ++j) {
      for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
          if (B[a][b] == 0.0) continue;
          const double coef = binom * B[a][b];
          const auto& x = du[a].levels[j];
          const auto& y = dw[b].levels[k - j];
          for (std::size_t c = 0; c < cells; ++c) level[c] += coef * x[c] * y[c];
        }
      binom = binom * (k - j) / (j + 1);
    }
    out.levels.push_back(std::move(level));
  }
  return out;
}

namespace {

NullCommutation compute_commutation(const VectorFieldId& z, const NullFormId& Q, int n) {
  const auto C = coefficients(z, n).C;
  const auto B = bilinear_matrix(Q, n);
  const int d = n + 1;
  SquareMatrix<double> K{};
  for (int mu = 0; mu < d; ++mu)
    for (int be = 0; be < d; ++be) {
      double s = 0.0;
      for (int al = 0; al < d; ++al) s += C[mu][al] * B[al][be] + B[mu][al] * C[be][al];
      K[mu][be] = -s;
    }
  NullCommutation out;
  out.q00 = -K[0][0];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double sym = 0.5 * (K[a][b] + K[b][a]);
      if (sym != out.q00 * eta(a, b))
        throw std::logic_error("commutator of " + z.name() + " with " + Q.name() + " is not a null form");
      if (a < b) out.c[a][b] = 0.5 * (K[a][b] - K[b][a]);
    }
  return out;
}

}  // namespace

NullCommutation null_commutation(const VectorFieldId& z, const NullFormId& Q, int n) {
  validate_field(z, n);
  if (n < 1 || n > kMaxSpatialDim) throw ValidationError("n", "spatial dimension must be in 1..3");
  static const auto table = [] {
    std::array<std::vector<std::vector<NullCommutation>>, kMaxSpatialDim + 1> t;
    for (int dim = 1; dim <= kMaxSpatialDim; ++dim)
      for (const auto& zz : lorentz_fields(dim)) {
        std::vector<NullCommutation> row;
        for (const auto& qq : null_forms(dim)) row.push_back(compute_commutation(zz, qq, dim));
        t[dim].push_back(std::move(row));
      }
    return t;
  }();
  const auto fields = lorentz_fields(n);
  const auto forms = null_forms(n);
  const auto zi = std::find(fields.begin(), fields.end(), z) - fields.begin();
  const auto qi = std::find(forms.begin(), forms.end(), Q) - forms.begin();
  if (qi == static_cast<std::ptrdiff_t>(forms.size())) throw ValidationError("null_form", "needs 0 <= a < b <= n");
  return table[n][static_cast<std::size_t>(zi)][static_cast<std::size_t>(qi)];
}

double null_estimate_ratio(const NullFormId& Q, const TimeTower& u, const TimeTower& w, int margin) {
  const GridSpec& grid = u.grid;
  const auto q = null_form(Q, u, w);
  const std::size_t cells = grid.cells();
  GridFunction zu(cells, 0.0), zw(cells, 0.0);
  for (const auto& z : lorentz_fields(grid.n)) {
    const auto a = apply(z, u).levels.at(0);
    const auto b = apply(z, w).levels.at(0);
    for (std::size_t c = 0; c < cells; ++c) {
      zu[c] += std::abs(a[c]);
      zw[c] += std::abs(b[c]);
    }
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const auto idx = grid.indices(c);
    bool inside = true;
    for (int k = 0; k < grid.n; ++k)
      if (idx[k] < margin || idx[k] >= grid.points - margin) inside = false;
    if (!inside) continue;
    const auto x = grid.position(c);
    double r2 = 0.0;
    for (int k = 0; k < grid.n; ++k) r2 += x[k] * x[k];
    const double weight = 1.0 + std::abs(u.t) + std::sqrt(r2);
    const double denom = std::max(zu[c] * zw[c], 1e-30);
    worst = std::max(worst, std::abs(q.levels.at(0)[c]) * weight / denom);
  }
  return worst;
}

ExpansionCheck det_expansion_check(const FirstJet& jet, std::span<const double> eps) {
  ExpansionCheck out;
  const int d = jet.dim();
  double quad = 0.0;
  for (int I = 0; I < jet.q; ++I)
    for (int a = 0; a < d; ++a) quad += eta(a, a) * jet.df[I][a] * jet.df[I][a];
  for (double e : eps) {
    const FirstJet scaled = jet.scaled(e);
    const double minus_det = -detail::determinant(induced_metric(scaled), d);
    out.eps.push_back(e);
    out.remainder.push_back(std::abs(minus_det - 1.0 - e * e * quad));
  }
  out.exact = std::all_of(out.remainder.begin(), out.remainder.end(), [](double r) { return r < 1e-15; });
  for (std::size_t i = 0; i + 1 < out.remainder.size(); ++i)
    out.order.push_back(std::log(out.remainder[i] / out.remainder[i + 1]) / std::log(out.eps[i] / out.eps[i + 1]));
  return out;
}

}  // namespace tms
