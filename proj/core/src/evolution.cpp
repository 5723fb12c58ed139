#include "tms/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <type_traits>

#include "tms/parallel.hpp"

namespace tms {
namespace {

template <typename T>
using CodimVector = std::array<T, kMaxCodim>;
template <typename T>
using CodimMatrix = std::array<std::array<T, kMaxCodim>, kMaxCodim>;

template <typename T>
struct CellInputs {
  BasicJet<T> jet;
  std::array<std::array<T, kMaxSpatialDim>, kMaxCodim> dv{};  // d_k v^J
  std::array<std::array<std::array<T, kMaxSpatialDim>, kMaxSpatialDim>, kMaxCodim> ddf{};  // d_j d_k f^J
};

// Solves A x = b for the q x q block. Closed form for q <= 3, partial
// pivoting (largest magnitude, ties to the lowest row) above that.
template <typename T>
bool solve_block(CodimMatrix<T> A, CodimVector<T> b, int q, CodimVector<T>& x) {
  if (q == 1) {
    if (std::abs(value_of(A[0][0])) < kDegeneracyThreshold) return false;
    x[0] = b[0] / A[0][0];
    return true;
  }
  if (q <= 3) {
    SquareMatrix<T> m{};
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) m[i][j] = A[i][j];
    const T det = detail::determinant(m, q);
    if (std::abs(value_of(det)) < kDegeneracyThreshold) return false;
    const SquareMatrix<T> adj = detail::adjugate(m, q);
    for (int i = 0; i < q; ++i) {
      T s{};
      for (int j = 0; j < q; ++j) s += adj[i][j] * b[j];
      x[i] = s / det;
    }
    return true;
  }
  for (int col = 0; col < q; ++col) {
    int pivot = col;
    for (int r = col + 1; r < q; ++r)
      if (std::abs(value_of(A[r][col])) > std::abs(value_of(A[pivot][col]))) pivot = r;
    if (std::abs(value_of(A[pivot][col])) < kDegeneracyThreshold) return false;
    std::swap(A[pivot], A[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < q; ++r) {
      const T factor = A[r][col] / A[col][col];
      for (int c = col; c < q; ++c) A[r][c] -= factor * A[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (int r = q - 1; r >= 0; --r) {
    T s = b[r];
    for (int c = r + 1; c < q; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return true;
}

struct CellResult {
  double margin = 0.0;
  bool solved = true;
};

// Assembles H from the jet on the fly (same formula as geometry's fill_H),
// accumulates the coercivity sum and the right-hand side, and solves for
// d_tt f. Throws SpacelikeDegeneration from metric_core.
template <int D, typename T>
CellResult solve_cell(const CellInputs<T>& in, HForm form, CodimVector<T>& a) {
  const BasicJet<T>& jet = in.jet;
  constexpr int d = D;
  const int q = jet.q;

  // Same arithmetic as metric_core, with the dimension fixed at compile time.
  MetricCore<T> m;
  for (int al = 0; al < d; ++al)
    for (int be = al; be < d; ++be) {
      T s = T(eta(al, be));
      for (int I = 0; I < q; ++I) s += jet.df[I][al] * jet.df[I][be];
      m.h[al][be] = s;
      m.h[be][al] = s;
    }
  m.det_h = detail::determinant(m.h, d);
  if (!(value_of(m.det_h) < -kDegeneracyThreshold)) throw SpacelikeDegeneration(value_of(m.det_h));
  m.h_inv = detail::symmetric_inverse_from(m.h, d, m.det_h);
  {
    using std::sqrt;
    m.vol = sqrt(-m.det_h);
  }

  std::array<std::array<T, kMaxDim>, kMaxCodim> u{};
  for (int J = 0; J < q; ++J) {
    for (int mu = 0; mu < d; ++mu) {
      T s{};
      for (int al = 0; al < d; ++al) s += m.h_inv[mu][al] * jet.df[J][al];
      u[J][mu] = s;
    }
  }
  CodimMatrix<T> G{};
  for (int J = 0; J < q; ++J) {
    for (int L = J; L < q; ++L) {
      T s{};
      for (int al = 0; al < d; ++al) s += jet.df[J][al] * u[L][al];
      G[J][L] = s;
      G[L][J] = s;
    }
  }

  const bool cross = form == HForm::kWithCrossTerms;
  CodimMatrix<T> A{};
  CodimVector<T> b{};
  double coercive_sum = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu; nu < d; ++nu) {
      const T hmn = m.h_inv[mu][nu];
      const double wmn = mu == nu ? 1.0 : 2.0;
      for (int J = 0; J < q; ++J) {
        for (int L = J; L < q; ++L) {
          T bracket = (J == L ? hmn : T(0.0)) - hmn * G[J][L];
          if (cross) bracket -= u[J][mu] * u[L][nu] + u[L][mu] * u[J][nu];
          const T H = m.vol * bracket;
          const double background = J == L ? eta(mu, nu) : 0.0;
          coercive_sum += wmn * (J == L ? 1.0 : 2.0) * std::abs(value_of(H) - background);
          if (mu == 0 && nu == 0) {
            A[L][J] = H;
            A[J][L] = H;
          } else if (mu == 0) {
            const int k = nu - 1;
            b[L] -= 2.0 * H * in.dv[J][k];
            if (J != L) b[J] -= 2.0 * H * in.dv[L][k];
          } else {
            const int j = mu - 1;
            const int k = nu - 1;
            b[L] -= wmn * H * in.ddf[J][j][k];
            if (J != L) b[J] -= wmn * H * in.ddf[L][j][k];
          }
        }
      }
    }
  }
  CellResult result;
  result.margin = 0.5 - coercive_sum;
  result.solved = solve_block(A, b, q, a);
  return result;
}

// Calls body(std::integral_constant<int, n + 1>{}) so that cell kernels see
// the spacetime dimension as a constant.
template <typename Body>
void with_dimension(int n, Body&& body) {
  switch (n) {
    case 1: body(std::integral_constant<int, 2>{}); break;
    case 2: body(std::integral_constant<int, 3>{}); break;
    case 3: body(std::integral_constant<int, 4>{}); break;
    default: throw ValidationError("n", "spatial dimension must be in 1..3");
  }
}

struct RangeSummary {
  std::size_t begin = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t min_cell = 0;
  double max_abs = 0.0;
  std::ptrdiff_t first_violation = -1;
  double violation_margin = 0.0;
  std::ptrdiff_t first_singular = -1;
};

void check_finite(const FieldState& state) {
  const std::ptrdiff_t bad = state.first_non_finite();
  if (bad >= 0) throw NonFinite(static_cast<std::size_t>(bad));
}

Acceleration linear_wave_acceleration(const FieldState& state) {
  const GridSpec& g = state.grid;
  const std::size_t cells = g.cells();
  Acceleration out;
  out.a.assign(state.f.size(), 0.0);
  const double inv2 = 1.0 / (12.0 * g.dx() * g.dx());
  parallel_for(cells, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const Neighborhood nb = neighborhood(g, c);
      for (int I = 0; I < g.q; ++I) {
        const double* f = state.f.data() + I * cells;
        double s = 0.0;
        for (int k = 0; k < g.n; ++k) s += stencil::d2(f, c, nb, k, inv2);
        out.a[I * cells + c] = s;
      }
    }
  });
  for (double x : out.a) out.max_abs = std::max(out.max_abs, std::abs(x));
  return out;
}

}  // namespace

Acceleration second_time_derivative(const FieldState& state, const EngineOptions& options) {
  check_finite(state);
  if (options.system == System::kLinearWave) return linear_wave_acceleration(state);

  const GridSpec& g = state.grid;
  const std::size_t cells = g.cells();
  const int n = g.n;
  const int q = g.q;
  if (q > kMaxCodim) throw ValidationError("q", "codimension exceeds the compiled maximum of 6");
  Acceleration out;
  out.a.assign(state.f.size(), 0.0);
  const double inv1 = 1.0 / (12.0 * g.dx());
  const double inv2 = 1.0 / (12.0 * g.dx() * g.dx());

  std::mutex mu;
  std::vector<RangeSummary> summaries;
  parallel_for(cells, [&](std::size_t begin, std::size_t end) {
    with_dimension(n, [&](auto dim) {
      constexpr int D = decltype(dim)::value;
      constexpr int n = D - 1;
      RangeSummary sum;
      sum.begin = begin;
      CellInputs<double> in;
      in.jet = BasicJet<double>(n, q);
      CodimVector<double> a{};
      for (std::size_t c = begin; c < end; ++c) {
        const Neighborhood nb = neighborhood(g, c);
        for (int J = 0; J < q; ++J) {
          const double* f = state.f.data() + J * cells;
          const double* v = state.v.data() + J * cells;
          in.jet.df[J][0] = v[c];
          for (int k = 0; k < n; ++k) {
            in.jet.df[J][k + 1] = stencil::d1(f, c, nb, k, inv1);
            in.dv[J][k] = stencil::d1(v, c, nb, k, inv1);
            in.ddf[J][k][k] = stencil::d2(f, c, nb, k, inv2);
            for (int j = 0; j < k; ++j) {
              const double m = stencil::d11(f, c, nb, j, k, inv1);
              in.ddf[J][j][k] = m;
              in.ddf[J][k][j] = m;
            }
          }
        }
        CellResult r;
        try {
          r = solve_cell<D>(in, options.form, a);
        } catch (const SpacelikeDegeneration&) {
          r.margin = -std::numeric_limits<double>::infinity();
          r.solved = true;
          a.fill(std::numeric_limits<double>::quiet_NaN());
        }
        if (r.margin < sum.min_margin) {
          sum.min_margin = r.margin;
          sum.min_cell = c;
        }
        if (!(r.margin > 0.0) && sum.first_violation < 0) {
          sum.first_violation = static_cast<std::ptrdiff_t>(c);
          sum.violation_margin = r.margin;
        }
        if (!r.solved && sum.first_singular < 0) sum.first_singular = static_cast<std::ptrdiff_t>(c);
        for (int J = 0; J < q; ++J) {
          out.a[J * cells + c] = a[J];
          if (std::isfinite(a[J])) sum.max_abs = std::max(sum.max_abs, std::abs(a[J]));
        }
      }
      std::lock_guard lock(mu);
      summaries.push_back(sum);
    });
  });
  std::sort(summaries.begin(), summaries.end(),
            [](const RangeSummary& x, const RangeSummary& y) { return x.begin < y.begin; });

  out.min_margin = std::numeric_limits<double>::infinity();
  for (const RangeSummary& s : summaries) {
    if (s.first_violation >= 0) throw CoercivityLost(static_cast<std::size_t>(s.first_violation), s.violation_margin);
  }
  for (const RangeSummary& s : summaries) {
    if (s.first_singular >= 0) throw SingularBlock(static_cast<std::size_t>(s.first_singular));
    if (s.min_margin < out.min_margin) {
      out.min_margin = s.min_margin;
      out.min_cell = s.min_cell;
    }
    out.max_abs = std::max(out.max_abs, s.max_abs);
  }
  return out;
}

std::vector<double> third_time_derivative(const FieldState& state, std::span<const double> a,
                                          const EngineOptions& options) {
  const GridSpec& g = state.grid;
  const std::size_t cells = g.cells();
  const int n = g.n;
  const int q = g.q;
  std::vector<double> out(state.f.size(), 0.0);
  const double inv1 = 1.0 / (12.0 * g.dx());
  const double inv2 = 1.0 / (12.0 * g.dx() * g.dx());

  if (options.system == System::kLinearWave) {
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        const Neighborhood nb = neighborhood(g, c);
        for (int I = 0; I < q; ++I) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += stencil::d2(state.v.data() + I * cells, c, nb, k, inv2);
          out[I * cells + c] = s;
        }
      }
    });
    return out;
  }

  parallel_for(cells, [&](std::size_t begin, std::size_t end) {
    with_dimension(n, [&](auto dim) {
      constexpr int D = decltype(dim)::value;
      constexpr int n = D - 1;
      CellInputs<Dual> in;
      in.jet = BasicJet<Dual>(n, q);
      CodimVector<Dual> res{};
      for (std::size_t c = begin; c < end; ++c) {
        const Neighborhood nb = neighborhood(g, c);
        for (int J = 0; J < q; ++J) {
          const double* f = state.f.data() + J * cells;
          const double* v = state.v.data() + J * cells;
          const double* acc = a.data() + J * cells;
          in.jet.df[J][0] = Dual(v[c], acc[c]);
          for (int k = 0; k < n; ++k) {
            in.jet.df[J][k + 1] = Dual(stencil::d1(f, c, nb, k, inv1), stencil::d1(v, c, nb, k, inv1));
            in.dv[J][k] = Dual(stencil::d1(v, c, nb, k, inv1), stencil::d1(acc, c, nb, k, inv1));
            in.ddf[J][k][k] = Dual(stencil::d2(f, c, nb, k, inv2), stencil::d2(v, c, nb, k, inv2));
            for (int j = 0; j < k; ++j) {
              const Dual m(stencil::d11(f, c, nb, j, k, inv1), stencil::d11(v, c, nb, j, k, inv1));
              in.ddf[J][j][k] = m;
              in.ddf[J][k][j] = m;
            }
          }
        }
        try {
          solve_cell<D>(in, options.form, res);
          for (int J = 0; J < q; ++J) out[J * cells + c] = res[J].d;
        } catch (const SpacelikeDegeneration&) {
          for (int J = 0; J < q; ++J) out[J * cells + c] = std::numeric_limits<double>::quiet_NaN();
        }
      }
    });
  });
  return out;
}

TimeDerivatives time_derivatives(const FieldState& state, const EngineOptions& options) {
  TimeDerivatives td;
  td.a = second_time_derivative(state, options).a;
  td.a_t = third_time_derivative(state, td.a, options);
  return td;
}

FieldState rk4_step(const FieldState& state, double dt, const EngineOptions& options,
                    const Acceleration* first_stage) {
  const std::size_t size = state.f.size();
  Acceleration k1_storage;
  if (first_stage == nullptr) {
    k1_storage = second_time_derivative(state, options);
    first_stage = &k1_storage;
  }
  const std::vector<double>& k1a = first_stage->a;

  auto stage = [&](const std::vector<double>& kv, const std::vector<double>& ka, double h) {
    FieldState s(state.grid, state.t + h);
    for (std::size_t i = 0; i < size; ++i) {
      s.f[i] = state.f[i] + h * kv[i];
      s.v[i] = state.v[i] + h * ka[i];
    }
    return s;
  };

  const FieldState s2 = stage(state.v, k1a, 0.5 * dt);
  const std::vector<double> k2a = second_time_derivative(s2, options).a;
  const FieldState s3 = stage(s2.v, k2a, 0.5 * dt);
  const std::vector<double> k3a = second_time_derivative(s3, options).a;
  const FieldState s4 = stage(s3.v, k3a, dt);
  const std::vector<double> k4a = second_time_derivative(s4, options).a;

  FieldState out(state.grid, state.t + dt);
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < size; ++i) {
    out.f[i] = state.f[i] + w * (state.v[i] + 2.0 * s2.v[i] + 2.0 * s3.v[i] + s4.v[i]);
    out.v[i] = state.v[i] + w * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
  }
  return out;
}

namespace {

// Flux G^mu_I = F^{mu nu} f^I_nu at every cell of one level; only mu = 0 is
// kept unless `all_components`.
std::vector<double> divergence_flux(const FieldState& s, bool all_components) {
  const GridSpec& g = s.grid;
  const std::size_t cells = g.cells();
  const int n = g.n;
  const int q = g.q;
  const int comps = all_components ? n + 1 : 1;
  std::vector<double> flux(static_cast<std::size_t>(comps * q) * cells, 0.0);
  const double inv1 = 1.0 / (12.0 * g.dx());
  parallel_for(cells, [&](std::size_t begin, std::size_t end) {
    BasicJet<double> jet(n, q);
    for (std::size_t c = begin; c < end; ++c) {
      const Neighborhood nb = neighborhood(g, c);
      for (int J = 0; J < q; ++J) {
        jet.df[J][0] = s.v[J * cells + c];
        for (int k = 0; k < n; ++k) jet.df[J][k + 1] = stencil::d1(s.f.data() + J * cells, c, nb, k, inv1);
      }
      const MetricCore<double> m = metric_core(jet);
      for (int mu = 0; mu < comps; ++mu) {
        for (int I = 0; I < q; ++I) {
          double acc = 0.0;
          for (int nu = 0; nu <= n; ++nu) acc += (eta(mu, nu) - m.vol * m.h_inv[mu][nu]) * jet.df[I][nu];
          flux[(static_cast<std::size_t>(mu * q + I)) * cells + c] = acc;
        }
      }
    }
  });
  return flux;
}

}  // namespace

std::vector<double> divergence_residual_per_field(std::span<const FieldState* const> levels) {
  const std::size_t count = levels.size();
  if (count != 3 && count != 5) throw ValidationError("levels", "need 3 or 5 time levels");
  const FieldState& mid = *levels[count / 2];
  const GridSpec& g = mid.grid;
  const double dt = levels[1]->t - levels[0]->t;
  if (!(std::abs(dt) > 0.0)) throw ValidationError("levels", "time levels must be distinct");
  for (std::size_t l = 1; l < count; ++l) {
    if (!(levels[l]->grid == g)) throw ValidationError("levels", "grids differ");
    const double step = levels[l]->t - levels[l - 1]->t;
    if (std::abs(step - dt) > 1e-9 * std::abs(dt)) throw ValidationError("levels", "time levels must be equally spaced");
  }
  const std::size_t cells = g.cells();
  const int n = g.n;
  const int q = g.q;

  // Temporal weights for d_t and d_tt at the middle level.
  std::vector<double> w1, w2;
  if (count == 3) {
    w1 = {-0.5 / dt, 0.0, 0.5 / dt};
    w2 = {1.0 / (dt * dt), -2.0 / (dt * dt), 1.0 / (dt * dt)};
  } else {
    const double a = 1.0 / (12.0 * dt);
    const double b = 1.0 / (12.0 * dt * dt);
    w1 = {a, -8.0 * a, 0.0, 8.0 * a, -a};
    w2 = {-b, 16.0 * b, -30.0 * b, 16.0 * b, -b};
  }

  std::vector<std::vector<double>> flux0(count);
  std::vector<double> mid_flux;
  for (std::size_t l = 0; l < count; ++l) {
    if (l == count / 2) {
      mid_flux = divergence_flux(*levels[l], true);
      flux0[l].assign(mid_flux.begin(), mid_flux.begin() + static_cast<std::ptrdiff_t>(q * cells));
    } else {
      flux0[l] = divergence_flux(*levels[l], false);
    }
  }

  const double inv1 = 1.0 / (12.0 * g.dx());
  const double inv2 = 1.0 / (12.0 * g.dx() * g.dx());
  std::vector<double> result(static_cast<std::size_t>(q), 0.0);
  std::vector<double> residual(cells);
  for (int I = 0; I < q; ++I) {
    const std::size_t off = static_cast<std::size_t>(I) * cells;
    parallel_for(cells, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        const Neighborhood nb = neighborhood(g, c);
        double ftt = 0.0;
        double dt_flux = 0.0;
        for (std::size_t l = 0; l < count; ++l) {
          ftt += w2[l] * levels[l]->f[off + c];
          dt_flux += w1[l] * flux0[l][off + c];
        }
        double box = -ftt;
        double div = dt_flux;
        for (int k = 0; k < n; ++k) {
          box += stencil::d2(mid.f.data() + off, c, nb, k, inv2);
          const double* gk = mid_flux.data() + (static_cast<std::size_t>((k + 1) * q + I)) * cells;
          div += stencil::d1(gk, c, nb, k, inv1);
        }
        residual[c] = box - div;
      }
    });
    result[static_cast<std::size_t>(I)] = reduce_norm(g, residual, NormKind::kL2);
  }
  return result;
}

double divergence_residual(std::span<const FieldState* const> levels) {
  const std::vector<double> per = divergence_residual_per_field(levels);
  return *std::max_element(per.begin(), per.end());
}

}  // namespace tms
