#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "tms/driver.hpp"
#include "tms/evolution.hpp"
#include "tms/initial_data.hpp"
#include "tms/parallel.hpp"

using namespace tms;

namespace {

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// phi^4 profile: the plain bump is not in the asymptotic regime at N <= 256
DataFamily null_wave(double eps, double sigma, int q = 1) {
  DataFamily f;
  f.kind = DataKind::kNullWave;
  f.epsilon = eps;
  f.sigma = sigma;
  f.null_profile_power = 4;
  if (q > 1) {
    f.polarization.assign(static_cast<std::size_t>(q), 0.0);
    f.polarization[0] = 0.6;
    f.polarization[1] = 0.8;
  }
  return f;
}

DataFamily gaussian(double eps, double sigma) {
  DataFamily f;
  f.kind = DataKind::kGaussianBump;
  f.epsilon = eps;
  f.sigma = sigma;
  return f;
}

// Linear-wave RK4, written out independently: d_tt f = Laplacian f with the
// same five-point second-derivative stencil.
FieldState linear_rk4(const FieldState& s, double dt) {
  const GridSpec& g = s.grid;
  auto lap = [&](const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    const double inv = 1.0 / (12.0 * g.dx() * g.dx());
    const std::size_t cells = g.cells();
    for (std::size_t c = 0; c < cells; ++c) {
      const auto idx = g.indices(c);
      for (int k = 0; k < g.n; ++k) {
        auto at = [&](int m) {
          auto j = idx;
          j[k] += m;
          return f[g.flat(j)];
        };
        out[c] += (-at(2) + 16 * at(1) - 30 * at(0) + 16 * at(-1) - at(-2)) * inv;
      }
    }
    return out;
  };
  auto axpy = [](const std::vector<double>& x, double a, const std::vector<double>& y) {
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
    return r;
  };
  const auto k1f = s.v, k1v = lap(s.f);
  const auto k2f = axpy(s.v, dt / 2, k1v), k2v = lap(axpy(s.f, dt / 2, k1f));
  const auto k3f = axpy(s.v, dt / 2, k2v), k3v = lap(axpy(s.f, dt / 2, k2f));
  const auto k4f = axpy(s.v, dt, k3v), k4v = lap(axpy(s.f, dt, k3f));
  FieldState out = s;
  out.t = s.t + dt;
  for (std::size_t i = 0; i < s.f.size(); ++i) {
    out.f[i] = s.f[i] + dt / 6 * (k1f[i] + 2 * k2f[i] + 2 * k3f[i] + k4f[i]);
    out.v[i] = s.v[i] + dt / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("zero and planar states have zero acceleration") {
  const GridSpec g{2, 2, 4.0, 32};
  const FieldState zero(g);
  const auto a0 = second_time_derivative(zero);
  CHECK(max_abs(a0.a) == 0.0);
  CHECK(a0.min_margin == 0.5);

  // f = a_0 t: at t = 0, f = 0 and v = a_0 everywhere
  FieldState plane(g);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    plane.v[c] = 0.1;
    plane.v[g.cells() + c] = -0.05;
  }
  const auto ap = second_time_derivative(plane);
  CHECK(max_abs(ap.a) == 0.0);
  CHECK(ap.min_margin < 0.5);
  CHECK(ap.min_margin > 0.0);
}

TEST_CASE("null-wave residual converges at fourth order") {
  auto err = [](int N, int q) {
    const GridSpec g{2, q, 8.0, N};
    const auto fam = null_wave(0.3, 6.0, q);
    const auto s = null_wave_exact(fam, g, 0.4);
    const auto a = second_time_derivative(s);
    return max_diff(a.a, null_wave_acceleration(fam, g, 0.4));
  };
  for (int q : {1, 2}) {
    const double ratio = err(128, q) / err(256, q);
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
  }
}

TEST_CASE("rk4 leaves the zero state at zero and advances t") {
  const GridSpec g{3, 1, 2.0, 16};
  const FieldState s = rk4_step(FieldState(g, 1.5), 0.05);
  CHECK(s.t == doctest::Approx(1.55));
  CHECK(max_abs(s.f) == 0.0);
  CHECK(max_abs(s.v) == 0.0);
}

TEST_CASE("linear-wave system matches an independent stepper") {
  const GridSpec g{2, 1, 6.0, 32};
  const FieldState s = realize(gaussian(0.5, 1.2), g);
  const FieldState a = rk4_step(s, 0.05, {System::kLinearWave});
  const FieldState b = linear_rk4(s, 0.05);
  CHECK(max_diff(a.f, b.f) < 1e-14);
  CHECK(max_diff(a.v, b.v) < 1e-13);
}

TEST_CASE("one step departs from the linear step at third order in eps") {
  const GridSpec g{2, 1, 6.0, 48};
  const double dt = 0.05;
  auto gap = [&](double eps) {
    const FieldState s = realize(gaussian(eps, 1.2), g);
    const FieldState nl = rk4_step(s, dt);
    const FieldState lin = linear_rk4(s, dt);
    return std::max(max_diff(nl.f, lin.f), max_diff(nl.v, lin.v));
  };
  const double ratio = gap(1e-2) / gap(5e-3);
  CHECK(ratio > 7.9);
  CHECK(ratio < 8.1);
}

TEST_CASE("forward then backward step returns close to the start") {
  const GridSpec g{2, 2, 6.0, 32};
  auto fam = gaussian(0.2, 1.2);
  fam.polarization = {0.6, 0.8};
  const FieldState s = realize(fam, g);
  auto back = [&](double dt) {
    const FieldState r = rk4_step(rk4_step(s, dt), -dt);
    return std::max(max_diff(r.f, s.f), max_diff(r.v, s.v));
  };
  const double e1 = back(0.04), e2 = back(0.02);
  CHECK(e1 < 1e-6);
  // the round trip error is O(dt^5)
  CHECK(e1 / e2 > 24.0);
}

TEST_CASE("third time derivative agrees with a difference quotient") {
  const GridSpec g{2, 2, 6.0, 32};
  auto fam = gaussian(0.3, 1.2);
  fam.polarization = {0.6, 0.8};
  FieldState s = realize(fam, g);
  for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] = 0.5 * s.f[i];
  const auto td = time_derivatives(s);
  const double h = 1e-3;
  const auto ap = second_time_derivative(rk4_step(s, h)).a;
  const auto am = second_time_derivative(rk4_step(s, -h)).a;
  double scale = max_abs(td.a_t);
  CHECK(scale > 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < ap.size(); ++i) worst = std::max(worst, std::abs((ap[i] - am[i]) / (2 * h) - td.a_t[i]));
  CHECK(worst / scale < 1e-5);
}

TEST_CASE("acceleration is independent of the worker count") {
  const GridSpec g{3, 2, 4.0, 20};
  auto fam = gaussian(0.1, 1.0);
  fam.polarization = {0.6, 0.8};
  const FieldState s = realize(fam, g);
  const int before = worker_count();
  set_worker_count(1);
  const auto a1 = time_derivatives(s);
  set_worker_count(4);
  const auto a4 = time_derivatives(s);
  set_worker_count(before);
  CHECK(a1.a == a4.a);
  CHECK(a1.a_t == a4.a_t);
}

TEST_CASE("steep data lose coercivity, bad samples are reported") {
  const GridSpec g{2, 1, 4.0, 32};
  const FieldState steep = realize(gaussian(1.0, 0.6), g);
  CHECK_THROWS_AS(second_time_derivative(steep), CoercivityLost);
  try {
    second_time_derivative(steep);
  } catch (const CoercivityLost& e) {
    CHECK(e.margin() <= 0.0);
    CHECK(e.cell() < g.cells());
  }

  FieldState bad(g);
  bad.f[17] = std::nan("");
  CHECK_THROWS_AS(second_time_derivative(bad), NonFinite);
}

TEST_CASE("divergence residual") {
  const GridSpec g{2, 1, 8.0, 64};
  // f = a_0 t is exact for both forms of the equation
  std::vector<FieldState> plane;
  for (int l = 0; l < 5; ++l) {
    FieldState s(g, 0.1 * l);
    for (std::size_t c = 0; c < g.cells(); ++c) {
      s.f[c] = 0.4 * s.t;
      s.v[c] = 0.4;
    }
    plane.push_back(s);
  }
  std::vector<const FieldState*> ptr;
  for (const auto& s : plane) ptr.push_back(&s);
  CHECK(divergence_residual(ptr) < 1e-12);

  auto null_res = [&](int N) {
    const GridSpec gg{2, 1, 8.0, N};
    const auto fam = null_wave(0.3, 6.0);
    const double dt = 0.2 * gg.dx();
    std::vector<FieldState> levels;
    for (int l = 0; l < 5; ++l) levels.push_back(null_wave_exact(fam, gg, 1.0 + (l - 2) * dt));
    std::vector<const FieldState*> p;
    for (const auto& s : levels) p.push_back(&s);
    return divergence_residual(p);
  };
  const double ratio = null_res(128) / null_res(256);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);

  std::vector<const FieldState*> two{ptr[0], ptr[1]};
  CHECK_THROWS_AS(divergence_residual(two), ValidationError);
  std::vector<const FieldState*> uneven{ptr[0], ptr[1], ptr[3]};
  CHECK_THROWS_AS(divergence_residual(uneven), ValidationError);
}

TEST_CASE("step planning") {
  const auto p = plan_steps(1.0, 0.2, 0.125);
  CHECK(p.steps == 40);
  CHECK(p.dt == 0.025);
  const auto r = plan_steps(1.0, 0.2, 0.3);
  CHECK(r.steps == 17);
  CHECK(r.dt <= 0.2 * 0.3);
  CHECK(r.dt * r.steps == doctest::Approx(1.0));
}

TEST_CASE("evolving zero data stays at zero") {
  DriverOptions o;
  o.t_final = 0.5;
  o.diag_cadence = 4;
  const auto r = evolve(FieldState(GridSpec{2, 1, 4.0, 32}), o);
  CHECK(r.status == RunStatus::kOk);
  CHECK(r.final_state.t == doctest::Approx(0.5));
  CHECK(max_abs(r.final_state.f) == 0.0);
  REQUIRE(!r.records.empty());
  CHECK(r.records.front().t == 0.0);
  CHECK(r.records.back().t == doctest::Approx(0.5));
  for (const auto& rec : r.records) {
    CHECK(rec.M1 == 0.0);
    CHECK(rec.N2 == 0.0);
    CHECK(rec.energy_margin == 0.0);
    CHECK(rec.divergence_residual == 0.0);
  }
}

TEST_CASE("evolved null wave tracks the translated profile at fourth order") {
  auto err = [](int N) {
    const GridSpec g{2, 1, 8.0, N};
    const auto fam = null_wave(0.3, 6.0);
    DriverOptions o;
    o.t_final = 1.0;
    o.diag_cadence = 1 << 30;
    o.divergence_residual = false;
    const auto r = evolve(realize(fam, g), o);
    REQUIRE(r.status == RunStatus::kOk);
    return max_diff(r.final_state.f, null_wave_exact(fam, g, 1.0).f);
  };
  const double ratio = err(128) / err(256);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);
}

TEST_CASE("the driver stops on coercivity loss with the offending cell") {
  const GridSpec g{2, 1, 4.0, 32};
  DriverOptions o;
  o.t_final = 1.0;
  const auto r = evolve(realize(gaussian(1.0, 0.6), g), o);
  CHECK(r.status == RunStatus::kCoercivityLost);
  CHECK(r.offending_margin <= 0.0);
  CHECK(r.offending_cell < g.cells());
  CHECK(r.steps == 0);
}
