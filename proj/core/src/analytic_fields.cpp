#include "tms/analytic_fields.hpp"

#include <cmath>

namespace tms {

Polynomial Polynomial::coordinate(int mu) {
  DerivativeOrders e{0, 0, 0, 0};
  e[static_cast<std::size_t>(mu)] = 1;
  return Polynomial({{1.0, e}});
}

double Polynomial::derivative(const DerivativeOrders& orders, const SpacetimePoint& p) const {
  double total = 0.0;
  for (const Term& term : terms_) {
    double value = term.coeff;
    for (int mu = 0; mu < 4 && value != 0.0; ++mu) {
      const int e = term.exponents[static_cast<std::size_t>(mu)];
      const int k = orders[static_cast<std::size_t>(mu)];
      if (k > e) {
        value = 0.0;
        break;
      }
      for (int i = 0; i < k; ++i) value *= e - i;
      value *= std::pow(p[static_cast<std::size_t>(mu)], e - k);
    }
    total += value;
  }
  return total;
}

double PlaneWave::derivative(const DerivativeOrders& orders, const SpacetimePoint& x) const {
  double theta = phase_;
  for (int mu = 0; mu < 4; ++mu) theta += p_[static_cast<std::size_t>(mu)] * x[static_cast<std::size_t>(mu)];
  double factor = amp_;
  int total = 0;
  for (int mu = 0; mu < 4; ++mu) {
    const int k = orders[static_cast<std::size_t>(mu)];
    factor *= std::pow(p_[static_cast<std::size_t>(mu)], k);
    total += k;
  }
  // d^k/dtheta^k sin = sin(theta + k pi/2)
  switch (total % 4) {
    case 0: return factor * std::sin(theta);
    case 1: return factor * std::cos(theta);
    case 2: return -factor * std::sin(theta);
    default: return -factor * std::cos(theta);
  }
}

TestBattery standard_battery(int n) {
  TestBattery b;
  using P = Polynomial;
  // t^2 - |x|^2
  std::vector<P::Term> cone{{1.0, {2, 0, 0, 0}}};
  for (int k = 1; k <= n; ++k) {
    DerivativeOrders e{0, 0, 0, 0};
    e[static_cast<std::size_t>(k)] = 2;
    cone.push_back({-1.0, e});
  }
  b.polynomial.push_back(std::make_shared<P>(cone));
  // cubic with mixed time-space terms
  b.polynomial.push_back(std::make_shared<P>(std::vector<P::Term>{
      {1.0, {3, 0, 0, 0}}, {0.5, {1, 1, 1, 0}}, {-0.25, {0, 2, 1, 0}}, {0.3, {0, 0, 0, n == 3 ? 1 : 0}}}));
  // quartic
  b.polynomial.push_back(std::make_shared<P>(std::vector<P::Term>{
      {0.2, {1, 3, 0, 0}}, {-0.1, {0, 0, 4, 0}}, {0.05, {2, 1, 1, 0}}, {0.4, {0, 1, 0, 0}}}));

  // null plane wave sin(t - x^1), an exact solution of the wave equation
  b.trigonometric.push_back(std::make_shared<PlaneWave>(1.0, std::array<double, 4>{1.0, -1.0, 0.0, 0.0}));
  // generic (not a wave solution)
  b.trigonometric.push_back(std::make_shared<PlaneWave>(
      0.8, std::array<double, 4>{0.7, 0.4, -0.3, n == 3 ? 0.2 : 0.0}, 0.3));
  return b;
}

}  // namespace tms
