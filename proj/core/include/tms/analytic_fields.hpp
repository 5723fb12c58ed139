#pragma once

// Closed-form scalar fields on R^{1+n} with exact derivatives of any order.
// Used as the test battery for commutator and null-form identities.

#include <array>
#include <memory>
#include <vector>

namespace tms {

/// orders[0] counts d_t, orders[1..3] count d_{x^1..x^3}.
using DerivativeOrders = std::array<int, 4>;
using SpacetimePoint = std::array<double, 4>;  // (t, x^1, x^2, x^3)

class SpaceTimeField {
 public:
  virtual ~SpaceTimeField() = default;
  virtual double derivative(const DerivativeOrders& orders, const SpacetimePoint& p) const = 0;
  double value(const SpacetimePoint& p) const { return derivative({0, 0, 0, 0}, p); }
};

/// sum_k c_k t^{e0} x^{e1} y^{e2} z^{e3}
class Polynomial final : public SpaceTimeField {
 public:
  struct Term {
    double coeff;
    DerivativeOrders exponents;
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}

  /// The coordinate function x^mu (mu = 0 is t).
  static Polynomial coordinate(int mu);

  double derivative(const DerivativeOrders& orders, const SpacetimePoint& p) const override;

 private:
  std::vector<Term> terms_;
};

/// amp * sin(p_mu x^mu + phase)
class PlaneWave final : public SpaceTimeField {
 public:
  PlaneWave(double amp, std::array<double, 4> p, double phase = 0.0) : amp_(amp), p_(p), phase_(phase) {}

  double derivative(const DerivativeOrders& orders, const SpacetimePoint& p) const override;

 private:
  double amp_;
  std::array<double, 4> p_;
  double phase_;
};

/// Polynomial and trigonometric battery for n spatial dimensions.
struct TestBattery {
  std::vector<std::shared_ptr<const SpaceTimeField>> polynomial;
  std::vector<std::shared_ptr<const SpaceTimeField>> trigonometric;
};

TestBattery standard_battery(int n);

}  // namespace tms
