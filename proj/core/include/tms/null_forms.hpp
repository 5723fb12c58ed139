#pragma once

// Null forms Q_00(u, w) = eta^{ab} d_a u d_b w and
// Q_ab(u, w) = d_a u d_b w - d_b u d_a w, their commutation with the Lorentz
// fields, the pointwise null-form estimate, and the expansion of det h.

#include <span>
#include <string>
#include <vector>

#include "tms/geometry.hpp"
#include "tms/vector_fields.hpp"

namespace tms {

struct NullFormId {
  bool is_q00 = true;
  int a = 0;  // Q_ab with 0 <= a < b <= n
  int b = 0;

  static NullFormId q00() { return {true, 0, 0}; }
  static NullFormId q(int a, int b) { return {false, a, b}; }

  std::string name() const;
  bool operator==(const NullFormId&) const = default;
};

/// Q00 first, then Q_ab in lexicographic order.
std::vector<NullFormId> null_forms(int n);

/// B^{ab} with Q(u, w) = B^{ab} d_a u d_b w.
SquareMatrix<double> bilinear_matrix(const NullFormId& Q, int n);

/// Q evaluated on two gradients (du[a] = d_a u).
double null_form(const NullFormId& Q, int n, std::span<const double> du, std::span<const double> dw);

/// Q(u, w) on a grid, one level shallower than the shallower input.
TimeTower null_form(const NullFormId& Q, const TimeTower& u, const TimeTower& w);

/// d_0 u, ..., d_n u as towers, for reuse across several null forms.
std::vector<TimeTower> tower_gradient(const TimeTower& u);

/// The same from precomputed gradients.
TimeTower null_form(const NullFormId& Q, const std::vector<TimeTower>& du, const std::vector<TimeTower>& dw);

/// Z Q(u, w) - Q(Zu, w) - Q(u, Zw) = q00 Q_00(u, w) + sum_{a<b} c[a][b] Q_ab(u, w).
struct NullCommutation {
  double q00 = 0.0;
  SquareMatrix<double> c{};  // only a < b used
};

/// Exact coefficients, computed once from the coefficient matrices of Z and Q.
NullCommutation null_commutation(const VectorFieldId& z, const NullFormId& Q, int n);

/// max over interior cells of |Q(u, w)| (1 + t + |x|) / (sum_Z |Z u| * sum_Z |Z w|),
/// with the denominator floored at 1e-30. Z runs over every canonical field.
double null_estimate_ratio(const NullFormId& Q, const TimeTower& u, const TimeTower& w, int margin = 0);

// ---------------------------------------------------------------------------

/// R(eps) = | -det h(eps df) - 1 - eps^2 sum_I Q00(f^I, f^I) |, at each eps,
/// and the observed orders log2(R(eps)/R(eps/2)) between consecutive entries.
/// `exact` is set when every remainder is below 1e-15 (e.g. q = 1, where the
/// expansion terminates).
struct ExpansionCheck {
  std::vector<double> eps;
  std::vector<double> remainder;
  std::vector<double> order;
  bool exact = false;
};

ExpansionCheck det_expansion_check(const FirstJet& jet, std::span<const double> eps);

}  // namespace tms
