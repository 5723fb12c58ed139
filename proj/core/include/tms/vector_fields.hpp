#pragma once

// Lorentz vector fields Z = c^mu(x) d_mu (translations, rotations, boosts,
// scaling) and their action on sampled fields.

#include <array>
#include <string>
#include <vector>

#include "tms/analytic_fields.hpp"
#include "tms/grid.hpp"

namespace tms {

enum class FieldKind { kTranslation, kRotation, kBoost, kScaling };

/// Indices are spacetime indices: translation d_a (a = 0..n), rotation
/// Omega_ab = x^b d_a - x^a d_b (1 <= a < b <= n), boost
/// Omega_0a = t d_a + x^a d_t (1 <= a <= n), scaling L = x^mu d_mu.
struct VectorFieldId {
  FieldKind kind = FieldKind::kTranslation;
  int a = 0;
  int b = 0;

  static VectorFieldId translation(int mu) { return {FieldKind::kTranslation, mu, 0}; }
  static VectorFieldId rotation(int a, int b) { return {FieldKind::kRotation, a, b}; }
  static VectorFieldId boost(int a) { return {FieldKind::kBoost, a, 0}; }
  static VectorFieldId scaling() { return {FieldKind::kScaling, 0, 0}; }

  std::string name() const;
  bool operator==(const VectorFieldId&) const = default;
};

/// Throws ValidationError when the indices do not fit dimension n.
void validate_field(const VectorFieldId& z, int n);

/// Translations, then rotations, boosts and L, in a fixed order.
std::vector<VectorFieldId> lorentz_fields(int n);

/// c^mu(x) = C^mu_nu x^nu + offset^mu; every field here has offset 0 except
/// translations, which have C = 0.
struct AffineCoefficients {
  std::array<std::array<double, 4>, 4> C{};
  std::array<double, 4> offset{};

  std::array<double, 4> at(const SpacetimePoint& x) const {
    std::array<double, 4> c = offset;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) c[mu] += C[mu][nu] * x[nu];
    return c;
  }
};

AffineCoefficients coefficients(const VectorFieldId& z, int n);

/// [Z, d_nu] = a^alpha d_alpha; returns a (entries in {0, +1, -1}).
std::array<double, 4> commutator_with_partial(const VectorFieldId& z, int nu, int n);

// ---------------------------------------------------------------------------

/// Samples of d_t^k u (k = 0..depth-1) of one scalar on a grid at time t.
/// Spatial derivatives are taken with the periodic 4th-order stencils; time
/// derivatives come from the stored levels.
struct TimeTower {
  GridSpec grid;
  double t = 0.0;
  std::vector<GridFunction> levels;

  int depth() const { return static_cast<int>(levels.size()); }
};

/// Levels d_t^k field at time t, exact.
TimeTower sample(const SpaceTimeField& field, const GridSpec& grid, double t, int depth);

/// Levels from explicit grid functions (e.g. f, v, d_tt f, d_ttt f of one field).
TimeTower tower_from(const GridSpec& grid, double t, std::vector<GridFunction> levels);

/// Z u, one level shallower.
TimeTower apply(const VectorFieldId& z, const TimeTower& u);
/// d_nu u; one level shallower for nu = 0, same depth otherwise.
TimeTower partial(int nu, const TimeTower& u);
/// Box u = -d_tt u + Laplacian u, two levels shallower.
TimeTower box(const TimeTower& u);

TimeTower operator-(const TimeTower& a, const TimeTower& b);
TimeTower operator+(const TimeTower& a, const TimeTower& b);
TimeTower operator*(double s, const TimeTower& a);

/// Level-0 values of (Z^alpha f^I)_I for one field list: applies the fields in
/// `word` right to left (word = {Z1, Z2} gives Z1 Z2 u).
GridFunction apply_word(const std::vector<VectorFieldId>& word, const TimeTower& u);

// ---------------------------------------------------------------------------

/// max |lhs - rhs| over cells at least `margin` cells away from the box faces.
double interior_max_difference(const GridSpec& grid, std::span<const double> lhs, std::span<const double> rhs,
                               int margin);

struct CommutatorCheck {
  std::string field;
  std::string identity;  // "[Z,d_nu]" or "[Z,Box]"
  double max_deviation = 0.0;
};

/// For each canonical Z: [Z, d_nu] against the coefficient table, recovered
/// from the coordinate functions x^alpha, and [Z, Box] psi against
/// -2 Box psi (L) or 0 (all others), for every field of the battery.
std::vector<CommutatorCheck> commutator_check(const std::vector<const SpaceTimeField*>& battery,
                                              const GridSpec& grid, double t, int margin = 6);

}  // namespace tms
