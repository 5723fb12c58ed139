#pragma once

// Pointwise geometry of a graph f: R^{1+n} -> R^q in Minkowski space:
// induced metric, determinant and inverse, and the coefficient tensors
// F^{mu nu} (divergence form) and H^{mu nu}_{JL} (symmetric form).
//
// Greek indices run over 0..n (0 is time), Latin extrinsic indices over
// 0..q-1. Everything is templated on the scalar so that derivatives of the
// coefficients can be taken with tms::Dual.

#include <array>
#include <cmath>
#include <span>

#include "tms/dual.hpp"
#include "tms/errors.hpp"

namespace tms {

inline constexpr int kMaxDim = 4;    // 1 + n with n <= 3
inline constexpr int kMaxCodim = 6;  // q
inline constexpr double kDegeneracyThreshold = 1e-14;

/// Which coefficient tensor to use for the symmetric second-order system.
///
/// kEulerLagrange is the exact expansion of d_mu[sqrt(-det h) h^{mu nu} f_nu]:
///   H = sqrt(-det h) [ delta_JL h^{mu nu} - h^{mu nu} h^{ab} f^L_a f^J_b ].
/// kWithCrossTerms additionally subtracts
///   sqrt(-det h) (h^{mu a} h^{nu b})(f^J_a f^L_b + f^L_a f^J_b),
/// which keeps both symmetries but is not the Euler-Lagrange operator.
enum class HForm { kEulerLagrange, kWithCrossTerms };

template <typename T>
using SquareMatrix = std::array<std::array<T, kMaxDim>, kMaxDim>;

/// First derivatives d_mu f^I at one spacetime point.
template <typename T>
struct BasicJet {
  int n = 2;
  int q = 1;
  std::array<std::array<T, kMaxDim>, kMaxCodim> df{};  // df[I][mu]

  BasicJet() = default;
  BasicJet(int spatial_dim, int codim) : n(spatial_dim), q(codim) {
    if (n < 1 || n + 1 > kMaxDim) throw ValidationError("n", "spatial dimension must be 1..3");
    if (q < 1 || q > kMaxCodim) throw ValidationError("q", "codimension must be 1..6");
  }

  int dim() const { return n + 1; }
  T& operator()(int mu, int I) { return df[I][mu]; }
  const T& operator()(int mu, int I) const { return df[I][mu]; }

  /// Multiplies every entry by s.
  BasicJet scaled(double s) const {
    BasicJet out = *this;
    for (int I = 0; I < q; ++I)
      for (int mu = 0; mu <= n; ++mu) out.df[I][mu] = df[I][mu] * s;
    return out;
  }
};

using FirstJet = BasicJet<double>;

/// Builds a jet from values laid out as [mu][I] (mu-major).
FirstJet make_jet(int n, int q, std::span<const double> values);

/// H^{mu nu}_{JL} with storage for the fixed maximal shape.
template <typename T>
struct BasicCoefficientTensor {
  int dim = 3;
  int q = 1;
  std::array<T, kMaxDim * kMaxDim * kMaxCodim * kMaxCodim> data{};

  T& operator()(int mu, int nu, int J, int L) {
    return data[((mu * kMaxDim + nu) * kMaxCodim + J) * kMaxCodim + L];
  }
  const T& operator()(int mu, int nu, int J, int L) const {
    return data[((mu * kMaxDim + nu) * kMaxCodim + J) * kMaxCodim + L];
  }
};

using CoefficientTensor = BasicCoefficientTensor<double>;

template <typename T>
struct BasicMetricPoint {
  int n = 2;
  int q = 1;
  SquareMatrix<T> h{};
  SquareMatrix<T> h_inv{};
  T det_h{};
  T vol{};
  SquareMatrix<T> F{};
  BasicCoefficientTensor<T> H{};
};

using MetricPoint = BasicMetricPoint<double>;

template <typename T>
struct DetInverse {
  T det{};
  SquareMatrix<T> inv{};
};

inline constexpr double eta(int mu, int nu) {
  return mu != nu ? 0.0 : (mu == 0 ? -1.0 : 1.0);
}

// ---------------------------------------------------------------------------

/// h_ab = eta_ab + sum_I f^I_a f^I_b.
template <typename T>
SquareMatrix<T> induced_metric(const BasicJet<T>& jet) {
  SquareMatrix<T> h{};
  const int d = jet.dim();
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      T s = T(eta(a, b));
      for (int I = 0; I < jet.q; ++I) s += jet.df[I][a] * jet.df[I][b];
      h[a][b] = s;
      h[b][a] = s;
    }
  }
  return h;
}

namespace detail {

template <typename T>
T det2(T a, T b, T c, T d) {
  return a * d - b * c;
}

template <typename T>
T determinant(const SquareMatrix<T>& m, int dim) {
  switch (dim) {
    case 1:
      return m[0][0];
    case 2:
      return det2(m[0][0], m[0][1], m[1][0], m[1][1]);
    case 3:
      return m[0][0] * det2(m[1][1], m[1][2], m[2][1], m[2][2]) -
             m[0][1] * det2(m[1][0], m[1][2], m[2][0], m[2][2]) +
             m[0][2] * det2(m[1][0], m[1][1], m[2][0], m[2][1]);
    default: {
      const T s0 = det2(m[0][0], m[0][1], m[1][0], m[1][1]);
      const T s1 = det2(m[0][0], m[0][2], m[1][0], m[1][2]);
      const T s2 = det2(m[0][0], m[0][3], m[1][0], m[1][3]);
      const T s3 = det2(m[0][1], m[0][2], m[1][1], m[1][2]);
      const T s4 = det2(m[0][1], m[0][3], m[1][1], m[1][3]);
      const T s5 = det2(m[0][2], m[0][3], m[1][2], m[1][3]);
      const T c5 = det2(m[2][2], m[2][3], m[3][2], m[3][3]);
      const T c4 = det2(m[2][1], m[2][3], m[3][1], m[3][3]);
      const T c3 = det2(m[2][1], m[2][2], m[3][1], m[3][2]);
      const T c2 = det2(m[2][0], m[2][3], m[3][0], m[3][3]);
      const T c1 = det2(m[2][0], m[2][2], m[3][0], m[3][2]);
      const T c0 = det2(m[2][0], m[2][1], m[3][0], m[3][1]);
      return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    }
  }
}

/// Adjugate (transpose of the cofactor matrix) for dim <= 4.
template <typename T>
SquareMatrix<T> adjugate(const SquareMatrix<T>& m, int dim) {
  SquareMatrix<T> adj{};
  if (dim == 1) {
    adj[0][0] = T(1.0);
    return adj;
  }
  if (dim == 2) {
    adj[0][0] = m[1][1];
    adj[0][1] = -m[0][1];
    adj[1][0] = -m[1][0];
    adj[1][1] = m[0][0];
    return adj;
  }
  if (dim == 3) {
    adj[0][0] = det2(m[1][1], m[1][2], m[2][1], m[2][2]);
    adj[0][1] = -det2(m[0][1], m[0][2], m[2][1], m[2][2]);
    adj[0][2] = det2(m[0][1], m[0][2], m[1][1], m[1][2]);
    adj[1][0] = -det2(m[1][0], m[1][2], m[2][0], m[2][2]);
    adj[1][1] = det2(m[0][0], m[0][2], m[2][0], m[2][2]);
    adj[1][2] = -det2(m[0][0], m[0][2], m[1][0], m[1][2]);
    adj[2][0] = det2(m[1][0], m[1][1], m[2][0], m[2][1]);
    adj[2][1] = -det2(m[0][0], m[0][1], m[2][0], m[2][1]);
    adj[2][2] = det2(m[0][0], m[0][1], m[1][0], m[1][1]);
    return adj;
  }
  const T s0 = det2(m[0][0], m[0][1], m[1][0], m[1][1]);
  const T s1 = det2(m[0][0], m[0][2], m[1][0], m[1][2]);
  const T s2 = det2(m[0][0], m[0][3], m[1][0], m[1][3]);
  const T s3 = det2(m[0][1], m[0][2], m[1][1], m[1][2]);
  const T s4 = det2(m[0][1], m[0][3], m[1][1], m[1][3]);
  const T s5 = det2(m[0][2], m[0][3], m[1][2], m[1][3]);
  const T c5 = det2(m[2][2], m[2][3], m[3][2], m[3][3]);
  const T c4 = det2(m[2][1], m[2][3], m[3][1], m[3][3]);
  const T c3 = det2(m[2][1], m[2][2], m[3][1], m[3][2]);
  const T c2 = det2(m[2][0], m[2][3], m[3][0], m[3][3]);
  const T c1 = det2(m[2][0], m[2][2], m[3][0], m[3][2]);
  const T c0 = det2(m[2][0], m[2][1], m[3][0], m[3][1]);
  adj[0][0] = m[1][1] * c5 - m[1][2] * c4 + m[1][3] * c3;
  adj[0][1] = -m[0][1] * c5 + m[0][2] * c4 - m[0][3] * c3;
  adj[0][2] = m[3][1] * s5 - m[3][2] * s4 + m[3][3] * s3;
  adj[0][3] = -m[2][1] * s5 + m[2][2] * s4 - m[2][3] * s3;
  adj[1][0] = -m[1][0] * c5 + m[1][2] * c2 - m[1][3] * c1;
  adj[1][1] = m[0][0] * c5 - m[0][2] * c2 + m[0][3] * c1;
  adj[1][2] = -m[3][0] * s5 + m[3][2] * s2 - m[3][3] * s1;
  adj[1][3] = m[2][0] * s5 - m[2][2] * s2 + m[2][3] * s1;
  adj[2][0] = m[1][0] * c4 - m[1][1] * c2 + m[1][3] * c0;
  adj[2][1] = -m[0][0] * c4 + m[0][1] * c2 - m[0][3] * c0;
  adj[2][2] = m[3][0] * s4 - m[3][1] * s2 + m[3][3] * s0;
  adj[2][3] = -m[2][0] * s4 + m[2][1] * s2 - m[2][3] * s0;
  adj[3][0] = -m[1][0] * c3 + m[1][1] * c1 - m[1][2] * c0;
  adj[3][1] = m[0][0] * c3 - m[0][1] * c1 + m[0][2] * c0;
  adj[3][2] = -m[3][0] * s3 + m[3][1] * s1 - m[3][2] * s0;
  adj[3][3] = m[2][0] * s3 - m[2][1] * s1 + m[2][2] * s0;
  return adj;
}

template <typename T>
SquareMatrix<T> symmetric_inverse_from(const SquareMatrix<T>& h, int dim, const T& det) {
  const SquareMatrix<T> adj = adjugate(h, dim);
  const T inv_det = T(1.0) / det;
  SquareMatrix<T> inv{};
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      inv[a][b] = adj[a][b] * inv_det;
      inv[b][a] = inv[a][b];
    }
  }
  return inv;
}

}  // namespace detail

/// Closed-form cofactor determinant and inverse of a symmetric matrix.
template <typename T>
DetInverse<T> det_and_inverse(const SquareMatrix<T>& h, int dim) {
  DetInverse<T> out;
  out.det = detail::determinant(h, dim);
  if (std::abs(value_of(out.det)) < kDegeneracyThreshold) throw SingularMetric(value_of(out.det));
  out.inv = detail::symmetric_inverse_from(h, dim, out.det);
  return out;
}

/// h, det h, h^{-1} and sqrt(-det h) without the coefficient tensors.
template <typename T>
struct MetricCore {
  SquareMatrix<T> h{};
  SquareMatrix<T> h_inv{};
  T det_h{};
  T vol{};
};

/// Throws SpacelikeDegeneration when det h >= -1e-14.
template <typename T>
MetricCore<T> metric_core(const BasicJet<T>& jet) {
  MetricCore<T> m;
  const int d = jet.dim();
  m.h = induced_metric(jet);
  m.det_h = detail::determinant(m.h, d);
  if (!(value_of(m.det_h) < -kDegeneracyThreshold)) throw SpacelikeDegeneration(value_of(m.det_h));
  m.h_inv = detail::symmetric_inverse_from(m.h, d, m.det_h);
  using std::sqrt;
  m.vol = sqrt(-m.det_h);
  return m;
}

namespace detail {

template <typename T>
void fill_metric(const BasicJet<T>& jet, BasicMetricPoint<T>& mp) {
  mp.n = jet.n;
  mp.q = jet.q;
  MetricCore<T> m = metric_core(jet);
  mp.h = m.h;
  mp.h_inv = m.h_inv;
  mp.det_h = m.det_h;
  mp.vol = m.vol;
}

template <typename T>
void fill_F(BasicMetricPoint<T>& mp) {
  const int d = mp.n + 1;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) mp.F[a][b] = T(eta(a, b)) - mp.vol * mp.h_inv[a][b];
}

// Computes the J<=L, mu<=nu half and mirrors it, so that both index
// symmetries hold bit-exactly.
template <typename T>
void fill_H(const BasicJet<T>& jet, HForm form, BasicMetricPoint<T>& mp) {
  const int d = jet.dim();
  const int q = jet.q;
  std::array<std::array<T, kMaxDim>, kMaxCodim> u{};  // u[J][mu] = h^{mu a} f^J_a
  for (int J = 0; J < q; ++J) {
    for (int mu = 0; mu < d; ++mu) {
      T s{};
      for (int a = 0; a < d; ++a) s += mp.h_inv[mu][a] * jet.df[J][a];
      u[J][mu] = s;
    }
  }
  std::array<std::array<T, kMaxCodim>, kMaxCodim> G{};  // G[J][L] = h^{ab} f^J_a f^L_b
  for (int J = 0; J < q; ++J) {
    for (int L = J; L < q; ++L) {
      T s{};
      for (int a = 0; a < d; ++a) s += jet.df[J][a] * u[L][a];
      G[J][L] = s;
      G[L][J] = s;
    }
  }
  const bool cross = form == HForm::kWithCrossTerms;
  auto& H = mp.H;
  H.dim = d;
  H.q = q;
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu; nu < d; ++nu) {
      const T hmn = mp.h_inv[mu][nu];
      for (int J = 0; J < q; ++J) {
        for (int L = J; L < q; ++L) {
          T bracket = (J == L ? hmn : T(0.0)) - hmn * G[J][L];
          if (cross) bracket -= u[J][mu] * u[L][nu] + u[L][mu] * u[J][nu];
          const T value = mp.vol * bracket;
          H(mu, nu, J, L) = value;
          H(mu, nu, L, J) = value;
          H(nu, mu, J, L) = value;
          H(nu, mu, L, J) = value;
        }
      }
    }
  }
}

}  // namespace detail

/// F^{mu nu} = eta^{mu nu} - sqrt(-det h) h^{mu nu}.
template <typename T>
SquareMatrix<T> coefficient_F(const BasicJet<T>& jet) {
  BasicMetricPoint<T> mp;
  detail::fill_metric(jet, mp);
  detail::fill_F(mp);
  return mp.F;
}

template <typename T>
BasicCoefficientTensor<T> coefficient_H(const BasicJet<T>& jet, HForm form = HForm::kEulerLagrange) {
  BasicMetricPoint<T> mp;
  detail::fill_metric(jet, mp);
  detail::fill_H(jet, form, mp);
  return mp.H;
}

/// Everything at once.
template <typename T>
BasicMetricPoint<T> metric_point(const BasicJet<T>& jet, HForm form = HForm::kEulerLagrange) {
  BasicMetricPoint<T> mp;
  detail::fill_metric(jet, mp);
  detail::fill_F(mp);
  detail::fill_H(jet, form, mp);
  return mp;
}

/// 1/2 - sum_{mu nu I J} |H^{mu nu}_{IJ} - eta^{mu nu} delta_IJ|.
/// Positive iff the coercivity condition holds at this point.
template <typename T>
double coercivity_margin(const BasicCoefficientTensor<T>& H) {
  double sum = 0.0;
  for (int mu = 0; mu < H.dim; ++mu)
    for (int nu = 0; nu < H.dim; ++nu)
      for (int I = 0; I < H.q; ++I)
        for (int J = 0; J < H.q; ++J)
          sum += std::abs(value_of(H(mu, nu, I, J)) - (I == J ? eta(mu, nu) : 0.0));
  return 0.5 - sum;
}

}  // namespace tms
