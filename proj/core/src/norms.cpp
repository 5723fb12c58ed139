#include "tms/norms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "tms/dual.hpp"
#include "tms/parallel.hpp"
#include "tms/vector_fields.hpp"

namespace tms {

Jet3 pointwise_jet(const GridSpec& grid, const std::array<const double*, 4>& levels, std::size_t cell,
                   const Neighborhood& nb) {
  const int dim = grid.n + 1;
  Jet3 j;
  auto eval = [&](std::initializer_list<int> idx) {
    int k = 0;
    std::array<int, kMaxSpatialDim> orders{};
    for (int mu : idx) {
      if (mu == 0)
        ++k;
      else
        ++orders[mu - 1];
    }
    return stencil::mixed(levels[k], cell, nb, grid, orders);
  };
  j.d0 = levels[0][cell];
  for (int a = 0; a < dim; ++a) {
    j.d1[a] = eval({a});
    for (int b = a; b < dim; ++b) {
      const double v2 = eval({a, b});
      j.d2[a][b] = j.d2[b][a] = v2;
      for (int c = b; c < dim; ++c) {
        const double v3 = eval({a, b, c});
        j.d3[a][b][c] = j.d3[a][c][b] = j.d3[b][a][c] = v3;
        j.d3[b][c][a] = j.d3[c][a][b] = j.d3[c][b][a] = v3;
      }
    }
  }
  return j;
}

namespace {

constexpr std::size_t kBlock = 4096;

struct BlockSums {
  std::vector<double> val_sq;
  std::vector<double> der_sq;
  std::vector<double> val_sup;
  std::vector<double> der_sup;
  std::vector<double> source_sq;
  double dH = 0.0;
  double margin = 0.5;
};

}  // namespace

NormsRecord compute_norms(const FieldState& state, const TimeDerivatives& td, HForm form) {
  const GridSpec& grid = state.grid;
  const int n = grid.n;
  const int q = grid.q;
  const int dim = n + 1;
  const std::size_t cells = grid.cells();
  if (td.a.size() != state.f.size() || td.a_t.size() != state.f.size())
    throw ValidationError("time_derivatives", "size does not match the state");

  const auto fields = lorentz_fields(n);
  const int m = static_cast<int>(fields.size());
  std::vector<AffineCoefficients> coeff;
  for (const auto& z : fields) coeff.push_back(coefficients(z, n));
  const std::size_t words = 1 + static_cast<std::size_t>(m + m * (m + 1) / 2);

  const std::size_t blocks = (cells + kBlock - 1) / kBlock;
  std::vector<BlockSums> acc(blocks);

  parallel_for(blocks, [&](std::size_t b0, std::size_t b1) {
    std::vector<Jet3> jets(static_cast<std::size_t>(q));
    std::vector<double> vsq(words), dsq(words);
    std::vector<std::array<double, 4>> cz(static_cast<std::size_t>(m));
    std::vector<std::array<double, 4>> w(static_cast<std::size_t>(m));
    std::vector<std::array<std::array<double, 4>, 4>> s(static_cast<std::size_t>(m));
    // Reused across cells: the tensors are large and every entry in range is rewritten.
    FirstJet jet(n, q);
    BasicJet<Dual> dj(n, q);
    auto mp = std::make_unique<MetricPoint>();
    auto dmp = std::make_unique<BasicMetricPoint<Dual>>();

    for (std::size_t b = b0; b < b1; ++b) {
      BlockSums& B = acc[b];
      B.val_sq.assign(words, 0.0);
      B.der_sq.assign(words, 0.0);
      B.val_sup.assign(words, 0.0);
      B.der_sup.assign(words, 0.0);
      B.source_sq.assign(static_cast<std::size_t>(q), 0.0);
      const std::size_t end = std::min(cells, (b + 1) * kBlock);
      for (std::size_t c = b * kBlock; c < end; ++c) {
        const Neighborhood nb = neighborhood(grid, c);
        const auto x = grid.position(c);
        const SpacetimePoint point{state.t, x[0], x[1], x[2]};
        for (int i = 0; i < m; ++i) cz[i] = coeff[i].at(point);
        for (int I = 0; I < q; ++I) {
          const std::size_t off = static_cast<std::size_t>(I) * cells;
          jets[I] = pointwise_jet(grid, {state.f.data() + off, state.v.data() + off, td.a.data() + off,
                                         td.a_t.data() + off},
                                  c, nb);
        }
        std::fill(vsq.begin(), vsq.end(), 0.0);
        std::fill(dsq.begin(), dsq.end(), 0.0);

        for (int I = 0; I < q; ++I) {
          const Jet3& J = jets[I];
          vsq[0] += J.d0 * J.d0;
          for (int mu = 0; mu < dim; ++mu) dsq[0] += J.d1[mu] * J.d1[mu];

          for (int i = 0; i < m; ++i) {
            const auto& C = coeff[i].C;
            const auto& ci = cz[i];
            double z = 0.0;
            for (int nu = 0; nu < dim; ++nu) z += ci[nu] * J.d1[nu];
            double wsq = 0.0;
            for (int mu = 0; mu < dim; ++mu) {
              double v = 0.0;
              for (int nu = 0; nu < dim; ++nu) v += C[nu][mu] * J.d1[nu] + ci[nu] * J.d2[mu][nu];
              w[i][mu] = v;
              wsq += v * v;
              for (int la = mu; la < dim; ++la) {
                double v2 = 0.0;
                for (int nu = 0; nu < dim; ++nu)
                  v2 += C[nu][mu] * J.d2[la][nu] + C[nu][la] * J.d2[mu][nu] + ci[nu] * J.d3[mu][la][nu];
                s[i][mu][la] = s[i][la][mu] = v2;
              }
            }
            vsq[1 + i] += z * z;
            dsq[1 + i] += wsq;
          }

          std::size_t word = 1 + static_cast<std::size_t>(m);
          for (int i = 0; i < m; ++i) {
            const auto& C = coeff[i].C;
            const auto& ci = cz[i];
            for (int j = i; j < m; ++j, ++word) {
              double val = 0.0;
              for (int la = 0; la < dim; ++la) val += ci[la] * w[j][la];
              double der = 0.0;
              for (int mu = 0; mu < dim; ++mu) {
                double v = 0.0;
                for (int la = 0; la < dim; ++la) v += C[la][mu] * w[j][la] + ci[la] * s[j][mu][la];
                der += v * v;
              }
              vsq[word] += val * val;
              dsq[word] += der;
            }
          }
        }
        for (std::size_t k = 0; k < words; ++k) {
          B.val_sq[k] += vsq[k];
          B.der_sq[k] += dsq[k];
          B.val_sup[k] = std::max(B.val_sup[k], std::sqrt(vsq[k]));
          B.der_sup[k] = std::max(B.der_sup[k], std::sqrt(dsq[k]));
        }

        for (int I = 0; I < q; ++I)
          for (int mu = 0; mu < dim; ++mu) jet(mu, I) = jets[I].d1[mu];
        try {
          detail::fill_metric(jet, *mp);
          detail::fill_H(jet, form, *mp);
          B.margin = std::min(B.margin, coercivity_margin(mp->H));
          for (int I = 0; I < q; ++I) {
            double src = 0.0;
            for (int mu = 0; mu < dim; ++mu)
              for (int nu = 0; nu < dim; ++nu)
                for (int L = 0; L < q; ++L) src += mp->H(mu, nu, I, L) * jets[L].d2[mu][nu];
            B.source_sq[I] += src * src;
          }
          double dH = 0.0;
          for (int la = 0; la < dim; ++la) {
            for (int I = 0; I < q; ++I)
              for (int mu = 0; mu < dim; ++mu) dj(mu, I) = Dual{jets[I].d1[mu], jets[I].d2[la][mu]};
            detail::fill_metric(dj, *dmp);
            detail::fill_H(dj, form, *dmp);
            const auto& H = dmp->H;
            for (int mu = 0; mu < dim; ++mu)
              for (int nu = 0; nu < dim; ++nu)
                for (int I = 0; I < q; ++I)
                  for (int L = 0; L < q; ++L) dH += std::abs(H(mu, nu, I, L).d);
          }
          B.dH = std::max(B.dH, dH);
        } catch (const SpacelikeDegeneration&) {
          B.margin = -std::numeric_limits<double>::infinity();
        }
      }
    }
  });

  const double dV = cell_volume(grid);
  std::vector<double> column(blocks);
  auto l2 = [&](auto member, std::size_t k) {
    for (std::size_t b = 0; b < blocks; ++b) column[b] = (acc[b].*member)[k];
    return std::sqrt(pairwise_sum(column) * dV);
  };
  auto sup = [&](auto member, std::size_t k) {
    double v = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) v = std::max(v, (acc[b].*member)[k]);
    return v;
  };
  auto order_of = [&](std::size_t k) { return k == 0 ? 0 : (k <= static_cast<std::size_t>(m) ? 1 : 2); };

  NormsRecord r;
  r.t = state.t;
  for (std::size_t k = 0; k < words; ++k) {
    const int o = order_of(k);
    r.M1_by_order[o] += l2(&BlockSums::der_sq, k);
    r.M2_by_order[o] += l2(&BlockSums::val_sq, k);
    r.N2_by_order[o] += sup(&BlockSums::val_sup, k);
    if (o <= 1) r.N1_by_order[o] += sup(&BlockSums::der_sup, k);
  }
  r.M1 = r.M1_by_order[0] + r.M1_by_order[1] + r.M1_by_order[2];
  r.M2 = r.M2_by_order[0] + r.M2_by_order[1] + r.M2_by_order[2];
  r.N1 = r.N1_by_order[0] + r.N1_by_order[1];
  r.N2 = r.N2_by_order[0] + r.N2_by_order[1] + r.N2_by_order[2];
  r.energy = l2(&BlockSums::der_sq, 0);
  r.df_linf = sup(&BlockSums::der_sup, 0);
  for (int I = 0; I < q; ++I) r.source_l2 += l2(&BlockSums::source_sq, static_cast<std::size_t>(I));
  for (const BlockSums& B : acc) {
    r.dH_linf = std::max(r.dH_linf, B.dH);
    r.min_coercivity_margin = std::min(r.min_coercivity_margin, B.margin);
  }
  return r;
}

}  // namespace tms
