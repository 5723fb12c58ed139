#include "tms/geometry.hpp"

namespace tms {

FirstJet make_jet(int n, int q, std::span<const double> values) {
  FirstJet jet(n, q);
  const auto expected = static_cast<std::size_t>((n + 1) * q);
  if (values.size() != expected) throw ValidationError("jet", "expected (n+1) q values");
  for (int mu = 0; mu <= n; ++mu)
    for (int I = 0; I < q; ++I) jet(mu, I) = values[static_cast<std::size_t>(mu * q + I)];
  return jet;
}

}  // namespace tms
