#include "tms/decay.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "tms/errors.hpp"

namespace tms {

PowerLawFit power_law_fit(std::span<const double> t, std::span<const double> values, double t_lo, double t_hi) {
  if (t.size() != values.size()) throw ValidationError("series", "time and value columns differ in length");
  if (!(t_lo >= 0.0) || !(t_hi >= 2.0 * t_lo) || !(t_hi > t_lo))
    throw ValidationError("window", "fit window must satisfy 0 <= t_lo and t_hi >= 2 t_lo");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(values[i] > 0.0)) throw DegenerateSeries("non-positive sample at t = " + std::to_string(t[i]));
    xs.push_back(std::log1p(t[i]));
    ys.push_back(std::log(values[i]));
  }
  const std::size_t m = xs.size();
  if (m < 3) throw DegenerateSeries("fewer than three samples in the fit window");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateSeries("fit window has no spread in t");

  PowerLawFit fit;
  fit.samples = m;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - fit.intercept - fit.exponent * xs[i];
    rss += r * r;
  }
  const double dof = static_cast<double>(m - 2);
  const double se = std::sqrt(rss / dof / sxx);
  const boost::math::students_t dist(dof);
  fit.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  return fit;
}

}  // namespace tms
