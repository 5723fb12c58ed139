#include "tms/energy.hpp"

#include <cmath>

namespace tms {

EnergyBound EnergyInequality::add(const NormsRecord& r) {
  if (bounds_.empty()) {
    energy0_ = r.energy;
  } else {
    const double dt = r.t - last_t_;
    source_integral_ += 0.5 * dt * (last_source_ + r.source_l2);
    growth_integral_ += 0.5 * dt * 2.0 * (last_dH_ + r.dH_linf);
  }
  last_t_ = r.t;
  last_source_ = r.source_l2;
  last_dH_ = r.dH_linf;

  EnergyBound b;
  b.t = r.t;
  b.energy = r.energy;
  b.rhs = 2.0 * (energy0_ + source_integral_) * std::exp(growth_integral_);
  b.margin = b.rhs - b.energy;
  bounds_.push_back(b);
  return b;
}

std::vector<EnergyBound> energy_and_inequality(std::span<const NormsRecord> records) {
  if (records.empty()) throw IncompleteSeries("no diagnostics records");
  const double scale = std::max(1.0, std::abs(records.back().t));
  if (std::abs(records.front().t) > 1e-9 * scale) throw IncompleteSeries("series does not start at t = 0");
  if (records.size() > 2) {
    const double step = records[1].t - records[0].t;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const double gap = records[i].t - records[i - 1].t;
      const bool last = i + 1 == records.size();
      const bool ok = last ? (gap > 0.0 && gap <= step * (1.0 + 1e-9)) : std::abs(gap - step) <= 1e-9 * scale;
      if (!ok) throw IncompleteSeries("gap in diagnostics series before t = " + std::to_string(records[i].t));
    }
  }
  EnergyInequality acc;
  for (const auto& r : records) acc.add(r);
  return acc.bounds();
}

}  // namespace tms
