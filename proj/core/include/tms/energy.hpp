#pragma once

// The a-priori energy inequality
//   ||d f||(t) <= 2 (||d f||(0) + int_0^t sum_I ||H d d f||_L2) exp(int_0^t 2 ||d H||_inf),
// evaluated from a diagnostics series with the trapezoid rule.

#include <span>
#include <vector>

#include "tms/norms.hpp"

namespace tms {

struct EnergyBound {
  double t = 0.0;
  double energy = 0.0;  // ||d f||_L2 (t)
  double rhs = 0.0;     // right-hand side of the inequality
  double margin = 0.0;  // rhs - energy
};

/// Running evaluation, one record at a time.
class EnergyInequality {
 public:
  EnergyBound add(const NormsRecord& record);
  const std::vector<EnergyBound>& bounds() const { return bounds_; }

 private:
  std::vector<EnergyBound> bounds_;
  double energy0_ = 0.0;
  double source_integral_ = 0.0;
  double growth_integral_ = 0.0;
  double last_t_ = 0.0;
  double last_source_ = 0.0;
  double last_dH_ = 0.0;
};

/// Whole-series evaluation. Throws IncompleteSeries unless the records start
/// at t = 0 and are equally spaced (the last interval may be shorter).
std::vector<EnergyBound> energy_and_inequality(std::span<const NormsRecord> records);

}  // namespace tms
