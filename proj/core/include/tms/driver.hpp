#pragma once

// Time-stepping loop: RK4 steps at a fixed dt, norms at a step cadence, the
// divergence residual from five time levels around each diagnostics step,
// and the running energy inequality.

#include <cstddef>
#include <string>
#include <vector>

#include "tms/evolution.hpp"
#include "tms/norms.hpp"

namespace tms {

enum class RunStatus { kOk, kCoercivityLost, kNonFinite, kSingularBlock };

std::string to_string(RunStatus status);

struct StepReport {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double min_margin = 0.5;
  double max_abs_ddf = 0.0;
  RunStatus status = RunStatus::kOk;
};

struct DriverOptions {
  double t_final = 0.0;
  double cfl = 0.2;
  int diag_cadence = 10;
  int snapshot_cadence = 0;  // 0 = none
  EngineOptions engine;
  bool divergence_residual = true;
};

/// Called in step order. on_norms sees records with the residual and energy
/// margin filled in, which happens two steps after the record's own step.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_step(const StepReport&) {}
  virtual void on_norms(const NormsRecord&) {}
  virtual void on_snapshot(long /*step*/, const FieldState&) {}
};

struct EvolveResult {
  FieldState final_state;
  RunStatus status = RunStatus::kOk;
  std::string message;
  std::size_t offending_cell = 0;
  double offending_margin = 0.0;
  long steps = 0;
  double dt = 0.0;
  std::vector<NormsRecord> records;
};

/// Number of steps and dt: dt = t_final / ceil(t_final / (cfl dx)) <= cfl dx.
struct StepPlan {
  long steps = 0;
  double dt = 0.0;
};
StepPlan plan_steps(double t_final, double cfl, double dx);

/// Advances `data` to t_final or until the state stops being admissible.
/// Diagnostics are taken at steps 0, c, 2c, ... and at the final step.
/// CoercivityLost, NonFinite and SingularBlock end the run with the matching
/// status; the last complete state is returned with the offending cell.
EvolveResult evolve(const FieldState& data, const DriverOptions& options, RunObserver* observer = nullptr);

}  // namespace tms
