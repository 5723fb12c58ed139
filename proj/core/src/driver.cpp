#include "tms/driver.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "tms/energy.hpp"

namespace tms {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kCoercivityLost: return "coercivity_lost";
    case RunStatus::kNonFinite: return "non_finite";
    case RunStatus::kSingularBlock: return "singular_block";
  }
  return "?";
}

StepPlan plan_steps(double t_final, double cfl, double dx) {
  if (!(t_final > 0.0)) return {0, 0.0};
  const long steps = static_cast<long>(std::ceil(t_final / (cfl * dx) - 1e-12));
  return {std::max(steps, 1L), t_final / static_cast<double>(std::max(steps, 1L))};
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Driver {
 public:
  Driver(const DriverOptions& options, RunObserver* observer, const StepPlan& plan)
      : options_(options), observer_(observer), plan_(plan) {}

  EvolveResult run(const FieldState& data) {
    EvolveResult result;
    result.steps = 0;
    result.dt = plan_.dt;
    levels_.emplace(0, data);
    levels_.at(0).t = 0.0;
    if (options_.divergence_residual && plan_.steps > 0) extend_backward();

    for (long k = 0;; ++k) {
      const FieldState& state = levels_.at(k);
      Acceleration acc;
      StepReport report;
      report.step = k;
      report.t = state.t;
      report.dt = plan_.dt;
      try {
        acc = second_time_derivative(state, options_.engine);
      } catch (const Error& e) {
        fail(result, e, k);
        break;
      }
      report.min_margin = acc.min_margin;
      report.max_abs_ddf = acc.max_abs;
      if (observer_) observer_->on_step(report);

      const bool last = k == plan_.steps;
      if (k % options_.diag_cadence == 0 || last) {
        TimeDerivatives td;
        td.a = acc.a;
        td.a_t = third_time_derivative(state, acc.a, options_.engine);
        pending_.push_back({k, compute_norms(state, td, options_.engine.form)});
      }
      if (options_.snapshot_cadence > 0 && k % options_.snapshot_cadence == 0 && observer_)
        observer_->on_snapshot(k, state);
      if (last) {
        result.steps = k;
        break;
      }
      try {
        FieldState next = rk4_step(state, plan_.dt, options_.engine, &acc);
        next.t = static_cast<double>(k + 1) * plan_.dt;
        levels_.emplace(k + 1, std::move(next));
      } catch (const Error& e) {
        fail(result, e, k);
        break;
      }
      flush(k + 1, result);
      levels_.erase(levels_.begin(), levels_.lower_bound(k + 1 - 4));
    }

    const long reached = result.status == RunStatus::kOk ? result.steps : last_step_;
    result.final_state = levels_.at(reached);
    if (options_.divergence_residual && result.status == RunStatus::kOk) extend_forward(reached);
    flush(std::numeric_limits<long>::max(), result);
    return result;
  }

 private:
  struct Pending {
    long step;
    NormsRecord record;
  };

  void fail(EvolveResult& result, const Error& e, long k) {
    last_step_ = k;
    result.steps = k;
    result.message = e.what();
    if (const auto* c = dynamic_cast<const CoercivityLost*>(&e)) {
      result.status = RunStatus::kCoercivityLost;
      result.offending_cell = c->cell();
      result.offending_margin = c->margin();
    } else if (const auto* b = dynamic_cast<const SingularBlock*>(&e)) {
      result.status = RunStatus::kSingularBlock;
      result.offending_cell = b->cell();
    } else if (const auto* nf = dynamic_cast<const NonFinite*>(&e)) {
      result.status = RunStatus::kNonFinite;
      result.offending_cell = nf->index();
    } else {
      throw;
    }
  }

  // Levels -1 and -2 for the residual at t = 0; failures just leave it NaN.
  void extend_backward() {
    try {
      FieldState m1 = rk4_step(levels_.at(0), -plan_.dt, options_.engine);
      m1.t = -plan_.dt;
      FieldState m2 = rk4_step(m1, -plan_.dt, options_.engine);
      m2.t = -2.0 * plan_.dt;
      levels_.emplace(-1, std::move(m1));
      levels_.emplace(-2, std::move(m2));
    } catch (const Error&) {
    }
  }

  // Two steps past the end, used only by the residual.
  void extend_forward(long reached) {
    try {
      for (long k = reached; k < reached + 2; ++k) {
        FieldState next = rk4_step(levels_.at(k), plan_.dt, options_.engine);
        next.t = static_cast<double>(k + 1) * plan_.dt;
        levels_.emplace(k + 1, std::move(next));
      }
    } catch (const Error&) {
    }
  }

  // Emits every pending record whose step is at most `available` - 2.
  void flush(long available, EvolveResult& result) {
    while (!pending_.empty() && (available == std::numeric_limits<long>::max() ||
                                 pending_.front().step + 2 <= available)) {
      Pending p = std::move(pending_.front());
      pending_.pop_front();
      p.record.divergence_residual = residual_at(p.step);
      const EnergyBound b = energy_.add(p.record);
      p.record.energy_bound = b.rhs;
      p.record.energy_margin = b.margin;
      if (observer_) observer_->on_norms(p.record);
      result.records.push_back(p.record);
    }
  }

  double residual_at(long step) {
    if (!options_.divergence_residual || plan_.steps == 0) return kNaN;
    std::array<const FieldState*, 5> ptrs{};
    for (long j = -2; j <= 2; ++j) {
      const auto it = levels_.find(step + j);
      if (it == levels_.end()) return kNaN;
      ptrs[static_cast<std::size_t>(j + 2)] = &it->second;
    }
    try {
      return divergence_residual(ptrs);
    } catch (const Error&) {
      return kNaN;
    }
  }

  DriverOptions options_;
  RunObserver* observer_;
  StepPlan plan_;
  std::map<long, FieldState> levels_;
  std::deque<Pending> pending_;
  EnergyInequality energy_;
  long last_step_ = 0;
};

}  // namespace

EvolveResult evolve(const FieldState& data, const DriverOptions& options, RunObserver* observer) {
  if (options.diag_cadence < 1) throw ValidationError("diag_cadence", "must be at least 1");
  if (!(options.cfl > 0.0 && options.cfl <= 0.25)) throw ValidationError("cfl", "must lie in (0, 0.25]");
  const StepPlan plan = plan_steps(options.t_final, options.cfl, data.grid.dx());
  Driver driver(options, observer, plan);
  return driver.run(data);
}

}  // namespace tms
