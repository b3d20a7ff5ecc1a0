#include "claw/simdevice/device.hpp"

namespace claw::simdevice {

Observation SimDevice::reset(const TaskSpec& task) {
  app_ = &registry_->get(task.app_id);  // throws UnknownAppError
  task_ = task;
  gstate_ = app_->initial_state(task.init_seed);
  screen_ = app_->render(gstate_);
  step_count_ = 0;
  terminal_ = false;
  health_ = Health::healthy;  // a fresh episode starts healthy; fault stream stays armed
  return observation();
}

void SimDevice::inject(const FaultPlan& plan) {
  plan_ = plan;
  fault_rng_.seed(plan.rng_seed);
  fault_armed_ = plan.stall_prob > 0.0 || plan.crash_prob > 0.0;
}

SimDevice::Health SimDevice::health() const { return health_; }

void SimDevice::maybe_fault() {
  if (!fault_armed_) return;
  const double u = support::uniform01(fault_rng_);
  if (u < plan_.stall_prob) {
    health_ = Health::stalled;
    throw EnvFaultedError(FaultKind::stall);
  }
  if (u < plan_.stall_prob + plan_.crash_prob) {
    health_ = Health::crashed;
    throw EnvFaultedError(FaultKind::crash);
  }
}

StepResult SimDevice::step(const Action& action) {
  if (app_ == nullptr) throw PreconditionError("step before reset");
  if (terminal_) throw PreconditionError("step on terminal episode");
  if (health_ != Health::healthy) throw EnvFaultedError(health_ == Health::stalled ? FaultKind::stall : FaultKind::crash);

  maybe_fault();  // fault consumes the step attempt; app state untouched

  ++step_count_;
  if (action.type == Action::Type::done) {
    terminal_ = true;
  } else {
    if (auto ia = reduce_action(screen_, action)) {
      gstate_ = app_->apply(gstate_, *ia);
      screen_ = app_->render(gstate_);
    }
    // Unreduced actions (dead taps, degenerate swipes) are no-op self-loops.
    if (step_count_ >= task_.max_steps) terminal_ = true;
  }

  StepResult r;
  r.obs = observation();
  r.terminal = terminal_;
  if (terminal_) r.outcome_hint = verify_outcome(screen_, task_);
  return r;
}

}  // namespace claw::simdevice
