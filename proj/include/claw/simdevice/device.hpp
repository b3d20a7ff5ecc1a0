#pragma once

#include <optional>

#include "claw/simdevice/app_graph.hpp"
#include "claw/simdevice/types.hpp"
#include "claw/support/rand.hpp"

namespace claw::simdevice {

struct StepResult {
  Observation obs;
  bool terminal = false;
  std::optional<int> outcome_hint;  // verify_outcome, present when terminal
};

// One simulated GUI device. Single-threaded by contract; state after reset is
// a pure function of (app_id, init_seed), and transitions are deterministic,
// so replaying an action sequence replays the exact observation sequence.
class SimDevice {
 public:
  enum class Health { healthy, stalled, crashed };

  explicit SimDevice(const AppRegistry& registry) : registry_(&registry) {}

  Observation reset(const TaskSpec& task);
  StepResult step(const Action& action);

  // Arms the seeded fault stream. One uniform draw per step: u < stall_prob
  // stalls, else u < stall_prob + crash_prob crashes. The stream persists
  // across resets so an episode restart cannot re-arm the same fault sequence.
  void inject(const FaultPlan& plan);

  // Pure probe: reports sticky fault flags without touching device state.
  Health health() const;

  bool ready() const { return app_ != nullptr; }
  bool terminal() const { return terminal_; }
  int steps_taken() const { return step_count_; }
  const TaskSpec& task() const { return task_; }
  const ScreenState& screen() const { return screen_; }
  Observation observation() const { return {screen_, step_count_}; }
  const GraphState& graph_state() const { return gstate_; }

 private:
  void maybe_fault();

  const AppRegistry* registry_;
  const AppGraph* app_ = nullptr;
  TaskSpec task_;
  GraphState gstate_;
  ScreenState screen_;
  int step_count_ = 0;
  bool terminal_ = false;

  FaultPlan plan_;
  support::Rng fault_rng_;
  bool fault_armed_ = false;
  Health health_ = Health::healthy;
};

}  // namespace claw::simdevice
