#pragma once

#include <string>
#include <vector>

#include "claw/simdevice/device.hpp"
#include "claw/simdevice/types.hpp"

namespace claw::simdevice {

// Reference solutions are stored abstractly (widget ids, not pixels) and bound
// to concrete actions against the live screen during replay.
struct ReferenceStep {
  enum class Kind { tap, type_text, swipe, back, done };
  Kind kind = Kind::done;
  std::string widget;
  std::string text;
  std::string direction;
};

struct SuiteTask {
  TaskSpec task;
  std::vector<ReferenceStep> reference_solution;
  std::vector<std::string> tags;

  bool has_tag(const std::string& tag) const;
};

class TaskSuite {
 public:
  static TaskSuite load_file(const std::string& path);

  const std::vector<SuiteTask>& tasks() const { return tasks_; }
  std::vector<const SuiteTask*> with_tag(const std::string& tag) const;
  const SuiteTask& find(const std::string& task_id) const;

 private:
  std::vector<SuiteTask> tasks_;
};

Action bind_reference_step(const ReferenceStep& step, const ScreenState& screen);

// Resets the device and replays the stored solution; returns verify_outcome of
// the final state.
int replay_reference(SimDevice& device, const SuiteTask& st);

}  // namespace claw::simdevice
