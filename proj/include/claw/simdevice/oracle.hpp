#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "claw/simdevice/app_graph.hpp"
#include "claw/simdevice/types.hpp"

namespace claw::simdevice {

// Privileged shortest-path oracle: minimal number of interactions from a state
// to any goal-satisfying state of the task's app. Explores the finite product
// of screens × reachable var bindings breadth-first, over the same interaction
// alphabet the policy enumerates, and memoizes one distance map per task.
class GoalOracle {
 public:
  explicit GoalOracle(const AppRegistry& registry) : registry_(&registry) {}

  // nullopt = no goal state reachable from here.
  std::optional<int> distance(const GraphState& st, const TaskSpec& task) const;
  std::optional<int> distance(const ScreenState& state, const TaskSpec& task) const;

  // Distance at the task's reset state; this is the suite's difficulty number.
  std::optional<int> reset_distance(const TaskSpec& task) const;

 private:
  struct TaskMap {
    std::map<GraphState, int> dist;           // goal distance per explored state
    std::map<GraphState, bool> explored;      // reachable-from-reset closure
  };

  const TaskMap& task_map(const TaskSpec& task) const;

  const AppRegistry* registry_;
  mutable std::mutex mu_;
  mutable std::map<std::string, TaskMap> maps_;  // keyed by task_id
};

}  // namespace claw::simdevice
