#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/simdevice/types.hpp"

namespace claw {

// One decision point: the anchor identifies the state the action was taken
// from; reward is the post-composition per-step reward.
struct StepRecord {
  simdevice::AnchorKey anchor{};
  simdevice::Action action;
  double logprob = 0.0;
  double reward = 0.0;
  int candidate_count = 0;
};

enum class Termination { done, step_budget, rotated_restart };

const char* to_string(Termination t);

struct Trajectory {
  std::string task_id;
  std::string rollout_id;
  std::vector<StepRecord> steps;
  int outcome = 0;
  Termination termination = Termination::done;
};

// G trajectories sharing one task: the normalization unit for group-relative
// advantage estimation.
struct RolloutGroup {
  std::string task_id;
  std::vector<Trajectory> trajectories;
};

void to_json(nlohmann::json& j, const StepRecord& s);
void to_json(nlohmann::json& j, const Trajectory& t);

}  // namespace claw
