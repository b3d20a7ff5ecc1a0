#include "claw/trajectory.hpp"

#include <nlohmann/json.hpp>

namespace claw {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::done: return "done";
    case Termination::step_budget: return "step_budget";
    case Termination::rotated_restart: return "rotated_restart";
  }
  return "done";
}

void to_json(nlohmann::json& j, const StepRecord& s) {
  j = nlohmann::json{{"anchor", s.anchor.hex()},
                     {"action", s.action},
                     {"logprob", s.logprob},
                     {"reward", s.reward},
                     {"candidate_count", s.candidate_count}};
}

void to_json(nlohmann::json& j, const Trajectory& t) {
  j = nlohmann::json{{"task_id", t.task_id},
                     {"rollout_id", t.rollout_id},
                     {"steps", t.steps},
                     {"outcome", t.outcome},
                     {"termination", to_string(t.termination)}};
}

}  // namespace claw
