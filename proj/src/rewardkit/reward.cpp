#include "claw/rewardkit/reward.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace claw::rewardkit {

void RewardSignal::validate() const {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  if (lambda_step < 0.0) throw std::invalid_argument("lambda_step must be non-negative");
  for (double s : step_scores)
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("step score outside [0,1]");
}

support::Digest request_digest(const JudgeRequest& req) {
  std::string buf = req.instruction;
  buf += '\x1e';
  buf += simdevice::canonical_serialize(req.prev_obs);
  buf += '\x1e';
  buf += simdevice::canonical_serialize(req.cur_obs);
  for (const auto& a : req.action_history) {
    buf += '\x1e';
    buf += nlohmann::json(a).dump();
  }
  return support::sha256(buf);
}

bool MockJudge::judge_outcome(const JudgeRequest& req) {
  if (!available) throw JudgeUnavailable("mock judge offline");
  const auto d = request_digest(req);
  if (outcome_script) return outcome_script(d);
  return d.bytes[0] % 2 == 0;
}

double MockJudge::judge_step(const JudgeRequest& req) {
  if (!available) throw JudgeUnavailable("mock judge offline");
  const auto d = request_digest(req);
  if (step_script) return step_script(d);
  return static_cast<double>(d.bytes[1]) / 255.0;
}

int outcome_reward(const simdevice::ScreenState& final_state, const simdevice::TaskSpec& task,
                   OutcomeMode mode, JudgeClient* judge,
                   const std::vector<simdevice::Action>& action_history) {
  if (mode == OutcomeMode::system) return simdevice::verify_outcome(final_state, task);
  if (judge == nullptr) throw JudgeUnavailable("no judge client configured");
  JudgeRequest req;
  req.instruction = task.instruction;
  req.prev_obs = final_state;
  req.cur_obs = final_state;
  req.action_history = action_history;
  return judge->judge_outcome(req) ? 1 : 0;
}

double prm_step_score(const JudgeRequest& req, const simdevice::TaskSpec& task, StepMode mode,
                      const simdevice::GoalOracle* oracle, JudgeClient* judge) {
  if (mode == StepMode::rule) {
    if (oracle == nullptr) throw std::invalid_argument("rule mode needs a goal oracle");
    const auto before = oracle->distance(req.prev_obs, task);
    const auto after = oracle->distance(req.cur_obs, task);
    if (!before || !after) return 0.0;
    return *after < *before ? 1.0 : 0.0;
  }
  if (judge == nullptr) throw JudgeUnavailable("no judge client configured");
  try {
    return std::clamp(judge->judge_step(req), 0.0, 1.0);
  } catch (const JudgeUnavailable& e) {
    std::fprintf(stderr, "[rewardkit] judge unavailable, scoring step 0: %s\n", e.what());
    return 0.0;
  }
}

std::vector<double> compose(int outcome, const std::vector<double>& step_scores,
                            double lambda_step) {
  if (step_scores.empty()) throw LengthMismatch("cannot compose rewards for an empty trajectory");
  std::vector<double> rewards(step_scores.size());
  for (std::size_t t = 0; t < step_scores.size(); ++t) rewards[t] = lambda_step * step_scores[t];
  rewards.back() += static_cast<double>(outcome);
  return rewards;
}

std::vector<double> compose(const RewardSignal& signal) {
  signal.validate();
  return compose(signal.outcome, signal.step_scores, signal.lambda_step);
}

}  // namespace claw::rewardkit
