#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "claw/simdevice/oracle.hpp"
#include "claw/simdevice/types.hpp"
#include "claw/support/hash.hpp"

namespace claw::rewardkit {

struct JudgeUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Everything needed to score one trajectory: binary outcome plus one step
// score per action, scaled by lambda_step when composed.
struct RewardSignal {
  int outcome = 0;                  // {0,1}
  std::vector<double> step_scores;  // one per step, each in [0,1]
  double lambda_step = 0.1;

  void validate() const;  // throws std::invalid_argument on range violations
};

struct JudgeRequest {
  std::string instruction;
  simdevice::ScreenState prev_obs;
  simdevice::ScreenState cur_obs;
  std::vector<simdevice::Action> action_history;  // most recent last, ≥1 for step judging
};

// Canonical digest of a request; mock verdicts are scripted off this, and the
// remote client logs it alongside every exchange.
support::Digest request_digest(const JudgeRequest& req);

// Stateless verdict source, safe to call from concurrent rollout workers.
// Implementations throw JudgeUnavailable when the backend cannot answer.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual bool judge_outcome(const JudgeRequest& req) = 0;
  virtual double judge_step(const JudgeRequest& req) = 0;
};

// Deterministic stand-in: verdicts are pure functions of the request digest,
// overridable per test. Flipping `available` simulates an outage.
class MockJudge final : public JudgeClient {
 public:
  bool available = true;
  std::function<bool(const support::Digest&)> outcome_script;
  std::function<double(const support::Digest&)> step_script;

  bool judge_outcome(const JudgeRequest& req) override;
  double judge_step(const JudgeRequest& req) override;
};

enum class OutcomeMode { system, judge };
enum class StepMode { rule, remote };

// Binary terminal reward. System mode asks the simulator's goal predicate;
// judge mode maps the client's verdict to {0,1} and lets JudgeUnavailable
// propagate so the caller can drop the episode from the batch.
int outcome_reward(const simdevice::ScreenState& final_state, const simdevice::TaskSpec& task,
                   OutcomeMode mode, JudgeClient* judge = nullptr,
                   const std::vector<simdevice::Action>& action_history = {});

// Per-step progress score in [0,1]. Rule mode scores 1 exactly when the
// oracle goal distance strictly decreased across the step (unreachable on
// either side counts as no decrease). Remote mode clamps the judge's score;
// if the judge is unavailable the step scores 0 with a logged warning and
// training continues on the outcome signal alone.
double prm_step_score(const JudgeRequest& req, const simdevice::TaskSpec& task, StepMode mode,
                      const simdevice::GoalOracle* oracle, JudgeClient* judge = nullptr);

// Places lambda·score at every step and adds the outcome at the terminal
// step, so the sequence sums to outcome + lambda·Σscores exactly.
std::vector<double> compose(int outcome, const std::vector<double>& step_scores,
                            double lambda_step);
std::vector<double> compose(const RewardSignal& signal);

}  // namespace claw::rewardkit
