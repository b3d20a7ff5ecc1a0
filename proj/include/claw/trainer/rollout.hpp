#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "claw/credit/credit.hpp"
#include "claw/envpool/pool.hpp"
#include "claw/rewardkit/reward.hpp"
#include "claw/simdevice/oracle.hpp"
#include "claw/simdevice/suite.hpp"
#include "claw/trainer/policy.hpp"
#include "claw/trajectory.hpp"

namespace claw::trainer {

struct TrainConfig {
  int group_size = 8;
  double temperature = 0.7;
  double learning_rate = 1e-2;  // toy-policy default; remote policies use 1e-6
  int epochs = 3;
  int batch_tasks = 8;
  int max_steps = 50;
  std::string estimator = "gigpo";  // or "grpo"
  credit::CreditConfig credit;
  double lambda_step = 0.1;
  std::string prm_mode = "rule";  // or "remote"
  std::uint64_t seed = 0;
  int max_updates = 0;  // 0 = bounded by epochs only
  std::optional<simdevice::FaultPlan> fault_plan;

  void validate() const;
};

struct RewardContext {
  rewardkit::OutcomeMode outcome_mode = rewardkit::OutcomeMode::system;
  rewardkit::StepMode prm_mode = rewardkit::StepMode::rule;
  double lambda_step = 0.1;
  const simdevice::GoalOracle* oracle = nullptr;  // rule PRM
  rewardkit::JudgeClient* judge = nullptr;        // judge outcome / remote PRM
};

// A rollout group plus everything the gradient and the logs need: the decision
// observations aligned step-for-step with the trajectories, the raw reward
// signals, and the discarded partials from fault rotations.
struct CollectedGroup {
  simdevice::TaskSpec task;  // as rolled out (max_steps from the config)
  RolloutGroup group;
  std::vector<std::vector<simdevice::Observation>> observations;
  std::vector<rewardkit::RewardSignal> signals;
  std::vector<Trajectory> discarded;  // termination = rotated_restart
  int rotations = 0;
  int dropped = 0;  // rollouts lost to SparesExhausted or invalid judge verdicts

  bool usable() const { return group.trajectories.size() >= 2; }
};

// Runs group_size episodes of the task in parallel over pool leases. Each
// rollout samples with its own stream derived from group_seed, and (when the
// config carries a fault plan) re-arms its env with a per-(rollout, attempt)
// plan, so results are independent of worker scheduling. Faults rotate to a
// spare and restart the episode; rollouts that cannot be restarted are
// dropped, shrinking the group.
CollectedGroup collect_group(const simdevice::SuiteTask& st, Policy& policy,
                             envpool::EnvPool& pool, const TrainConfig& cfg,
                             const RewardContext& rctx, std::uint64_t group_seed,
                             const std::string& rollout_prefix);

}  // namespace claw::trainer
