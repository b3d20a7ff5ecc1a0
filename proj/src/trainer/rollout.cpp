#include "claw/trainer/rollout.hpp"

#include <cstdio>
#include <thread>

namespace claw::trainer {

void TrainConfig::validate() const {
  if (group_size < 2) throw std::invalid_argument("group_size must be at least 2");
  if (temperature <= 0.0) throw std::invalid_argument("temperature must be positive");
  if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be non-negative");
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (batch_tasks < 1) throw std::invalid_argument("batch_tasks must be at least 1");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  if (estimator != "grpo" && estimator != "gigpo")
    throw std::invalid_argument("estimator must be grpo or gigpo");
  if (prm_mode != "rule" && prm_mode != "remote")
    throw std::invalid_argument("prm_mode must be rule or remote");
  if (lambda_step < 0.0) throw std::invalid_argument("lambda_step must be non-negative");
  if (max_updates < 0) throw std::invalid_argument("max_updates must be non-negative");
  if (fault_plan) {
    if (fault_plan->stall_prob < 0.0 || fault_plan->crash_prob < 0.0 ||
        fault_plan->stall_prob + fault_plan->crash_prob > 1.0)
      throw std::invalid_argument("fault probabilities must be non-negative and sum to at most 1");
  }
}

namespace {

struct RolloutSlot {
  bool kept = false;
  Trajectory trajectory;
  std::vector<simdevice::Observation> observations;
  rewardkit::RewardSignal signal;
  std::vector<Trajectory> discarded;
  int rotations = 0;
};

simdevice::FaultPlan attempt_plan(const simdevice::FaultPlan& base, const std::string& prefix,
                                  int rollout, int attempt) {
  simdevice::FaultPlan plan = base;
  plan.rng_seed = support::derive_seed(
      base.rng_seed, {prefix, std::to_string(rollout), std::to_string(attempt)});
  return plan;
}

void run_rollout(RolloutSlot& slot, const simdevice::SuiteTask& st, Policy& policy,
                 envpool::EnvPool& pool, const TrainConfig& cfg, const RewardContext& rctx,
                 std::uint64_t group_seed, const std::string& prefix, int index) {
  support::Rng rng(support::derive_seed(group_seed, {"rollout", std::to_string(index)}));
  simdevice::TaskSpec task = st.task;
  task.max_steps = cfg.max_steps;
  const std::string rollout_id = prefix + "/" + std::to_string(index);

  envpool::Lease lease;
  try {
    lease = pool.acquire(task, rollout_id);
  } catch (const envpool::PoolExhausted&) {
    std::fprintf(stderr, "[trainer] dropping rollout %s: pool exhausted\n", rollout_id.c_str());
    return;
  }

  int attempt = 0;
  if (cfg.fault_plan)
    lease.env->configure_faults(attempt_plan(*cfg.fault_plan, prefix, index, attempt));

  Trajectory traj;
  traj.task_id = task.task_id;
  traj.rollout_id = rollout_id;
  std::vector<simdevice::Observation> decisions;
  std::vector<double> scores;
  std::vector<simdevice::Action> history;

  auto obs = lease.obs;
  for (;;) {
    auto choice = policy.act(obs, task, cfg.temperature, rng);
    simdevice::StepResult res;
    try {
      res = lease.env->step(choice.action);
    } catch (const simdevice::EnvFaultedError&) {
      pool.health_check(lease.env_id);
      try {
        lease = pool.rotate_spare(lease);
      } catch (const envpool::SparesExhausted&) {
        std::fprintf(stderr, "[trainer] dropping rollout %s: spares exhausted\n",
                     rollout_id.c_str());
        traj.termination = Termination::rotated_restart;
        slot.discarded.push_back(std::move(traj));
        return;  // lease already voided by the failed rotation
      }
      ++slot.rotations;
      ++attempt;
      if (cfg.fault_plan)
        lease.env->configure_faults(attempt_plan(*cfg.fault_plan, prefix, index, attempt));
      traj.termination = Termination::rotated_restart;
      slot.discarded.push_back(std::move(traj));
      traj = Trajectory{};
      traj.task_id = task.task_id;
      traj.rollout_id = rollout_id;
      decisions.clear();
      scores.clear();
      history.clear();
      obs = lease.obs;
      continue;
    }

    history.push_back(choice.action);
    StepRecord step;
    step.anchor = simdevice::anchor_hash(obs);
    step.action = choice.action;
    step.logprob = choice.logprob;
    step.candidate_count = choice.candidate_count;
    traj.steps.push_back(step);
    decisions.push_back(obs);

    rewardkit::JudgeRequest req{task.instruction, obs.state, res.obs.state, history};
    scores.push_back(rewardkit::prm_step_score(req, task, rctx.prm_mode, rctx.oracle, rctx.judge));

    obs = res.obs;
    if (res.terminal) {
      traj.termination = choice.action.type == simdevice::Action::Type::done
                             ? Termination::done
                             : Termination::step_budget;
      break;
    }
  }

  int outcome = 0;
  try {
    outcome = rewardkit::outcome_reward(obs.state, task, rctx.outcome_mode, rctx.judge, history);
  } catch (const rewardkit::JudgeUnavailable& e) {
    std::fprintf(stderr, "[trainer] dropping rollout %s: %s\n", rollout_id.c_str(), e.what());
    pool.release(lease);
    return;
  }

  slot.signal.outcome = outcome;
  slot.signal.step_scores = scores;
  slot.signal.lambda_step = rctx.lambda_step;
  const auto rewards = rewardkit::compose(slot.signal);
  for (std::size_t t = 0; t < traj.steps.size(); ++t) traj.steps[t].reward = rewards[t];
  traj.outcome = outcome;

  slot.trajectory = std::move(traj);
  slot.observations = std::move(decisions);
  slot.kept = true;
  pool.release(lease);
}

}  // namespace

CollectedGroup collect_group(const simdevice::SuiteTask& st, Policy& policy,
                             envpool::EnvPool& pool, const TrainConfig& cfg,
                             const RewardContext& rctx, std::uint64_t group_seed,
                             const std::string& rollout_prefix) {
  std::vector<RolloutSlot> slots(static_cast<std::size_t>(cfg.group_size));
  std::vector<std::thread> threads;
  threads.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        run_rollout(slots[i], st, policy, pool, cfg, rctx, group_seed, rollout_prefix,
                    static_cast<int>(i));
      } catch (const std::exception& e) {
        std::fprintf(stderr, "[trainer] rollout %zu failed: %s\n", i, e.what());
      }
    });
  }
  for (auto& t : threads) t.join();

  CollectedGroup out;
  out.task = st.task;
  out.task.max_steps = cfg.max_steps;
  out.group.task_id = st.task.task_id;
  for (auto& slot : slots) {
    out.rotations += slot.rotations;
    for (auto& d : slot.discarded) out.discarded.push_back(std::move(d));
    if (!slot.kept) {
      ++out.dropped;
      continue;
    }
    out.group.trajectories.push_back(std::move(slot.trajectory));
    out.observations.push_back(std::move(slot.observations));
    out.signals.push_back(std::move(slot.signal));
  }
  if (!out.usable())
    std::fprintf(stderr, "[trainer] group for %s shrank to %zu rollouts; dropping it\n",
                 st.task.task_id.c_str(), out.group.trajectories.size());
  return out;
}

}  // namespace claw::trainer
