#include "claw/trainer/train.hpp"

#include <cstdio>
#include <numeric>

#include <nlohmann/json.hpp>

#include "claw/simdevice/device.hpp"
#include "claw/support/fs.hpp"

namespace claw::trainer {

void to_json(nlohmann::json& j, const UpdateStats& u) {
  j = nlohmann::json{{"update", u.update},
                     {"train_sr", u.train_sr},
                     {"mean_return", u.mean_return},
                     {"rotations", u.rotations},
                     {"groups_kept", u.groups_kept},
                     {"groups_dropped", u.groups_dropped}};
}

void to_json(nlohmann::json& j, const RunReport& r) {
  j = nlohmann::json{{"estimator", r.estimator},
                     {"feature_version", r.feature_version},
                     {"initial_sr", r.initial_sr},
                     {"final_sr", r.final_sr},
                     {"updates_applied", r.updates_applied},
                     {"total_rotations", r.total_rotations},
                     {"updates", r.updates}};
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"group_size", c.group_size},
                     {"temperature", c.temperature},
                     {"learning_rate", c.learning_rate},
                     {"epochs", c.epochs},
                     {"batch_tasks", c.batch_tasks},
                     {"max_steps", c.max_steps},
                     {"estimator", c.estimator},
                     {"credit",
                      {{"gamma", c.credit.gamma},
                       {"omega", c.credit.omega},
                       {"std_floor", c.credit.std_floor}}},
                     {"lambda_step", c.lambda_step},
                     {"prm_mode", c.prm_mode},
                     {"seed", c.seed},
                     {"max_updates", c.max_updates}};
  if (c.fault_plan)
    j["fault_plan"] = {{"stall_prob", c.fault_plan->stall_prob},
                       {"crash_prob", c.fault_plan->crash_prob},
                       {"rng_seed", c.fault_plan->rng_seed}};
}

double evaluate_policy(Policy& policy, const simdevice::AppRegistry& registry,
                       const std::vector<const simdevice::SuiteTask*>& tasks,
                       int episodes_per_task, bool greedy, double temperature,
                       std::uint64_t seed) {
  if (tasks.empty()) throw EmptySuite("no tasks to evaluate");
  if (episodes_per_task < 1) throw std::invalid_argument("episodes_per_task must be positive");
  int successes = 0;
  int episodes = 0;
  simdevice::SimDevice device(registry);
  for (const auto* st : tasks) {
    for (int ep = 0; ep < episodes_per_task; ++ep) {
      support::Rng rng(
          support::derive_seed(seed, {"eval", st->task.task_id, std::to_string(ep)}));
      auto obs = device.reset(st->task);
      for (;;) {
        const auto choice = greedy ? policy.greedy(obs, st->task)
                                   : policy.act(obs, st->task, temperature, rng);
        const auto res = device.step(choice.action);
        obs = res.obs;
        if (res.terminal) {
          successes += res.outcome_hint.value_or(simdevice::verify_outcome(obs.state, st->task));
          break;
        }
      }
      ++episodes;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(episodes);
}

namespace {

nlohmann::json advantage_record(const std::string& task_id, const std::string& group_tag,
                                const std::string& estimator, const credit::AdvantageSet& adv,
                                const support::Digest& digest) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < adv.episode_adv.size(); ++i)
    rows.push_back({{"episode_adv", adv.episode_adv[i]},
                    {"step_adv", adv.step_adv[i]},
                    {"combined_adv", adv.combined_adv[i]}});
  return {{"task_id", task_id},
          {"group", group_tag},
          {"estimator", estimator},
          {"rollouts", rows},
          {"combined_digest", digest.hex()}};
}

}  // namespace

RunReport train(const TrainConfig& cfg, const TrainDeps& deps, LinearSoftmaxPolicy& policy,
                const std::filesystem::path& run_dir, const nlohmann::json* frozen_config) {
  cfg.validate();
  if (deps.pool == nullptr || deps.registry == nullptr || deps.oracle == nullptr)
    throw std::invalid_argument("train needs a pool, a registry, and a goal oracle");
  if (deps.tasks.empty()) throw EmptySuite("no tasks to train on");

  support::ensure_dir(run_dir);
  support::write_json_file(run_dir / "run.json",
                           frozen_config ? *frozen_config : nlohmann::json(cfg));

  RewardContext rctx;
  rctx.prm_mode = cfg.prm_mode == "rule" ? rewardkit::StepMode::rule : rewardkit::StepMode::remote;
  rctx.lambda_step = cfg.lambda_step;
  rctx.oracle = deps.oracle;
  rctx.judge = deps.judge;

  RunReport report;
  report.estimator = cfg.estimator;
  report.feature_version = policy.params().version;
  report.initial_sr = evaluate_policy(policy, *deps.registry, deps.tasks, 1, true);

  std::vector<nlohmann::json> trajectory_log;
  std::vector<nlohmann::json> advantage_log;

  int update_idx = 0;
  bool budget_spent = false;
  for (int epoch = 0; epoch < cfg.epochs && !budget_spent; ++epoch) {
    std::vector<std::size_t> order(deps.tasks.size());
    std::iota(order.begin(), order.end(), 0);
    support::Rng epoch_rng(support::derive_seed(cfg.seed, {"epoch", std::to_string(epoch)}));
    support::shuffle_vec(order, epoch_rng);

    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_tasks)) {
      if (cfg.max_updates > 0 && update_idx >= cfg.max_updates) {
        budget_spent = true;
        break;
      }
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_tasks));

      UpdateStats stats;
      stats.update = update_idx;
      std::vector<double> grad_sum(policy.params().w.size(), 0.0);
      int rollouts = 0;
      int wins = 0;
      double return_sum = 0.0;

      for (std::size_t b = start; b < stop; ++b) {
        const auto& st = *deps.tasks[order[b]];
        const std::string tag = "u" + std::to_string(update_idx);
        const auto group_seed =
            support::derive_seed(cfg.seed, {"update", std::to_string(update_idx), st.task.task_id});
        auto collected =
            collect_group(st, policy, *deps.pool, cfg, rctx, group_seed, tag + "/" + st.task.task_id);

        stats.rotations += collected.rotations;
        for (const auto& d : collected.discarded) trajectory_log.push_back(nlohmann::json(d));
        if (!collected.usable()) {
          ++stats.groups_dropped;
          continue;
        }
        for (const auto& t : collected.group.trajectories) {
          trajectory_log.push_back(nlohmann::json(t));
          ++rollouts;
          wins += t.outcome;
        }

        const auto adv = cfg.estimator == "gigpo"
                             ? credit::gigpo_advantages(collected.group, cfg.credit)
                             : credit::grpo_advantages(collected.group, cfg.credit);
        const auto digest = advantage_digest(adv);
        advantage_log.push_back(
            advantage_record(st.task.task_id, tag, cfg.estimator, adv, digest));

        auto result = policy_gradient(collected, adv, policy.params(), cfg.temperature);
        if (result.consumed_advantages != digest)
          throw std::logic_error("advantage digest mismatch between estimator and gradient");
        for (std::size_t i = 0; i < grad_sum.size(); ++i) grad_sum[i] += result.grad[i];

        const auto returns = credit::episode_returns(collected.group);
        return_sum = std::accumulate(returns.begin(), returns.end(), return_sum);
        ++stats.groups_kept;
      }

      if (stats.groups_kept > 0)
        policy.set_params(update(policy.params(), grad_sum, cfg.learning_rate));
      stats.train_sr = rollouts > 0 ? static_cast<double>(wins) / rollouts : 0.0;
      stats.mean_return = rollouts > 0 ? return_sum / rollouts : 0.0;
      report.total_rotations += stats.rotations;
      report.updates.push_back(stats);
      ++update_idx;
    }
  }

  report.updates_applied = update_idx;
  report.final_sr = evaluate_policy(policy, *deps.registry, deps.tasks, 1, true);

  support::write_jsonl_atomic(run_dir / "trajectories.jsonl", trajectory_log);
  support::write_jsonl_atomic(run_dir / "advantages.jsonl", advantage_log);
  support::write_json_file(run_dir / "report.json", nlohmann::json(report));
  return report;
}

}  // namespace claw::trainer
