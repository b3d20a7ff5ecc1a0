#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/trainer/gradient.hpp"
#include "claw/trainer/rollout.hpp"

namespace claw::trainer {

struct EmptySuite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UpdateStats {
  int update = 0;
  double train_sr = 0.0;     // successful rollouts / kept rollouts in the batch
  double mean_return = 0.0;  // mean composed episode return
  int rotations = 0;
  int groups_kept = 0;
  int groups_dropped = 0;
};

struct RunReport {
  std::string estimator;
  std::string feature_version;
  double initial_sr = 0.0;
  double final_sr = 0.0;
  int updates_applied = 0;
  int total_rotations = 0;
  std::vector<UpdateStats> updates;
};

void to_json(nlohmann::json& j, const UpdateStats& u);
void to_json(nlohmann::json& j, const RunReport& r);
void to_json(nlohmann::json& j, const TrainConfig& c);

struct TrainDeps {
  envpool::EnvPool* pool = nullptr;
  const simdevice::AppRegistry* registry = nullptr;
  std::vector<const simdevice::SuiteTask*> tasks;
  const simdevice::GoalOracle* oracle = nullptr;
  rewardkit::JudgeClient* judge = nullptr;
};

// Greedy (or seeded-sampling) success rate over the given tasks on fresh
// fault-free devices.
double evaluate_policy(Policy& policy, const simdevice::AppRegistry& registry,
                       const std::vector<const simdevice::SuiteTask*>& tasks,
                       int episodes_per_task, bool greedy, double temperature = 0.7,
                       std::uint64_t seed = 0);

// Epochs × batches of group rollouts, advantage estimation, and ascent
// updates. Writes run.json (the frozen config; callers with a wider resolved
// config may pass it to freeze instead), trajectories.jsonl (kept and
// discarded rollouts), advantages.jsonl (per-group estimates and digests),
// and report.json into run_dir. Given (config, deps, seed) the outputs are
// byte-identical across runs, faults included.
RunReport train(const TrainConfig& cfg, const TrainDeps& deps, LinearSoftmaxPolicy& policy,
                const std::filesystem::path& run_dir,
                const nlohmann::json* frozen_config = nullptr);

}  // namespace claw::trainer
