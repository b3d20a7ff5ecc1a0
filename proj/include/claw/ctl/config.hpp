#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/ctl/endpoint.hpp"
#include "claw/envpool/pool.hpp"
#include "claw/trainer/train.hpp"

namespace claw::ctl {

// Carries every schema violation found in one pass, not just the first.
struct ConfigError : std::runtime_error {
  std::vector<std::string> errors;
  explicit ConfigError(std::vector<std::string> errs);
};

struct SuiteConfig {
  std::string apps_dir = "data/apps";
  std::string tasks_file = "data/tasks/suite.json";
  std::string tag;  // empty = every task
};

struct EvalConfig {
  std::string dataset;
  std::string profile;
  std::string out_dir;  // empty resolves to <run_dir>/eval
  int shard_count = 4;
  int worker_count = 4;
  bool resume = true;
  std::string official_table;
};

struct BenchConfig {
  int count = 100;
  int width = 1000;
  int height = 1000;
  std::uint64_t seed = 0;
  double polygon_frac = 0.25;
  double refusal_frac = 0.1;
  double action_frac = 0.0;
  std::string out = "bench.jsonl";
};

// One declarative file per run. The resolved form (defaults applied, paths
// filled in) is frozen to run_dir/run.json before any work starts, so a run
// can be replayed from its own directory.
struct RunConfig {
  std::string mode = "train";  // train | eval | doctor | benchgen
  std::string run_dir;
  std::uint64_t seed = 0;
  SuiteConfig suite;
  envpool::PoolConfig pool;
  trainer::TrainConfig train;  // train.seed mirrors the top-level seed
  EndpointSpec endpoint;       // base_url may stay empty until a stage needs it
  EvalConfig eval;
  BenchConfig bench;

  nlohmann::json to_json() const;
};

// Parse + validate. Unknown keys anywhere in the tree are schema violations;
// all violations are reported together via ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace claw::ctl
