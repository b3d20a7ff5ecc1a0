#include "claw/ctl/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "claw/support/fs.hpp"

namespace claw::ctl {

namespace {

std::string join_errors(const std::vector<std::string>& errs) {
  std::string out = "invalid config:";
  for (const auto& e : errs) out += "\n  - " + e;
  return out;
}

// Tracks which keys of one JSON object were consumed so finish() can flag the
// rest as unknown. A null node (absent section) hands back defaults silently.
class Section {
 public:
  Section(const nlohmann::json* node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(&errors) {}

  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  void read_string(const std::string& key, std::string& out) {
    const nlohmann::json* v = take(key);
    if (!v) return;
    if (!v->is_string()) return type_error(key, "a string");
    out = v->get<std::string>();
  }

  void read_bool(const std::string& key, bool& out) {
    const nlohmann::json* v = take(key);
    if (!v) return;
    if (!v->is_boolean()) return type_error(key, "a boolean");
    out = v->get<bool>();
  }

  void read_int(const std::string& key, int& out) {
    const nlohmann::json* v = take(key);
    if (!v) return;
    if (!v->is_number_integer()) return type_error(key, "an integer");
    out = v->get<int>();
  }

  void read_u64(const std::string& key, std::uint64_t& out) {
    const nlohmann::json* v = take(key);
    if (!v) return;
    if (!v->is_number_integer() || (!v->is_number_unsigned() && v->get<std::int64_t>() < 0))
      return type_error(key, "a non-negative integer");
    out = v->get<std::uint64_t>();
  }

  void read_double(const std::string& key, double& out) {
    const nlohmann::json* v = take(key);
    if (!v) return;
    if (!v->is_number()) return type_error(key, "a number");
    out = v->get<double>();
  }

  Section child(const std::string& key) {
    const nlohmann::json* v = take(key);
    if (v && !v->is_object()) {
      type_error(key, "an object");
      v = nullptr;
    }
    return Section(v, dotted(key), *errors_);
  }

  void finish() {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!seen_.count(it.key())) errors_->push_back("unknown key: " + dotted(it.key()));
  }

 private:
  std::string dotted(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const nlohmann::json* take(const std::string& key) {
    if (!node_ || !node_->contains(key)) return nullptr;
    seen_.insert(key);
    return &node_->at(key);
  }

  void type_error(const std::string& key, const std::string& want) {
    errors_->push_back(dotted(key) + " must be " + want);
  }

  const nlohmann::json* node_;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> seen_;
};

void read_fault_plan(Section& parent, std::optional<simdevice::FaultPlan>& out) {
  if (!parent.has("fault_plan")) return;
  Section s = parent.child("fault_plan");
  simdevice::FaultPlan plan;
  s.read_double("stall_prob", plan.stall_prob);
  s.read_double("crash_prob", plan.crash_prob);
  s.read_u64("rng_seed", plan.rng_seed);
  s.finish();
  out = plan;
}

void check(bool ok, const std::string& message, std::vector<std::string>& errors) {
  if (!ok) errors.push_back(message);
}

void check_fault_plan(const std::optional<simdevice::FaultPlan>& plan, const std::string& path,
                      std::vector<std::string>& errors) {
  if (!plan) return;
  check(plan->stall_prob >= 0.0 && plan->crash_prob >= 0.0 &&
            plan->stall_prob + plan->crash_prob <= 1.0,
        path + ": fault probabilities must be non-negative and sum to at most 1", errors);
}

nlohmann::json fault_plan_json(const simdevice::FaultPlan& p) {
  return {{"stall_prob", p.stall_prob}, {"crash_prob", p.crash_prob}, {"rng_seed", p.rng_seed}};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

RunConfig parse_config(const nlohmann::json& doc) {
  std::vector<std::string> errors;
  if (!doc.is_object()) throw ConfigError({"config root must be an object"});

  RunConfig cfg;
  Section root(&doc, "", errors);
  root.read_string("mode", cfg.mode);
  root.read_string("run_dir", cfg.run_dir);
  root.read_u64("seed", cfg.seed);

  Section suite = root.child("suite");
  suite.read_string("apps_dir", cfg.suite.apps_dir);
  suite.read_string("tasks_file", cfg.suite.tasks_file);
  suite.read_string("tag", cfg.suite.tag);
  suite.finish();

  Section pool = root.child("pool");
  pool.read_int("pool_size", cfg.pool.pool_size);
  pool.read_int("spare_count", cfg.pool.spare_count);
  pool.read_int("health_timeout_ms", cfg.pool.health_timeout_ms);
  pool.read_int("teardown_every_episodes", cfg.pool.teardown_every_episodes);
  pool.read_int("acquire_wait_ms", cfg.pool.acquire_wait_ms);
  pool.read_bool("replenish_spares", cfg.pool.replenish_spares);
  read_fault_plan(pool, cfg.pool.fault_plan);
  pool.finish();

  Section train = root.child("train");
  train.read_int("group_size", cfg.train.group_size);
  train.read_double("temperature", cfg.train.temperature);
  train.read_double("learning_rate", cfg.train.learning_rate);
  train.read_int("epochs", cfg.train.epochs);
  train.read_int("batch_tasks", cfg.train.batch_tasks);
  train.read_int("max_steps", cfg.train.max_steps);
  train.read_string("estimator", cfg.train.estimator);
  train.read_double("lambda_step", cfg.train.lambda_step);
  train.read_string("prm_mode", cfg.train.prm_mode);
  train.read_int("max_updates", cfg.train.max_updates);
  Section credit = train.child("credit");
  credit.read_double("gamma", cfg.train.credit.gamma);
  credit.read_double("omega", cfg.train.credit.omega);
  credit.read_double("std_floor", cfg.train.credit.std_floor);
  credit.finish();
  read_fault_plan(train, cfg.train.fault_plan);
  train.finish();

  Section endpoint = root.child("endpoint");
  endpoint.read_string("base_url", cfg.endpoint.base_url);
  endpoint.read_string("auth_env", cfg.endpoint.auth_env);
  endpoint.read_int("timeout_ms", cfg.endpoint.timeout_ms);
  endpoint.read_int("retries", cfg.endpoint.retries);
  endpoint.read_int("backoff_ms", cfg.endpoint.backoff_ms);
  endpoint.finish();

  Section eval = root.child("eval");
  eval.read_string("dataset", cfg.eval.dataset);
  eval.read_string("profile", cfg.eval.profile);
  eval.read_string("out_dir", cfg.eval.out_dir);
  eval.read_int("shard_count", cfg.eval.shard_count);
  eval.read_int("worker_count", cfg.eval.worker_count);
  eval.read_bool("resume", cfg.eval.resume);
  eval.read_string("official_table", cfg.eval.official_table);
  eval.finish();

  Section bench = root.child("bench");
  bench.read_int("count", cfg.bench.count);
  bench.read_int("width", cfg.bench.width);
  bench.read_int("height", cfg.bench.height);
  bench.read_u64("seed", cfg.bench.seed);
  bench.read_double("polygon_frac", cfg.bench.polygon_frac);
  bench.read_double("refusal_frac", cfg.bench.refusal_frac);
  bench.read_double("action_frac", cfg.bench.action_frac);
  bench.read_string("out", cfg.bench.out);
  bench.finish();

  root.finish();

  check(cfg.mode == "train" || cfg.mode == "eval" || cfg.mode == "doctor" ||
            cfg.mode == "benchgen",
        "mode must be train, eval, doctor, or benchgen", errors);
  check(!cfg.run_dir.empty(), "run_dir must be set", errors);

  check(cfg.pool.pool_size >= 1, "pool.pool_size must be at least 1", errors);
  check(cfg.pool.spare_count >= 0, "pool.spare_count must be non-negative", errors);
  check(cfg.pool.health_timeout_ms > 0, "pool.health_timeout_ms must be positive", errors);
  check(cfg.pool.teardown_every_episodes >= 1,
        "pool.teardown_every_episodes must be at least 1", errors);
  check(cfg.pool.acquire_wait_ms > 0, "pool.acquire_wait_ms must be positive", errors);
  check_fault_plan(cfg.pool.fault_plan, "pool.fault_plan", errors);

  check(cfg.train.group_size >= 2, "train.group_size must be at least 2", errors);
  check(cfg.train.temperature > 0.0, "train.temperature must be positive", errors);
  check(cfg.train.learning_rate >= 0.0, "train.learning_rate must be non-negative", errors);
  check(cfg.train.epochs >= 0, "train.epochs must be non-negative", errors);
  check(cfg.train.batch_tasks >= 1, "train.batch_tasks must be at least 1", errors);
  check(cfg.train.max_steps >= 1, "train.max_steps must be at least 1", errors);
  check(cfg.train.estimator == "grpo" || cfg.train.estimator == "gigpo",
        "train.estimator must be grpo or gigpo", errors);
  check(cfg.train.prm_mode == "rule" || cfg.train.prm_mode == "remote",
        "train.prm_mode must be rule or remote", errors);
  check(cfg.train.lambda_step >= 0.0, "train.lambda_step must be non-negative", errors);
  check(cfg.train.max_updates >= 0, "train.max_updates must be non-negative", errors);
  check(cfg.train.credit.gamma > 0.0 && cfg.train.credit.gamma <= 1.0,
        "train.credit.gamma must be in (0, 1]", errors);
  check(cfg.train.credit.omega >= 0.0, "train.credit.omega must be non-negative", errors);
  check(cfg.train.credit.std_floor > 0.0, "train.credit.std_floor must be positive", errors);
  check_fault_plan(cfg.train.fault_plan, "train.fault_plan", errors);

  check(cfg.endpoint.timeout_ms > 0, "endpoint.timeout_ms must be positive", errors);
  check(cfg.endpoint.retries >= 0, "endpoint.retries must be non-negative", errors);
  check(cfg.endpoint.backoff_ms >= 0, "endpoint.backoff_ms must be non-negative", errors);

  check(cfg.eval.shard_count >= 1, "eval.shard_count must be at least 1", errors);
  check(cfg.eval.worker_count >= 1, "eval.worker_count must be at least 1", errors);

  check(cfg.bench.count >= 0, "bench.count must be non-negative", errors);
  check(cfg.bench.width > 0 && cfg.bench.height > 0,
        "bench.width and bench.height must be positive", errors);
  check(cfg.bench.polygon_frac >= 0.0 && cfg.bench.refusal_frac >= 0.0 &&
            cfg.bench.action_frac >= 0.0 &&
            cfg.bench.polygon_frac + cfg.bench.refusal_frac + cfg.bench.action_frac <=
                1.0 + 1e-12,
        "bench variant fractions must be non-negative and sum to at most 1", errors);
  check(!cfg.bench.out.empty(), "bench.out must be set", errors);

  if (!errors.empty()) throw ConfigError(std::move(errors));

  cfg.train.seed = cfg.seed;
  if (cfg.eval.out_dir.empty())
    cfg.eval.out_dir = (std::filesystem::path(cfg.run_dir) / "eval").string();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec))
    throw ConfigError({"config file not found: " + path.string()});
  return parse_config(support::read_json_file(path));
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json pool_j{{"pool_size", pool.pool_size},
                        {"spare_count", pool.spare_count},
                        {"health_timeout_ms", pool.health_timeout_ms},
                        {"teardown_every_episodes", pool.teardown_every_episodes},
                        {"acquire_wait_ms", pool.acquire_wait_ms},
                        {"replenish_spares", pool.replenish_spares}};
  if (pool.fault_plan) pool_j["fault_plan"] = fault_plan_json(*pool.fault_plan);

  nlohmann::json train_j{{"group_size", train.group_size},
                         {"temperature", train.temperature},
                         {"learning_rate", train.learning_rate},
                         {"epochs", train.epochs},
                         {"batch_tasks", train.batch_tasks},
                         {"max_steps", train.max_steps},
                         {"estimator", train.estimator},
                         {"credit",
                          {{"gamma", train.credit.gamma},
                           {"omega", train.credit.omega},
                           {"std_floor", train.credit.std_floor}}},
                         {"lambda_step", train.lambda_step},
                         {"prm_mode", train.prm_mode},
                         {"max_updates", train.max_updates}};
  if (train.fault_plan) train_j["fault_plan"] = fault_plan_json(*train.fault_plan);

  return nlohmann::json{
      {"mode", mode},
      {"run_dir", run_dir},
      {"seed", seed},
      {"suite",
       {{"apps_dir", suite.apps_dir}, {"tasks_file", suite.tasks_file}, {"tag", suite.tag}}},
      {"pool", pool_j},
      {"train", train_j},
      {"endpoint",
       {{"base_url", endpoint.base_url},
        {"auth_env", endpoint.auth_env},
        {"timeout_ms", endpoint.timeout_ms},
        {"retries", endpoint.retries},
        {"backoff_ms", endpoint.backoff_ms}}},
      {"eval",
       {{"dataset", eval.dataset},
        {"profile", eval.profile},
        {"out_dir", eval.out_dir},
        {"shard_count", eval.shard_count},
        {"worker_count", eval.worker_count},
        {"resume", eval.resume},
        {"official_table", eval.official_table}}},
      {"bench",
       {{"count", bench.count},
        {"width", bench.width},
        {"height", bench.height},
        {"seed", bench.seed},
        {"polygon_frac", bench.polygon_frac},
        {"refusal_frac", bench.refusal_frac},
        {"action_frac", bench.action_frac},
        {"out", bench.out}}}};
}

}  // namespace claw::ctl
