#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "claw/simdevice/oracle.hpp"
#include "claw/simdevice/suite.hpp"
#include "claw/support/fs.hpp"
#include "claw/support/text.hpp"
#include "claw/trainer/train.hpp"

using namespace claw;
using trainer::Candidate;
using trainer::CollectedGroup;
using trainer::LinearSoftmaxPolicy;
using trainer::PolicyParams;
using trainer::TrainConfig;

namespace {

const std::string kAppsDir = std::string(CLAW_SOURCE_DIR) + "/data/apps";
const std::string kSuitePath = std::string(CLAW_SOURCE_DIR) + "/data/tasks/suite.json";

const simdevice::AppRegistry& registry() {
  static simdevice::AppRegistry reg(kAppsDir);
  return reg;
}

const simdevice::TaskSuite& suite() {
  static simdevice::TaskSuite s = simdevice::TaskSuite::load_file(kSuitePath);
  return s;
}

const simdevice::GoalOracle& goal_oracle() {
  static simdevice::GoalOracle o(registry());
  return o;
}

std::vector<const simdevice::SuiteTask*> task_ptrs(const std::vector<std::string>& ids) {
  std::vector<const simdevice::SuiteTask*> out;
  for (const auto& id : ids) out.push_back(&suite().find(id));
  return out;
}

// ---- synthetic decision points for the finite-difference oracle ----

const std::vector<std::string> kWords = {"open",  "tap",   "wifi", "report", "send",
                                         "tram",  "42",    "star", "export", "hello",
                                         "notes", "files", "bob",  "sunset", "brightness"};

simdevice::ScreenState random_screen(support::Rng& rng) {
  simdevice::ScreenState s;
  s.app_id = "synthetic";
  s.screen_id = "scr_" + std::to_string(rng() % 64);
  s.width = 1080;
  s.height = 2400;
  const std::size_t n = 1 + support::pick_index(rng, 5);
  int y = 100;
  for (std::size_t i = 0; i < n; ++i) {
    simdevice::Widget w;
    w.widget_id = "w" + std::to_string(i);
    const auto kinds = {simdevice::WidgetKind::button, simdevice::WidgetKind::text_field,
                        simdevice::WidgetKind::list_item, simdevice::WidgetKind::toggle,
                        simdevice::WidgetKind::label};
    w.kind = *(kinds.begin() + support::pick_index(rng, kinds.size()));
    w.bbox = {40, y, 1040, y + 120};
    y += 160;
    w.text = kWords[support::pick_index(rng, kWords.size())];
    w.enabled = support::uniform01(rng) < 0.85;
    s.widgets.push_back(std::move(w));
  }
  return s;
}

simdevice::TaskSpec random_fd_task(support::Rng& rng) {
  simdevice::TaskSpec task;
  task.task_id = "fd";
  task.app_id = "synthetic";
  std::string instruction;
  const std::size_t n = 3 + support::pick_index(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) instruction += ' ';
    instruction += kWords[support::pick_index(rng, kWords.size())];
  }
  if (support::uniform01(rng) < 0.5)
    instruction += " \"" + kWords[support::pick_index(rng, kWords.size())] + "\"";
  task.instruction = instruction;
  return task;
}

PolicyParams random_params(support::Rng& rng, double scale) {
  PolicyParams p = PolicyParams::zeros();
  for (auto& x : p.w) x = (support::uniform01(rng) * 2.0 - 1.0) * scale;
  return p;
}

// A rollout group over synthetic screens: actions are drawn from the real
// candidate enumeration so the gradient's re-enumeration always finds them.
struct FdInstance {
  CollectedGroup collected;
  credit::AdvantageSet adv;
};

FdInstance random_fd_instance(support::Rng& rng) {
  FdInstance inst;
  inst.collected.task = random_fd_task(rng);
  const std::size_t groups = 2 + support::pick_index(rng, 2);
  for (std::size_t i = 0; i < groups; ++i) {
    Trajectory traj;
    traj.task_id = "fd";
    traj.rollout_id = "fd/" + std::to_string(i);
    std::vector<simdevice::Observation> obs_row;
    std::vector<double> adv_row;
    const std::size_t steps = 1 + support::pick_index(rng, 3);
    for (std::size_t t = 0; t < steps; ++t) {
      simdevice::Observation obs{random_screen(rng), static_cast<int>(t)};
      const auto cands = trainer::enumerate_candidates(obs.state, inst.collected.task);
      StepRecord step;
      step.action = cands[support::pick_index(rng, cands.size())].action;
      traj.steps.push_back(std::move(step));
      obs_row.push_back(std::move(obs));
      adv_row.push_back(support::uniform01(rng) < 0.1
                            ? 0.0
                            : (support::uniform01(rng) * 4.0 - 2.0));
    }
    inst.collected.group.trajectories.push_back(std::move(traj));
    inst.collected.observations.push_back(std::move(obs_row));
    inst.adv.episode_adv.push_back(adv_row.empty() ? 0.0 : adv_row[0]);
    inst.adv.step_adv.push_back(adv_row);
    inst.adv.combined_adv.push_back(std::move(adv_row));
  }
  return inst;
}

// The objective the gradient claims to ascend: Σ_{i,t} adv[i][t] · log π(a|s).
double surrogate(const PolicyParams& params, const FdInstance& inst, double temperature) {
  double total = 0.0;
  const auto& trajs = inst.collected.group.trajectories;
  for (std::size_t i = 0; i < trajs.size(); ++i)
    for (std::size_t t = 0; t < trajs[i].steps.size(); ++t)
      total += inst.adv.combined_adv[i][t] *
               trainer::log_prob_of(params, inst.collected.observations[i][t],
                                    inst.collected.task, trajs[i].steps[t].action, temperature);
  return total;
}

double norm(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

// Greedy distance descent through the app graph; the learnability ceiling any
// policy is measured against.
class OracleGreedyPolicy final : public trainer::Policy {
 public:
  Choice act(const simdevice::Observation& obs, const simdevice::TaskSpec& task, double,
             support::Rng&) override {
    return greedy(obs, task);
  }

  Choice greedy(const simdevice::Observation& obs, const simdevice::TaskSpec& task) override {
    Choice choice;
    choice.action = simdevice::Action::done();
    if (task.goal.eval(obs.state)) return choice;
    const auto& app = registry().get(task.app_id);
    simdevice::GraphState gs{obs.state.screen_id, obs.state.var_bindings};
    const auto tokens = support::candidate_tokens(task.instruction);
    std::optional<int> best;
    for (const auto& ia : simdevice::enumerate_interactions(obs.state, tokens)) {
      const auto d = goal_oracle().distance(app.apply(gs, ia), task);
      if (d && (!best || *d < *best)) {
        best = *d;
        choice.action = simdevice::to_action(ia, obs.state);
      }
    }
    return choice;
  }
};

envpool::PoolConfig small_pool_config(int size, int spares) {
  envpool::PoolConfig cfg;
  cfg.pool_size = size;
  cfg.spare_count = spares;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) { return support::read_file(p); }

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("trainer_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("candidate enumeration lists taps then typing then back then done") {
  const auto& st = suite().find("settings.wifi_on");
  simdevice::SimDevice device(registry());
  const auto obs = device.reset(st.task);

  const auto cands = trainer::enumerate_candidates(obs.state, st.task);
  REQUIRE(cands.size() == 5);  // 3 tab buttons + back + done; the title label is not tappable
  for (int i = 0; i < 3; ++i) {
    CHECK(cands[static_cast<std::size_t>(i)].template_id == 0);
    CHECK(cands[static_cast<std::size_t>(i)].has_widget);
    CHECK(cands[static_cast<std::size_t>(i)].kind == simdevice::WidgetKind::button);
    CHECK(cands[static_cast<std::size_t>(i)].action.type == simdevice::Action::Type::tap);
  }
  CHECK(cands[3].template_id == 2);
  CHECK_FALSE(cands[3].has_widget);
  CHECK(cands[3].action.type == simdevice::Action::Type::back);
  CHECK(cands[4].template_id == 3);
  CHECK(cands[4].action.type == simdevice::Action::Type::done);

  const auto again = trainer::enumerate_candidates(obs.state, st.task);
  REQUIRE(again.size() == cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) CHECK(again[i].action == cands[i].action);
}

TEST_CASE("text fields expand into one typing candidate per instruction token") {
  const auto& st = suite().find("messenger.bob_hello");
  simdevice::SimDevice device(registry());
  auto obs = device.reset(st.task);
  obs = device.step(simdevice::bind_reference_step(st.reference_solution[0], obs.state)).obs;
  REQUIRE(obs.state.screen_id == "chat_bob");

  const auto tokens = support::candidate_tokens(st.task.instruction);
  const auto cands = trainer::enumerate_candidates(obs.state, st.task);
  // one type per token + back + done; the send button stays disabled until a draft exists
  CHECK(cands.size() == tokens.size() + 2);

  // typing disables the field and enables send: tap send + back + done remain
  const auto drafted =
      device.step(simdevice::Action::type_text("msg_field", "hello there")).obs;
  const auto after = trainer::enumerate_candidates(drafted.state, st.task);
  REQUIRE(after.size() == 3);
  CHECK(after[0].template_id == 0);
  CHECK(after[0].widget_text == "Send");

  const auto ctx = trainer::feature_context(obs.state, st.task);
  int quoted_payloads = 0;
  for (const auto& c : cands) {
    if (c.template_id != 1) continue;
    CHECK(c.action.widget_id == "msg_field");
    const auto f = trainer::features(ctx, c);
    REQUIRE(f.size() == static_cast<std::size_t>(trainer::feature_dim()));
    if (c.payload == "hello there") {
      ++quoted_payloads;
      CHECK(f[static_cast<std::size_t>(trainer::feature_dim()) - 1] == 1.0);  // exact quoted span
    } else {
      CHECK(f[static_cast<std::size_t>(trainer::feature_dim()) - 1] == 0.0);
    }
    CHECK(f[static_cast<std::size_t>(trainer::feature_dim()) - 2] ==
          (support::has_digit(c.payload) ? 1.0 : 0.0));
  }
  CHECK(quoted_payloads == 1);
}

TEST_CASE("softmax probabilities normalize and zero weights spread mass uniformly") {
  support::Rng rng(7);
  for (int round = 0; round < 20; ++round) {
    const auto task = random_fd_task(rng);
    const auto state = random_screen(rng);
    const auto cands = trainer::enumerate_candidates(state, task);
    const auto params = random_params(rng, 0.7);
    const auto probs = trainer::candidate_probs(params, state, task, cands, 0.7);
    REQUIRE(probs.size() == cands.size());
    double sum = 0.0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }

  const auto& st = suite().find("settings.wifi_on");
  simdevice::SimDevice device(registry());
  const auto obs = device.reset(st.task);
  LinearSoftmaxPolicy uniform;  // zero weights
  support::Rng act_rng(3);
  const auto choice = uniform.act(obs, st.task, 0.7, act_rng);
  CHECK(choice.candidate_count == 5);
  CHECK(choice.logprob == doctest::Approx(-std::log(5.0)).epsilon(1e-12));

  const auto cands = trainer::enumerate_candidates(obs.state, st.task);
  CHECK_THROWS_AS(trainer::candidate_probs(uniform.params(), obs.state, st.task, cands, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(trainer::candidate_probs(uniform.params(), obs.state, st.task, {}, 0.7),
                  std::invalid_argument);
}

TEST_CASE("sampling replays under a fixed seed and collapses to greedy as temperature drops") {
  const auto& st = suite().find("settings.display_combo");
  simdevice::SimDevice device(registry());
  const auto obs = device.reset(st.task);
  LinearSoftmaxPolicy policy(PolicyParams::random_init(11, 0.5));

  std::vector<simdevice::Action> first, second;
  support::Rng a(42), b(42);
  for (int i = 0; i < 24; ++i) {
    first.push_back(policy.act(obs, st.task, 0.9, a).action);
    second.push_back(policy.act(obs, st.task, 0.9, b).action);
  }
  CHECK(first == second);

  const auto greedy = policy.greedy(obs, st.task);
  support::Rng c(5);
  for (int i = 0; i < 16; ++i) {
    const auto cold = policy.act(obs, st.task, 1e-4, c);
    CHECK(cold.action == greedy.action);
  }
  CHECK(greedy.logprob == 0.0);

  const auto warm = policy.act(obs, st.task, 0.9, a);
  CHECK(trainer::log_prob_of(policy.params(), obs, st.task, warm.action, 0.9) ==
        doctest::Approx(warm.logprob).epsilon(1e-12));
  CHECK_THROWS_AS(
      trainer::log_prob_of(policy.params(), obs, st.task, simdevice::Action::tap(9999, 9999), 0.9),
      std::invalid_argument);
}

TEST_CASE("policy gradient matches central finite differences of the surrogate") {
  support::Rng rng(20240817);
  const double h = 1e-5;
  int nonzero = 0;
  for (int instance = 0; instance < 120; ++instance) {
    const auto inst = random_fd_instance(rng);
    const double temperature = 0.5 + support::uniform01(rng);
    auto params = random_params(rng, 0.5);

    const auto result = trainer::policy_gradient(inst.collected, inst.adv, params, temperature);
    std::vector<double> fd(params.w.size(), 0.0);
    for (std::size_t k = 0; k < params.w.size(); ++k) {
      const double keep = params.w[k];
      params.w[k] = keep + h;
      const double up = surrogate(params, inst, temperature);
      params.w[k] = keep - h;
      const double down = surrogate(params, inst, temperature);
      params.w[k] = keep;
      fd[k] = (up - down) / (2.0 * h);
    }

    std::vector<double> diff(fd.size());
    for (std::size_t k = 0; k < fd.size(); ++k) diff[k] = fd[k] - result.grad[k];
    const double denominator = norm(fd) + norm(result.grad);
    if (denominator == 0.0) continue;  // every advantage in the instance drew 0
    ++nonzero;
    CHECK(norm(diff) / denominator <= 1e-4);
  }
  CHECK(nonzero >= 100);
}

TEST_CASE("zero advantages yield a zero gradient and the digest tracks content") {
  support::Rng rng(5);
  auto inst = random_fd_instance(rng);
  for (auto& row : inst.adv.combined_adv) std::fill(row.begin(), row.end(), 0.0);
  const auto params = random_params(rng, 0.3);
  const auto result = trainer::policy_gradient(inst.collected, inst.adv, params, 0.7);
  CHECK(norm(result.grad) == 0.0);
  CHECK(result.consumed_advantages == trainer::advantage_digest(inst.adv));

  auto other = inst.adv;
  other.combined_adv[0][0] = 1.0;
  CHECK(trainer::advantage_digest(other) != trainer::advantage_digest(inst.adv));
  const auto reordered = trainer::advantage_digest(other);
  other.combined_adv[0][0] = 1.0 + 1e-16;  // same double after rounding
  CHECK(trainer::advantage_digest(other) == reordered);
}

TEST_CASE("gradient and update validate shapes and finiteness") {
  support::Rng rng(9);
  const auto inst = random_fd_instance(rng);
  const auto params = random_params(rng, 0.3);

  auto missing_row = inst.adv;
  missing_row.combined_adv.pop_back();
  CHECK_THROWS_AS(trainer::policy_gradient(inst.collected, missing_row, params, 0.7),
                  trainer::ShapeMismatch);

  auto ragged = inst.adv;
  ragged.combined_adv[0].push_back(0.5);
  CHECK_THROWS_AS(trainer::policy_gradient(inst.collected, ragged, params, 0.7),
                  trainer::ShapeMismatch);

  std::vector<double> grad(params.w.size(), 0.25);
  const auto moved = trainer::update(params, grad, 0.3);
  for (std::size_t i = 0; i < grad.size(); ++i)
    CHECK(moved.w[i] == doctest::Approx(params.w[i] + 0.3 * 0.25).epsilon(1e-15));
  const auto frozen = trainer::update(params, grad, 0.0);
  CHECK(frozen.w == params.w);

  CHECK_THROWS_AS(trainer::update(params, std::vector<double>(3, 0.0), 0.1),
                  trainer::ShapeMismatch);
  grad[7] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(trainer::update(params, grad, 0.1), trainer::NonFiniteGradient);
}

TEST_CASE("collect_group replays exactly and fault rotations keep the group whole") {
  envpool::EnvPool pool(small_pool_config(8, 4), registry());
  pool.init();
  const auto& st = suite().find("settings.wifi_bt");

  TrainConfig cfg;
  cfg.group_size = 8;
  cfg.max_steps = 12;
  cfg.fault_plan = simdevice::FaultPlan{0.08, 0.04, 91};

  trainer::RewardContext rctx;
  rctx.oracle = &goal_oracle();

  LinearSoftmaxPolicy policy(PolicyParams::random_init(17, 0.2));
  const auto first = trainer::collect_group(st, policy, pool, cfg, rctx, 710, "g");
  const auto second = trainer::collect_group(st, policy, pool, cfg, rctx, 710, "g");

  CHECK(first.group.trajectories.size() == 8);
  CHECK(first.dropped == 0);
  CHECK(first.rotations > 0);
  CHECK(first.discarded.size() == static_cast<std::size_t>(first.rotations));
  for (const auto& d : first.discarded) {
    CHECK(d.termination == Termination::rotated_restart);
    CHECK(d.task_id == st.task.task_id);
  }

  REQUIRE(second.group.trajectories.size() == first.group.trajectories.size());
  CHECK(second.rotations == first.rotations);
  for (std::size_t i = 0; i < first.group.trajectories.size(); ++i) {
    const auto& a = first.group.trajectories[i];
    const auto& b = second.group.trajectories[i];
    CHECK(a.rollout_id == b.rollout_id);
    CHECK(a.outcome == b.outcome);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t t = 0; t < a.steps.size(); ++t) {
      CHECK(a.steps[t].action == b.steps[t].action);
      CHECK(a.steps[t].reward == b.steps[t].reward);
      CHECK(a.steps[t].anchor == b.steps[t].anchor);
    }
  }

  // rewards are Eq-style compositions of the logged signals
  for (std::size_t i = 0; i < first.signals.size(); ++i) {
    const auto rewards = rewardkit::compose(first.signals[i]);
    REQUIRE(rewards.size() == first.group.trajectories[i].steps.size());
    for (std::size_t t = 0; t < rewards.size(); ++t)
      CHECK(rewards[t] == first.group.trajectories[i].steps[t].reward);
  }
  pool.teardown_all();
}

TEST_CASE("evaluate_policy scores oracle play at one and uniform play near zero") {
  std::vector<const simdevice::SuiteTask*> all;
  for (const auto& st : suite().tasks()) all.push_back(&st);
  OracleGreedyPolicy oracle_policy;
  CHECK(trainer::evaluate_policy(oracle_policy, registry(), all, 1, true) == 1.0);

  std::vector<const simdevice::SuiteTask*> hard;
  for (const auto& st : suite().tasks())
    if (st.task.difficulty.value_or(0) >= 4) hard.push_back(&st);
  REQUIRE(hard.size() >= 4);
  LinearSoftmaxPolicy uniform;
  const double sr = trainer::evaluate_policy(uniform, registry(), hard, 2, false, 0.7, 12);
  CHECK(sr <= 0.2);

  CHECK_THROWS_AS(trainer::evaluate_policy(uniform, registry(), {}, 1, true),
                  trainer::EmptySuite);
}

TEST_CASE("train writes a byte-identical run directory under a fixed seed") {
  envpool::EnvPool pool(small_pool_config(8, 4), registry());
  pool.init();

  TrainConfig cfg;
  cfg.group_size = 4;
  cfg.batch_tasks = 2;
  cfg.epochs = 1;
  cfg.max_steps = 10;
  cfg.learning_rate = 0.1;
  cfg.seed = 2024;
  cfg.fault_plan = simdevice::FaultPlan{0.05, 0.02, 33};

  trainer::TrainDeps deps;
  deps.pool = &pool;
  deps.registry = &registry();
  deps.tasks = task_ptrs({"settings.wifi_on", "settings.dark_mode", "settings.mute_on",
                          "settings.bluetooth_on"});
  deps.oracle = &goal_oracle();

  const auto dir_a = fresh_dir("run_a");
  const auto dir_b = fresh_dir("run_b");
  LinearSoftmaxPolicy pa(PolicyParams::random_init(1, 0.1));
  LinearSoftmaxPolicy pb(PolicyParams::random_init(1, 0.1));
  const auto ra = trainer::train(cfg, deps, pa, dir_a);
  const auto rb = trainer::train(cfg, deps, pb, dir_b);

  CHECK(ra.updates_applied == 2);  // 4 tasks / 2 per batch, one epoch
  CHECK(ra.estimator == "gigpo");
  CHECK(ra.feature_version == trainer::kFeatureVersion);
  CHECK(pa.params().w == pb.params().w);
  for (const auto* name : {"run.json", "trajectories.jsonl", "advantages.jsonl", "report.json"}) {
    CAPTURE(name);
    REQUIRE(std::filesystem::exists(dir_a / name));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }

  const auto run_json = support::read_json_file(dir_a / "run.json");
  CHECK(run_json.at("estimator") == "gigpo");
  CHECK(run_json.at("fault_plan").at("rng_seed") == 33);
  const auto rows = support::read_jsonl(dir_a / "advantages.jsonl");
  REQUIRE(!rows.empty());
  for (const auto& row : rows) CHECK(row.at("estimator") == "gigpo");
  pool.teardown_all();
}

TEST_CASE("estimator choice changes advantages but not the collected trajectories") {
  envpool::EnvPool pool(small_pool_config(6, 2), registry());
  pool.init();

  TrainConfig cfg;
  cfg.group_size = 4;
  cfg.batch_tasks = 1;
  cfg.epochs = 1;
  cfg.max_updates = 1;
  cfg.max_steps = 10;
  cfg.seed = 7;

  trainer::TrainDeps deps;
  deps.pool = &pool;
  deps.registry = &registry();
  deps.tasks = task_ptrs({"settings.wifi_on"});
  deps.oracle = &goal_oracle();

  const auto dir_gigpo = fresh_dir("gigpo");
  const auto dir_grpo = fresh_dir("grpo");
  LinearSoftmaxPolicy pg(PolicyParams::random_init(2, 0.1));
  cfg.estimator = "gigpo";
  trainer::train(cfg, deps, pg, dir_gigpo);
  LinearSoftmaxPolicy pr(PolicyParams::random_init(2, 0.1));
  cfg.estimator = "grpo";
  trainer::train(cfg, deps, pr, dir_grpo);

  CHECK(slurp(dir_gigpo / "trajectories.jsonl") == slurp(dir_grpo / "trajectories.jsonl"));
  CHECK(slurp(dir_gigpo / "advantages.jsonl") != slurp(dir_grpo / "advantages.jsonl"));
  pool.teardown_all();
}

TEST_CASE("zero epochs reduce train to the two evaluations") {
  envpool::EnvPool pool(small_pool_config(4, 0), registry());
  pool.init();
  TrainConfig cfg;
  cfg.epochs = 0;
  trainer::TrainDeps deps;
  deps.pool = &pool;
  deps.registry = &registry();
  deps.tasks = task_ptrs({"settings.wifi_on"});
  deps.oracle = &goal_oracle();

  const auto dir = fresh_dir("noop");
  LinearSoftmaxPolicy policy(PolicyParams::random_init(3, 0.1));
  const auto report = trainer::train(cfg, deps, policy, dir);
  CHECK(report.updates_applied == 0);
  CHECK(report.updates.empty());
  CHECK(report.initial_sr == report.final_sr);
  CHECK(support::read_jsonl(dir / "trajectories.jsonl").empty());
  pool.teardown_all();
}

TEST_CASE("config validation rejects out-of-range settings") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto broken = cfg;
  broken.group_size = 1;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = cfg;
  broken.temperature = 0.0;
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = cfg;
  broken.estimator = "ppo";
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = cfg;
  broken.prm_mode = "none";
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
  broken = cfg;
  broken.fault_plan = simdevice::FaultPlan{0.9, 0.3, 1};
  CHECK_THROWS_AS(broken.validate(), std::invalid_argument);

  envpool::EnvPool pool(small_pool_config(2, 0), registry());
  trainer::TrainDeps no_pool;
  no_pool.registry = &registry();
  no_pool.oracle = &goal_oracle();
  no_pool.tasks = task_ptrs({"settings.wifi_on"});
  LinearSoftmaxPolicy policy;
  CHECK_THROWS_AS(trainer::train(cfg, no_pool, policy, fresh_dir("bad")), std::invalid_argument);
}

TEST_CASE("training drives an easy task to perfect greedy play") {
  envpool::EnvPool pool(small_pool_config(8, 2), registry());
  pool.init();

  TrainConfig cfg;
  cfg.group_size = 8;
  cfg.batch_tasks = 1;
  cfg.epochs = 80;
  cfg.max_updates = 80;
  cfg.max_steps = 8;
  cfg.learning_rate = 0.05;
  cfg.seed = 5;

  trainer::TrainDeps deps;
  deps.pool = &pool;
  deps.registry = &registry();
  deps.tasks = task_ptrs({"settings.dark_mode"});
  deps.oracle = &goal_oracle();

  const auto dir = fresh_dir("learn");
  LinearSoftmaxPolicy policy;  // uniform start
  const auto report = trainer::train(cfg, deps, policy, dir);
  CAPTURE(report.initial_sr);
  CAPTURE(report.final_sr);
  CHECK(report.initial_sr < 1.0);
  CHECK(report.final_sr == 1.0);
  pool.teardown_all();
}
