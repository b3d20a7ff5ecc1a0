#include "claw/simdevice/oracle.hpp"

#include <deque>
#include <stdexcept>

#include "claw/support/text.hpp"

namespace claw::simdevice {

namespace {

constexpr std::size_t kStateCap = 200000;  // authoring sanity bound, not a tuning knob

bool goal_holds(const GoalPredicate& goal, const GraphState& st) {
  ScreenState probe;
  probe.screen_id = st.screen_id;
  probe.var_bindings = st.vars;
  return goal.eval(probe);
}

// Forward closure from `start` over the shared interaction alphabet, with
// reverse edges for the distance sweep.
struct Closure {
  std::map<GraphState, int> index;
  std::vector<GraphState> states;
  std::vector<std::vector<int>> preds;
};

Closure explore(const AppGraph& app, const GraphState& start, const std::vector<std::string>& tokens) {
  Closure c;
  std::deque<int> frontier;
  c.index.emplace(start, 0);
  c.states.push_back(start);
  c.preds.emplace_back();
  frontier.push_back(0);
  while (!frontier.empty()) {
    const int si = frontier.front();
    frontier.pop_front();
    const GraphState s = c.states[static_cast<std::size_t>(si)];  // copy: vectors reallocate below
    for (const auto& ia : enumerate_interactions(app.render(s), tokens)) {
      GraphState ns = app.apply(s, ia);
      if (ns == s) continue;
      auto [it, inserted] = c.index.emplace(ns, static_cast<int>(c.states.size()));
      if (inserted) {
        c.states.push_back(std::move(ns));
        c.preds.emplace_back();
        frontier.push_back(it->second);
        if (c.states.size() > kStateCap) throw std::runtime_error("app state space exceeds oracle cap");
      }
      c.preds[static_cast<std::size_t>(it->second)].push_back(si);
    }
  }
  return c;
}

std::map<GraphState, int> goal_distances(const Closure& c, const GoalPredicate& goal) {
  std::vector<int> dist(c.states.size(), -1);
  std::deque<int> q;
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    if (goal_holds(goal, c.states[i])) {
      dist[i] = 0;
      q.push_back(static_cast<int>(i));
    }
  }
  while (!q.empty()) {
    const int si = q.front();
    q.pop_front();
    for (int pi : c.preds[static_cast<std::size_t>(si)]) {
      if (dist[static_cast<std::size_t>(pi)] < 0) {
        dist[static_cast<std::size_t>(pi)] = dist[static_cast<std::size_t>(si)] + 1;
        q.push_back(pi);
      }
    }
  }
  std::map<GraphState, int> out;
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    if (dist[i] >= 0) out.emplace(c.states[i], dist[i]);
  }
  return out;
}

}  // namespace

const GoalOracle::TaskMap& GoalOracle::task_map(const TaskSpec& task) const {
  std::lock_guard lock(mu_);
  auto it = maps_.find(task.task_id);
  if (it != maps_.end()) return it->second;

  const AppGraph& app = registry_->get(task.app_id);
  const auto tokens = support::candidate_tokens(task.instruction);
  Closure c = explore(app, app.initial_state(task.init_seed), tokens);

  TaskMap tm;
  tm.dist = goal_distances(c, task.goal);
  for (const auto& s : c.states) tm.explored.emplace(s, true);
  return maps_.emplace(task.task_id, std::move(tm)).first->second;
}

std::optional<int> GoalOracle::distance(const GraphState& st, const TaskSpec& task) const {
  const TaskMap& tm = task_map(task);
  if (auto it = tm.dist.find(st); it != tm.dist.end()) return it->second;
  if (tm.explored.count(st)) return std::nullopt;  // reachable from reset, but goal is not reachable from it

  // Off-closure state (e.g. hand-built in a test): search fresh from here.
  const AppGraph& app = registry_->get(task.app_id);
  const auto tokens = support::candidate_tokens(task.instruction);
  Closure c = explore(app, st, tokens);
  auto dist = goal_distances(c, task.goal);
  if (auto it = dist.find(st); it != dist.end()) return it->second;
  return std::nullopt;
}

std::optional<int> GoalOracle::distance(const ScreenState& state, const TaskSpec& task) const {
  GraphState st;
  st.screen_id = state.screen_id;
  st.vars = state.var_bindings;
  return distance(st, task);
}

std::optional<int> GoalOracle::reset_distance(const TaskSpec& task) const {
  const AppGraph& app = registry_->get(task.app_id);
  return distance(app.initial_state(task.init_seed), task);
}

}  // namespace claw::simdevice
