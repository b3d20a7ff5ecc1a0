#include "claw/simdevice/suite.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "claw/support/fs.hpp"

namespace claw::simdevice {

namespace {

ReferenceStep parse_step(const nlohmann::json& j) {
  ReferenceStep s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tap") {
    s.kind = ReferenceStep::Kind::tap;
    s.widget = j.at("widget").get<std::string>();
  } else if (kind == "type_text") {
    s.kind = ReferenceStep::Kind::type_text;
    s.widget = j.at("widget").get<std::string>();
    s.text = j.at("text").get<std::string>();
  } else if (kind == "swipe") {
    s.kind = ReferenceStep::Kind::swipe;
    s.direction = j.at("direction").get<std::string>();
  } else if (kind == "back") {
    s.kind = ReferenceStep::Kind::back;
  } else if (kind == "done") {
    s.kind = ReferenceStep::Kind::done;
  } else {
    throw std::runtime_error("unknown reference step kind: " + kind);
  }
  return s;
}

}  // namespace

bool SuiteTask::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

TaskSuite TaskSuite::load_file(const std::string& path) {
  const auto j = support::read_json_file(path);
  TaskSuite suite;
  for (const auto& tj : j.at("tasks")) {
    SuiteTask st;
    st.task = tj.get<TaskSpec>();
    if (tj.contains("tags")) st.tags = tj.at("tags").get<std::vector<std::string>>();
    for (const auto& sj : tj.at("reference_solution")) st.reference_solution.push_back(parse_step(sj));
    suite.tasks_.push_back(std::move(st));
  }
  if (suite.tasks_.empty()) throw std::runtime_error("task suite is empty: " + path);
  return suite;
}

std::vector<const SuiteTask*> TaskSuite::with_tag(const std::string& tag) const {
  std::vector<const SuiteTask*> out;
  for (const auto& t : tasks_) {
    if (t.has_tag(tag)) out.push_back(&t);
  }
  return out;
}

const SuiteTask& TaskSuite::find(const std::string& task_id) const {
  for (const auto& t : tasks_) {
    if (t.task.task_id == task_id) return t;
  }
  throw std::runtime_error("no such task: " + task_id);
}

Action bind_reference_step(const ReferenceStep& step, const ScreenState& screen) {
  switch (step.kind) {
    case ReferenceStep::Kind::tap: {
      const Widget* w = screen.find_widget(step.widget);
      if (w == nullptr)
        throw std::runtime_error("reference step taps missing widget " + step.widget + " on " +
                                 screen.screen_id);
      return Action::tap(w->bbox.center());
    }
    case ReferenceStep::Kind::type_text:
      return Action::type_text(step.widget, step.text);
    case ReferenceStep::Kind::swipe:
      return to_action(Interaction::swipe(step.direction), screen);
    case ReferenceStep::Kind::back:
      return Action::back();
    case ReferenceStep::Kind::done:
      return Action::done();
  }
  return Action::done();
}

int replay_reference(SimDevice& device, const SuiteTask& st) {
  device.reset(st.task);
  int outcome = verify_outcome(device.screen(), st.task);
  for (const auto& step : st.reference_solution) {
    auto r = device.step(bind_reference_step(step, device.screen()));
    if (r.outcome_hint) outcome = *r.outcome_hint;
    if (r.terminal) break;
  }
  if (!device.terminal()) outcome = verify_outcome(device.screen(), st.task);
  return outcome;
}

}  // namespace claw::simdevice
