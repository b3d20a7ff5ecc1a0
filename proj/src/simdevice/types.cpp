#include "claw/simdevice/types.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace claw::simdevice {

const char* to_string(WidgetKind kind) {
  switch (kind) {
    case WidgetKind::button: return "button";
    case WidgetKind::text_field: return "text_field";
    case WidgetKind::list_item: return "list_item";
    case WidgetKind::toggle: return "toggle";
    case WidgetKind::label: return "label";
  }
  return "button";
}

WidgetKind widget_kind_from_string(const std::string& s) {
  if (s == "button") return WidgetKind::button;
  if (s == "text_field") return WidgetKind::text_field;
  if (s == "list_item") return WidgetKind::list_item;
  if (s == "toggle") return WidgetKind::toggle;
  if (s == "label") return WidgetKind::label;
  throw std::runtime_error("unknown widget kind: " + s);
}

const char* to_string(Action::Type type) {
  switch (type) {
    case Action::Type::tap: return "tap";
    case Action::Type::swipe: return "swipe";
    case Action::Type::type_text: return "type_text";
    case Action::Type::back: return "back";
    case Action::Type::done: return "done";
  }
  return "back";
}

const Widget* ScreenState::find_widget(const std::string& widget_id) const {
  for (const auto& w : widgets) {
    if (w.widget_id == widget_id) return &w;
  }
  return nullptr;
}

const Widget* ScreenState::widget_at(Point p) const {
  for (const auto& w : widgets) {
    if (w.enabled && w.bbox.contains(p)) return &w;
  }
  return nullptr;
}

bool GoalPredicate::eval(const ScreenState& state) const {
  switch (kind) {
    case Kind::var_eq: {
      auto it = state.var_bindings.find(var);
      return it != state.var_bindings.end() && it->second == value;
    }
    case Kind::screen_is:
      return state.screen_id == screen;
    case Kind::all_of:
      return std::all_of(children.begin(), children.end(),
                         [&](const GoalPredicate& c) { return c.eval(state); });
    case Kind::any_of:
      return std::any_of(children.begin(), children.end(),
                         [&](const GoalPredicate& c) { return c.eval(state); });
    case Kind::negate:
      return !children.empty() && !children.front().eval(state);
  }
  return false;
}

GoalPredicate GoalPredicate::var_eq(std::string var, std::string value) {
  GoalPredicate g;
  g.kind = Kind::var_eq;
  g.var = std::move(var);
  g.value = std::move(value);
  return g;
}

GoalPredicate GoalPredicate::screen_is(std::string screen) {
  GoalPredicate g;
  g.kind = Kind::screen_is;
  g.screen = std::move(screen);
  return g;
}

GoalPredicate GoalPredicate::all_of(std::vector<GoalPredicate> children) {
  GoalPredicate g;
  g.kind = Kind::all_of;
  g.children = std::move(children);
  return g;
}

std::string canonical_serialize(const ScreenState& state) {
  std::vector<const Widget*> ws;
  ws.reserve(state.widgets.size());
  for (const auto& w : state.widgets) ws.push_back(&w);
  std::sort(ws.begin(), ws.end(),
            [](const Widget* a, const Widget* b) { return a->widget_id < b->widget_id; });

  std::ostringstream out;
  out << "app=" << state.app_id << "\x1e";
  out << "screen=" << state.screen_id << "\x1e";
  for (const Widget* w : ws) {
    out << "w:" << w->widget_id << '\x1f' << to_string(w->kind) << '\x1f' << w->bbox.x1 << ','
        << w->bbox.y1 << ',' << w->bbox.x2 << ',' << w->bbox.y2 << '\x1f' << w->text << '\x1f'
        << (w->enabled ? 1 : 0) << "\x1e";
  }
  for (const auto& [k, v] : state.var_bindings) {  // std::map iterates key-sorted
    out << "v:" << k << '\x1f' << v << "\x1e";
  }
  return std::move(out).str();
}

AnchorKey anchor_hash(const ScreenState& state) { return support::sha256(canonical_serialize(state)); }

int verify_outcome(const ScreenState& state, const TaskSpec& task) {
  return task.goal.eval(state) ? 1 : 0;
}

void to_json(nlohmann::json& j, const Action& a) {
  j = nlohmann::json{{"type", to_string(a.type)}};
  switch (a.type) {
    case Action::Type::tap:
      j["x"] = a.point.x;
      j["y"] = a.point.y;
      break;
    case Action::Type::swipe:
      j["x"] = a.point.x;
      j["y"] = a.point.y;
      j["to_x"] = a.to.x;
      j["to_y"] = a.to.y;
      break;
    case Action::Type::type_text:
      j["widget_id"] = a.widget_id;
      j["text"] = a.text;
      break;
    case Action::Type::back:
      break;
    case Action::Type::done:
      if (a.answer) j["answer"] = *a.answer;
      break;
  }
}

void from_json(const nlohmann::json& j, Action& a) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "tap") {
    a = Action::tap(j.at("x").get<int>(), j.at("y").get<int>());
  } else if (type == "swipe") {
    a = Action::swipe({j.at("x").get<int>(), j.at("y").get<int>()},
                      {j.at("to_x").get<int>(), j.at("to_y").get<int>()});
  } else if (type == "type_text") {
    a = Action::type_text(j.at("widget_id").get<std::string>(), j.at("text").get<std::string>());
  } else if (type == "back") {
    a = Action::back();
  } else if (type == "done") {
    if (j.contains("answer")) {
      a = Action::done(j.at("answer").get<std::string>());
    } else {
      a = Action::done();
    }
  } else {
    throw std::runtime_error("unknown action type: " + type);
  }
}

void to_json(nlohmann::json& j, const Widget& w) {
  j = nlohmann::json{{"widget_id", w.widget_id},
                     {"kind", to_string(w.kind)},
                     {"bbox", {w.bbox.x1, w.bbox.y1, w.bbox.x2, w.bbox.y2}},
                     {"text", w.text},
                     {"enabled", w.enabled}};
}

void from_json(const nlohmann::json& j, Widget& w) {
  j.at("widget_id").get_to(w.widget_id);
  w.kind = widget_kind_from_string(j.at("kind").get<std::string>());
  const auto& b = j.at("bbox");
  w.bbox = {b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()};
  j.at("text").get_to(w.text);
  j.at("enabled").get_to(w.enabled);
}

void to_json(nlohmann::json& j, const ScreenState& s) {
  j = nlohmann::json{{"app_id", s.app_id},
                     {"screen_id", s.screen_id},
                     {"widgets", s.widgets},
                     {"var_bindings", s.var_bindings},
                     {"width", s.width},
                     {"height", s.height}};
}

void from_json(const nlohmann::json& j, ScreenState& s) {
  j.at("app_id").get_to(s.app_id);
  j.at("screen_id").get_to(s.screen_id);
  j.at("widgets").get_to(s.widgets);
  j.at("var_bindings").get_to(s.var_bindings);
  j.at("width").get_to(s.width);
  j.at("height").get_to(s.height);
}

void to_json(nlohmann::json& j, const Observation& o) {
  j = nlohmann::json{{"state", o.state}, {"step_index", o.step_index}};
}

void from_json(const nlohmann::json& j, Observation& o) {
  j.at("state").get_to(o.state);
  j.at("step_index").get_to(o.step_index);
}

void to_json(nlohmann::json& j, const GoalPredicate& g) {
  switch (g.kind) {
    case GoalPredicate::Kind::var_eq:
      j = nlohmann::json{{"var_eq", {{"var", g.var}, {"value", g.value}}}};
      break;
    case GoalPredicate::Kind::screen_is:
      j = nlohmann::json{{"screen_is", g.screen}};
      break;
    case GoalPredicate::Kind::all_of:
      j = nlohmann::json{{"all", g.children}};
      break;
    case GoalPredicate::Kind::any_of:
      j = nlohmann::json{{"any", g.children}};
      break;
    case GoalPredicate::Kind::negate:
      j = nlohmann::json{{"not", g.children.empty() ? nlohmann::json() : nlohmann::json(g.children.front())}};
      break;
  }
}

void from_json(const nlohmann::json& j, GoalPredicate& g) {
  if (j.contains("var_eq")) {
    g = GoalPredicate::var_eq(j.at("var_eq").at("var").get<std::string>(),
                              j.at("var_eq").at("value").get<std::string>());
  } else if (j.contains("screen_is")) {
    g = GoalPredicate::screen_is(j.at("screen_is").get<std::string>());
  } else if (j.contains("all")) {
    g = GoalPredicate::all_of(j.at("all").get<std::vector<GoalPredicate>>());
  } else if (j.contains("any")) {
    g.kind = GoalPredicate::Kind::any_of;
    g.children = j.at("any").get<std::vector<GoalPredicate>>();
  } else if (j.contains("not")) {
    g.kind = GoalPredicate::Kind::negate;
    g.children = {j.at("not").get<GoalPredicate>()};
  } else {
    throw std::runtime_error("unrecognized goal predicate: " + j.dump());
  }
}

void to_json(nlohmann::json& j, const TaskSpec& t) {
  j = nlohmann::json{{"task_id", t.task_id}, {"instruction", t.instruction},
                     {"app_id", t.app_id},   {"init_seed", t.init_seed},
                     {"goal", t.goal},       {"max_steps", t.max_steps}};
  if (t.difficulty) j["difficulty"] = *t.difficulty;
}

void from_json(const nlohmann::json& j, TaskSpec& t) {
  t.task_id = j.at("task_id").get<std::string>();
  t.instruction = j.at("instruction").get<std::string>();
  t.app_id = j.at("app_id").get<std::string>();
  t.init_seed = j.value("init_seed", std::uint64_t{0});
  t.goal = j.at("goal").get<GoalPredicate>();
  t.max_steps = j.value("max_steps", 50);
  if (j.contains("difficulty")) t.difficulty = j.at("difficulty").get<int>();
}

}  // namespace claw::simdevice
