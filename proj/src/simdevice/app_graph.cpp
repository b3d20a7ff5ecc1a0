#include "claw/simdevice/app_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "claw/support/fs.hpp"
#include "claw/support/rand.hpp"

namespace claw::simdevice {

namespace {

std::vector<VarCondition> parse_conditions(const nlohmann::json& j) {
  std::vector<VarCondition> out;
  for (const auto& c : j) {
    VarCondition vc;
    vc.var = c.at("var").get<std::string>();
    if (c.contains("equals")) {
      vc.value = c.at("equals").get<std::string>();
    } else if (c.contains("not_equals")) {
      vc.value = c.at("not_equals").get<std::string>();
      vc.negate = true;
    } else {
      throw std::runtime_error("condition needs equals/not_equals: " + c.dump());
    }
    out.push_back(std::move(vc));
  }
  return out;
}

bool all_hold(const std::vector<VarCondition>& cs, const std::map<std::string, std::string>& vars) {
  return std::all_of(cs.begin(), cs.end(), [&](const VarCondition& c) { return c.holds(vars); });
}

std::string substitute_vars(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '$' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      auto close = tmpl.find('}', i + 2);
      if (close != std::string::npos) {
        const std::string name = tmpl.substr(i + 2, close - i - 2);
        auto it = vars.find(name);
        if (it != vars.end()) out += it->second;
        i = close + 1;
        continue;
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

Interaction::Kind kind_from_string(const std::string& s) {
  if (s == "tap") return Interaction::Kind::tap;
  if (s == "swipe") return Interaction::Kind::swipe;
  if (s == "type_text") return Interaction::Kind::type_text;
  if (s == "back") return Interaction::Kind::back;
  throw std::runtime_error("unknown interaction kind: " + s);
}

}  // namespace

AppGraph AppGraph::from_json(const nlohmann::json& j) {
  AppGraph g;
  g.app_id_ = j.at("app_id").get<std::string>();
  g.width_ = j.value("width", 1080);
  g.height_ = j.value("height", 2400);
  g.home_screen_ = j.at("home_screen").get<std::string>();

  if (j.contains("init_vars")) {
    for (const auto& [name, spec] : j.at("init_vars").items()) {
      InitVar iv;
      iv.var = name;
      if (spec.is_object() && spec.contains("seed_choice")) {
        iv.choices = spec.at("seed_choice").get<std::vector<std::string>>();
        if (iv.choices.empty()) throw std::runtime_error("empty seed_choice for var " + name);
      } else {
        iv.choices = {spec.get<std::string>()};
      }
      g.init_vars_.push_back(std::move(iv));
    }
  }

  for (const auto& sj : j.at("screens")) {
    ScreenTemplate st;
    st.screen_id = sj.at("screen_id").get<std::string>();
    for (const auto& wj : sj.at("widgets")) {
      WidgetTemplate wt;
      wt.widget_id = wj.at("widget_id").get<std::string>();
      wt.kind = widget_kind_from_string(wj.value("kind", std::string("button")));
      auto bbox = wj.at("bbox").get<std::vector<int>>();
      if (bbox.size() != 4) throw std::runtime_error("bbox must be [x1,y1,x2,y2]");
      wt.bbox = {bbox[0], bbox[1], bbox[2], bbox[3]};
      wt.text = wj.value("text", std::string());
      if (wj.contains("enabled_when")) wt.enabled_when = parse_conditions(wj.at("enabled_when"));
      if (wj.contains("visible_when")) wt.visible_when = parse_conditions(wj.at("visible_when"));
      st.widgets.push_back(std::move(wt));
    }
    g.screens_.push_back(std::move(st));
  }

  for (const auto& tj : j.at("transitions")) {
    Transition t;
    t.screen = tj.at("screen").get<std::string>();
    const auto& on = tj.at("on");
    t.on_kind = kind_from_string(on.at("type").get<std::string>());
    if (on.contains("widget_id")) t.on_widget = on.at("widget_id").get<std::string>();
    if (on.contains("direction")) t.on_direction = on.at("direction").get<std::string>();
    if (tj.contains("when")) t.when = parse_conditions(tj.at("when"));
    t.to = tj.value("to", std::string());
    if (tj.contains("set")) {
      for (const auto& aj : tj.at("set")) {
        VarAssignment a;
        a.var = aj.at("var").get<std::string>();
        if (aj.contains("from_var")) {
          a.from_var = aj.at("from_var").get<std::string>();
        } else {
          a.value = aj.at("value").get<std::string>();
        }
        t.set.push_back(std::move(a));
      }
    }
    g.transitions_.push_back(std::move(t));
  }

  g.validate();
  return g;
}

AppGraph AppGraph::load_file(const std::string& path) {
  return from_json(support::read_json_file(path));
}

void AppGraph::validate() const {
  std::set<std::string> ids;
  for (const auto& s : screens_) {
    if (!ids.insert(s.screen_id).second)
      throw std::runtime_error(app_id_ + ": duplicate screen " + s.screen_id);
    std::set<std::string> wids;
    for (const auto& w : s.widgets) {
      if (!wids.insert(w.widget_id).second)
        throw std::runtime_error(app_id_ + "/" + s.screen_id + ": duplicate widget " + w.widget_id);
      if (w.bbox.x1 > w.bbox.x2 || w.bbox.y1 > w.bbox.y2 || w.bbox.x1 < 0 || w.bbox.y1 < 0 ||
          w.bbox.x2 >= width_ || w.bbox.y2 >= height_)
        throw std::runtime_error(app_id_ + "/" + s.screen_id + ": widget " + w.widget_id +
                                 " bbox out of bounds");
    }
  }
  if (!ids.count(home_screen_))
    throw std::runtime_error(app_id_ + ": home screen " + home_screen_ + " not defined");
  for (const auto& t : transitions_) {
    if (!ids.count(t.screen))
      throw std::runtime_error(app_id_ + ": transition from unknown screen " + t.screen);
    if (!t.to.empty() && !ids.count(t.to))
      throw std::runtime_error(app_id_ + ": transition to unknown screen " + t.to);
    if (t.on_kind == Interaction::Kind::tap || t.on_kind == Interaction::Kind::type_text) {
      const auto& sc = screen(t.screen);
      bool found = std::any_of(sc.widgets.begin(), sc.widgets.end(),
                               [&](const WidgetTemplate& w) { return w.widget_id == t.on_widget; });
      if (!found)
        throw std::runtime_error(app_id_ + "/" + t.screen + ": transition on unknown widget " +
                                 t.on_widget);
    }
  }
}

const ScreenTemplate& AppGraph::screen(const std::string& screen_id) const {
  for (const auto& s : screens_) {
    if (s.screen_id == screen_id) return s;
  }
  throw std::runtime_error(app_id_ + ": unknown screen " + screen_id);
}

GraphState AppGraph::initial_state(std::uint64_t init_seed) const {
  GraphState st;
  st.screen_id = home_screen_;
  for (const auto& iv : init_vars_) {
    if (iv.choices.size() == 1) {
      st.vars[iv.var] = iv.choices.front();
    } else {
      auto idx = support::derive_seed(init_seed, {"init", iv.var}) % iv.choices.size();
      st.vars[iv.var] = iv.choices[static_cast<std::size_t>(idx)];
    }
  }
  return st;
}

ScreenState AppGraph::render(const GraphState& st) const {
  const ScreenTemplate& tmpl = screen(st.screen_id);
  ScreenState out;
  out.app_id = app_id_;
  out.screen_id = st.screen_id;
  out.var_bindings = st.vars;
  out.width = width_;
  out.height = height_;
  for (const auto& wt : tmpl.widgets) {
    if (!all_hold(wt.visible_when, st.vars)) continue;
    Widget w;
    w.widget_id = wt.widget_id;
    w.kind = wt.kind;
    w.bbox = wt.bbox;
    w.text = substitute_vars(wt.text, st.vars);
    w.enabled = all_hold(wt.enabled_when, st.vars);
    out.widgets.push_back(std::move(w));
  }
  return out;
}

GraphState AppGraph::apply(const GraphState& st, const Interaction& ia) const {
  if (ia.kind == Interaction::Kind::tap || ia.kind == Interaction::Kind::type_text) {
    // Target must be visible and enabled on the rendered screen.
    ScreenState screen_now = render(st);
    const Widget* w = screen_now.find_widget(ia.widget_id);
    if (w == nullptr || !w->enabled) return st;
  }
  for (const auto& t : transitions_) {
    if (t.screen != st.screen_id || t.on_kind != ia.kind) continue;
    if (t.on_kind == Interaction::Kind::tap || t.on_kind == Interaction::Kind::type_text) {
      if (t.on_widget != ia.widget_id) continue;
    } else if (t.on_kind == Interaction::Kind::swipe) {
      if (t.on_direction != ia.direction) continue;
    }
    if (!all_hold(t.when, st.vars)) continue;

    GraphState next = st;
    for (const auto& a : t.set) {
      if (!a.from_var.empty()) {
        auto it = st.vars.find(a.from_var);
        next.vars[a.var] = it != st.vars.end() ? it->second : "";
      } else if (a.value == "$text") {
        next.vars[a.var] = ia.text;
      } else {
        next.vars[a.var] = a.value;
      }
    }
    if (!t.to.empty()) next.screen_id = t.to;
    return next;
  }
  return st;  // nothing matched: dead tap / unhandled gesture
}

AppRegistry::AppRegistry(const std::string& apps_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(apps_dir)) throw std::runtime_error("not a directory: " + apps_dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(apps_dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    AppGraph g = AppGraph::load_file(f.string());
    std::string id = g.app_id();
    apps_.emplace(std::move(id), std::move(g));
  }
  if (apps_.empty()) throw std::runtime_error("no app definitions in " + apps_dir);
}

const AppGraph& AppRegistry::get(const std::string& app_id) const {
  auto it = apps_.find(app_id);
  if (it == apps_.end()) throw UnknownAppError("unknown app: " + app_id);
  return it->second;
}

std::vector<std::string> AppRegistry::app_ids() const {
  std::vector<std::string> out;
  out.reserve(apps_.size());
  for (const auto& [id, _] : apps_) out.push_back(id);
  return out;
}

std::optional<Interaction> reduce_action(const ScreenState& screen, const Action& action) {
  switch (action.type) {
    case Action::Type::tap: {
      const Widget* w = screen.widget_at(action.point);
      if (w == nullptr) return std::nullopt;
      return Interaction::tap(w->widget_id);
    }
    case Action::Type::swipe: {
      const int dx = action.to.x - action.point.x;
      const int dy = action.to.y - action.point.y;
      if (dx == 0 && dy == 0) return std::nullopt;
      std::string dir;
      if (std::abs(dy) >= std::abs(dx)) {
        dir = dy < 0 ? "up" : "down";
      } else {
        dir = dx < 0 ? "left" : "right";
      }
      return Interaction::swipe(dir);
    }
    case Action::Type::type_text: {
      const Widget* w = screen.find_widget(action.widget_id);
      if (w == nullptr || !w->enabled || w->kind != WidgetKind::text_field) return std::nullopt;
      return Interaction::type_text(action.widget_id, action.text);
    }
    case Action::Type::back:
      return Interaction::back();
    case Action::Type::done:
      return std::nullopt;  // episode-level, no graph effect
  }
  return std::nullopt;
}

std::vector<Interaction> enumerate_interactions(const ScreenState& screen,
                                                const std::vector<std::string>& type_tokens) {
  std::vector<Interaction> out;
  for (const auto& w : screen.widgets) {
    if (!w.enabled) continue;
    if (w.kind == WidgetKind::text_field) {
      for (const auto& tok : type_tokens) out.push_back(Interaction::type_text(w.widget_id, tok));
    } else if (w.kind != WidgetKind::label) {
      out.push_back(Interaction::tap(w.widget_id));
    }
  }
  out.push_back(Interaction::back());
  return out;
}

Action to_action(const Interaction& ia, const ScreenState& screen) {
  switch (ia.kind) {
    case Interaction::Kind::tap: {
      const Widget* w = screen.find_widget(ia.widget_id);
      if (w == nullptr) throw PreconditionError("interaction targets missing widget " + ia.widget_id);
      return Action::tap(w->bbox.center());
    }
    case Interaction::Kind::swipe: {
      const Point mid{screen.width / 2, screen.height / 2};
      const int span = screen.height / 4;
      if (ia.direction == "up") return Action::swipe(mid, {mid.x, mid.y - span});
      if (ia.direction == "down") return Action::swipe(mid, {mid.x, mid.y + span});
      if (ia.direction == "left") return Action::swipe(mid, {mid.x - screen.width / 4, mid.y});
      return Action::swipe(mid, {mid.x + screen.width / 4, mid.y});
    }
    case Interaction::Kind::type_text:
      return Action::type_text(ia.widget_id, ia.text);
    case Interaction::Kind::back:
      return Action::back();
  }
  return Action::back();
}

}  // namespace claw::simdevice
