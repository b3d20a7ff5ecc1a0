#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/simdevice/types.hpp"

namespace claw::simdevice {

// Abstract interaction over a rendered screen: what a transition can key on.
// Concrete Actions (pixel taps, swipes) get reduced to one of these first.
struct Interaction {
  enum class Kind { tap, swipe, type_text, back };

  Kind kind = Kind::back;
  std::string widget_id;  // tap / type_text target
  std::string direction;  // swipe: up|down|left|right
  std::string text;       // type_text payload

  static Interaction tap(std::string widget_id) { return {Kind::tap, std::move(widget_id), {}, {}}; }
  static Interaction swipe(std::string direction) { return {Kind::swipe, {}, std::move(direction), {}}; }
  static Interaction type_text(std::string widget_id, std::string text) {
    return {Kind::type_text, std::move(widget_id), {}, std::move(text)};
  }
  static Interaction back() { return {}; }

  bool operator==(const Interaction&) const = default;
};

// Logical app state: current screen + variable store. Rendering is a pure
// function of this, so it is the unit the oracle searches over.
struct GraphState {
  std::string screen_id;
  std::map<std::string, std::string> vars;

  bool operator==(const GraphState&) const = default;
  bool operator<(const GraphState& o) const {
    if (screen_id != o.screen_id) return screen_id < o.screen_id;
    return vars < o.vars;
  }
};

struct VarCondition {
  std::string var;
  std::string value;
  bool negate = false;

  bool holds(const std::map<std::string, std::string>& vars) const {
    auto it = vars.find(var);
    const bool eq = it != vars.end() && it->second == value;
    return negate ? !eq : eq;
  }
};

struct WidgetTemplate {
  std::string widget_id;
  WidgetKind kind = WidgetKind::button;
  Rect bbox;
  std::string text;  // may contain ${var} placeholders
  std::vector<VarCondition> enabled_when;
  std::vector<VarCondition> visible_when;
};

struct ScreenTemplate {
  std::string screen_id;
  std::vector<WidgetTemplate> widgets;
};

struct VarAssignment {
  std::string var;
  std::string value;     // literal, or "$text" = typed payload
  std::string from_var;  // copy from another var when non-empty
};

struct Transition {
  std::string screen;
  Interaction::Kind on_kind = Interaction::Kind::tap;
  std::string on_widget;     // tap / type_text
  std::string on_direction;  // swipe
  std::vector<VarCondition> when;
  std::string to;  // empty = stay on current screen
  std::vector<VarAssignment> set;
};

// Deterministic finite app: screens, a variable store, and transitions matched
// first-in-declaration-order. Shared by the live device and the search oracle
// so both see identical dynamics.
class AppGraph {
 public:
  static AppGraph from_json(const nlohmann::json& j);
  static AppGraph load_file(const std::string& path);

  const std::string& app_id() const { return app_id_; }
  int width() const { return width_; }
  int height() const { return height_; }

  GraphState initial_state(std::uint64_t init_seed) const;
  ScreenState render(const GraphState& st) const;
  GraphState apply(const GraphState& st, const Interaction& ia) const;

  const std::vector<ScreenTemplate>& screens() const { return screens_; }

 private:
  struct InitVar {
    std::string var;
    std::vector<std::string> choices;  // size 1 = literal
  };

  const ScreenTemplate& screen(const std::string& screen_id) const;
  void validate() const;

  std::string app_id_;
  int width_ = 1080;
  int height_ = 2400;
  std::string home_screen_;
  std::vector<InitVar> init_vars_;
  std::vector<ScreenTemplate> screens_;
  std::vector<Transition> transitions_;
};

// Loads and owns every app definition under a directory (one .json per app).
class AppRegistry {
 public:
  explicit AppRegistry(const std::string& apps_dir);

  const AppGraph& get(const std::string& app_id) const;
  std::vector<std::string> app_ids() const;

 private:
  std::map<std::string, AppGraph> apps_;
};

// Reduces a concrete device action to the abstract interaction the graph keys
// on: taps hit-test against enabled widgets, swipes take the dominant axis.
// nullopt = action touches nothing actionable (a no-op step).
std::optional<Interaction> reduce_action(const ScreenState& screen, const Action& action);

// Shared candidate alphabet for the policy and the oracle: tap each enabled
// widget, type each instruction token into each enabled text field, and back.
// ("done" is an episode-level action, not a graph interaction.)
std::vector<Interaction> enumerate_interactions(const ScreenState& screen,
                                                const std::vector<std::string>& type_tokens);

// Concrete form of an abstract interaction on a given rendered screen.
Action to_action(const Interaction& ia, const ScreenState& screen);

}  // namespace claw::simdevice
