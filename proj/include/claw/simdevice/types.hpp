#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/support/hash.hpp"

namespace claw::simdevice {

struct UnknownAppError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class FaultKind { stall, crash };

struct EnvFaultedError : std::runtime_error {
  explicit EnvFaultedError(FaultKind k)
      : std::runtime_error(k == FaultKind::stall ? "environment stalled" : "environment crashed"),
        kind(k) {}
  FaultKind kind;
};

enum class WidgetKind { button, text_field, list_item, toggle, label };

const char* to_string(WidgetKind kind);
WidgetKind widget_kind_from_string(const std::string& s);

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct Rect {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  bool contains(Point p) const { return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2; }
  Point center() const { return {(x1 + x2) / 2, (y1 + y2) / 2}; }
};

struct Widget {
  std::string widget_id;
  WidgetKind kind = WidgetKind::button;
  Rect bbox;
  std::string text;
  bool enabled = true;
};

// Snapshot of one rendered screen. Widgets keep their declared display order;
// canonical_serialize sorts a copy for hashing.
struct ScreenState {
  std::string app_id;
  std::string screen_id;
  std::vector<Widget> widgets;
  std::map<std::string, std::string> var_bindings;
  int width = 0;
  int height = 0;

  const Widget* find_widget(const std::string& widget_id) const;
  // Topmost enabled widget containing the point (declaration order, first hit).
  const Widget* widget_at(Point p) const;
};

struct Action {
  enum class Type { tap, swipe, type_text, back, done };

  Type type = Type::back;
  Point point;                        // tap; swipe origin
  Point to;                           // swipe destination
  std::string widget_id;              // type_text target
  std::string text;                   // type_text payload
  std::optional<std::string> answer;  // done

  static Action tap(Point p) { return {Type::tap, p, {}, {}, {}, std::nullopt}; }
  static Action tap(int x, int y) { return tap(Point{x, y}); }
  static Action swipe(Point from, Point to_) { return {Type::swipe, from, to_, {}, {}, std::nullopt}; }
  static Action type_text(std::string widget_id, std::string text) {
    return {Type::type_text, {}, {}, std::move(widget_id), std::move(text), std::nullopt};
  }
  static Action back() { return {Type::back, {}, {}, {}, {}, std::nullopt}; }
  static Action done(std::optional<std::string> answer = std::nullopt) {
    return {Type::done, {}, {}, {}, {}, std::move(answer)};
  }

  bool operator==(const Action&) const = default;
};

const char* to_string(Action::Type type);

// Declarative goal condition over screen_id and var_bindings. Decidable on any
// state of the app.
struct GoalPredicate {
  enum class Kind { var_eq, screen_is, all_of, any_of, negate };

  Kind kind = Kind::all_of;
  std::string var;
  std::string value;
  std::string screen;
  std::vector<GoalPredicate> children;

  bool eval(const ScreenState& state) const;

  static GoalPredicate var_eq(std::string var, std::string value);
  static GoalPredicate screen_is(std::string screen);
  static GoalPredicate all_of(std::vector<GoalPredicate> children);
};

struct TaskSpec {
  std::string task_id;
  std::string instruction;
  std::string app_id;
  std::uint64_t init_seed = 0;
  GoalPredicate goal;
  int max_steps = 50;
  std::optional<int> difficulty;
};

struct FaultPlan {
  double stall_prob = 0.0;
  double crash_prob = 0.0;
  std::uint64_t rng_seed = 0;
};

using AnchorKey = support::Digest;

struct Observation {
  ScreenState state;
  int step_index = 0;
};

// Order-stable canonical form: widgets sorted by widget_id, bindings sorted by
// key. Equal serializations define state identity for anchor grouping.
std::string canonical_serialize(const ScreenState& state);
AnchorKey anchor_hash(const ScreenState& state);
inline AnchorKey anchor_hash(const Observation& obs) { return anchor_hash(obs.state); }

int verify_outcome(const ScreenState& state, const TaskSpec& task);

// JSON round-trips for logs and data files.
void to_json(nlohmann::json& j, const Action& a);
void from_json(const nlohmann::json& j, Action& a);
void to_json(nlohmann::json& j, const Widget& w);
void from_json(const nlohmann::json& j, Widget& w);
void to_json(nlohmann::json& j, const ScreenState& s);
void from_json(const nlohmann::json& j, ScreenState& s);
void to_json(nlohmann::json& j, const Observation& o);
void from_json(const nlohmann::json& j, Observation& o);
void to_json(nlohmann::json& j, const GoalPredicate& g);
void from_json(const nlohmann::json& j, GoalPredicate& g);
void to_json(nlohmann::json& j, const TaskSpec& t);
void from_json(const nlohmann::json& j, TaskSpec& t);

}  // namespace claw::simdevice
