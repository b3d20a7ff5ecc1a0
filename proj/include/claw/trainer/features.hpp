#pragma once

#include <string>
#include <vector>

#include "claw/simdevice/types.hpp"

namespace claw::trainer {

// Feature layout "linear-v1": screen-id hash bucket one-hot, target widget
// kind one-hot (none for back/done), instruction-overlap bucket one-hot
// {0,1,2,3+}, action-template one-hot, and two typing-payload cues (contains
// a digit; exactly matches a quoted span of the instruction). Fixed and
// versioned so logged runs stay comparable.
inline constexpr int kScreenBuckets = 16;
inline constexpr int kKindSlots = 5;     // button, text_field, list_item, toggle, none
inline constexpr int kOverlapSlots = 4;  // 0, 1, 2, 3+
inline constexpr int kTemplates = 4;     // tap, type_text, back, done
inline constexpr int kPayloadSlots = 2;

inline constexpr int feature_dim() {
  return kScreenBuckets + kKindSlots + kOverlapSlots + kTemplates + kPayloadSlots;
}

inline const char* kFeatureVersion = "linear-v1";

// One concrete choice at a decision point, carrying what the feature map
// needs about the target.
struct Candidate {
  simdevice::Action action;
  int template_id = 2;  // 0 tap, 1 type_text, 2 back, 3 done
  bool has_widget = false;
  simdevice::WidgetKind kind = simdevice::WidgetKind::button;
  std::string widget_text;
  std::string payload;  // type_text only
};

// Per-decision cache shared by every candidate of one (observation, task).
struct FeatureContext {
  int screen_bucket = 0;
  std::vector<std::string> instruction_tokens;
  std::vector<std::string> quoted;
};

FeatureContext feature_context(const simdevice::ScreenState& state,
                               const simdevice::TaskSpec& task);

std::vector<double> features(const FeatureContext& ctx, const Candidate& c);

// Taps on every enabled interactive widget, one type_text per candidate token
// of the instruction into each enabled text field, back, and done — in that
// order, stable across calls. Static labels are not tappable, keeping the
// policy's alphabet equal to the goal oracle's search alphabet.
std::vector<Candidate> enumerate_candidates(const simdevice::ScreenState& state,
                                            const simdevice::TaskSpec& task);

}  // namespace claw::trainer
