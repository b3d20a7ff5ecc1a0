#include "claw/trainer/features.hpp"

#include <algorithm>

#include "claw/simdevice/app_graph.hpp"
#include "claw/support/hash.hpp"
#include "claw/support/text.hpp"

namespace claw::trainer {

FeatureContext feature_context(const simdevice::ScreenState& state,
                               const simdevice::TaskSpec& task) {
  FeatureContext ctx;
  ctx.screen_bucket = static_cast<int>(
      support::sha256(state.app_id + ":" + state.screen_id).prefix64() % kScreenBuckets);
  ctx.instruction_tokens = support::tokenize(task.instruction);
  ctx.quoted = support::quoted_spans(task.instruction);
  return ctx;
}

namespace {

int kind_slot(const Candidate& c) {
  if (!c.has_widget) return 4;
  switch (c.kind) {
    case simdevice::WidgetKind::button: return 0;
    case simdevice::WidgetKind::text_field: return 1;
    case simdevice::WidgetKind::list_item: return 2;
    case simdevice::WidgetKind::toggle: return 3;
    case simdevice::WidgetKind::label: return 4;
  }
  return 4;
}

int overlap_bucket(const FeatureContext& ctx, const Candidate& c) {
  int n = 0;
  if (c.template_id == 0 && c.has_widget)
    n = support::token_overlap(support::tokenize(c.widget_text), ctx.instruction_tokens);
  else if (c.template_id == 1)
    n = support::token_overlap(support::tokenize(c.payload), ctx.instruction_tokens);
  return std::min(n, 3);
}

}  // namespace

std::vector<double> features(const FeatureContext& ctx, const Candidate& c) {
  std::vector<double> f(feature_dim(), 0.0);
  int base = 0;
  f[static_cast<std::size_t>(base + ctx.screen_bucket)] = 1.0;
  base += kScreenBuckets;
  f[static_cast<std::size_t>(base + kind_slot(c))] = 1.0;
  base += kKindSlots;
  f[static_cast<std::size_t>(base + overlap_bucket(ctx, c))] = 1.0;
  base += kOverlapSlots;
  f[static_cast<std::size_t>(base + c.template_id)] = 1.0;
  base += kTemplates;
  if (c.template_id == 1) {
    if (support::has_digit(c.payload)) f[static_cast<std::size_t>(base)] = 1.0;
    if (std::find(ctx.quoted.begin(), ctx.quoted.end(), c.payload) != ctx.quoted.end())
      f[static_cast<std::size_t>(base + 1)] = 1.0;
  }
  return f;
}

std::vector<Candidate> enumerate_candidates(const simdevice::ScreenState& state,
                                            const simdevice::TaskSpec& task) {
  std::vector<Candidate> out;
  const auto tokens = support::candidate_tokens(task.instruction);
  for (const auto& ia : simdevice::enumerate_interactions(state, tokens)) {
    Candidate c;
    c.action = simdevice::to_action(ia, state);
    switch (ia.kind) {
      case simdevice::Interaction::Kind::tap: c.template_id = 0; break;
      case simdevice::Interaction::Kind::type_text: c.template_id = 1; break;
      case simdevice::Interaction::Kind::swipe:
      case simdevice::Interaction::Kind::back: c.template_id = 2; break;
    }
    if (const auto* w = state.find_widget(ia.widget_id)) {
      c.has_widget = true;
      c.kind = w->kind;
      c.widget_text = w->text;
    }
    c.payload = ia.text;
    out.push_back(std::move(c));
  }
  Candidate done;
  done.action = simdevice::Action::done();
  done.template_id = 3;
  out.push_back(std::move(done));
  return out;
}

}  // namespace claw::trainer
