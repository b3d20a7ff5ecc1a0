#include "claw/evalpipe/judge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "claw/support/text.hpp"

namespace claw::evalpipe {
namespace {

// Scans for numeric literals; the first two form the coordinate pair.
// Tolerates "(500, 500)", "x=500 y=500", "[500.5, 10]", minus signs.
std::optional<std::pair<double, double>> first_number_pair(const std::string& raw) {
  std::vector<double> nums;
  std::size_t i = 0;
  while (i < raw.size() && nums.size() < 2) {
    char c = raw[i];
    bool starts_number = std::isdigit(static_cast<unsigned char>(c)) ||
                         ((c == '-' || c == '+') && i + 1 < raw.size() &&
                          std::isdigit(static_cast<unsigned char>(raw[i + 1])));
    if (!starts_number) {
      ++i;
      continue;
    }
    std::size_t consumed = 0;
    double value = std::stod(raw.substr(i), &consumed);
    nums.push_back(value);
    i += consumed;
  }
  if (nums.size() < 2) return std::nullopt;
  return std::make_pair(nums[0], nums[1]);
}

Point convert_point(double x, double y, const ModelProfile& profile, int width, int height) {
  if (profile.coordinate_convention == "normalized_0_1000") {
    x = x * width / 1000.0;
    y = y * height / 1000.0;
  }
  Point p{static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))};
  p.x = std::clamp(p.x, 0, width);
  p.y = std::clamp(p.y, 0, height);
  return p;
}

Parsed parse_action_json(const std::string& raw, const ModelProfile& profile, int width,
                         int height) {
  auto open = raw.find('{');
  auto close = raw.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) return {};
  auto body = nlohmann::json::parse(raw.substr(open, close - open + 1), nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("kind")) return {};
  Parsed out;
  out.kind = Parsed::Kind::action;
  try {
    out.action = body.get<ActionRecord>();
  } catch (const nlohmann::json::exception&) {
    return {};
  }
  if (out.action.point)
    *out.action.point = convert_point(out.action.point->x, out.action.point->y, profile, width,
                                      height);
  if (out.action.bbox) {
    Point lo = convert_point(out.action.bbox->x1, out.action.bbox->y1, profile, width, height);
    Point hi = convert_point(out.action.bbox->x2, out.action.bbox->y2, profile, width, height);
    *out.action.bbox = {lo.x, lo.y, hi.x, hi.y};
  }
  return out;
}

enum class ActionClass { click, type, scroll, terminal_back, terminal_done, unknown };

ActionClass classify(const std::string& kind) {
  if (kind == "click" || kind == "tap" || kind == "long_press") return ActionClass::click;
  if (kind == "type" || kind == "type_text" || kind == "input_text") return ActionClass::type;
  if (kind == "scroll" || kind == "swipe") return ActionClass::scroll;
  if (kind == "back") return ActionClass::terminal_back;
  if (kind == "done") return ActionClass::terminal_done;
  return ActionClass::unknown;
}

}  // namespace

Parsed parse_output(const std::string& raw, const ModelProfile& profile, int width, int height) {
  if (!profile.refusal_token.empty() && raw.find(profile.refusal_token) != std::string::npos) {
    Parsed out;
    out.kind = Parsed::Kind::refusal;
    return out;
  }
  if (profile.parser_id == "action_json") return parse_action_json(raw, profile, width, height);
  auto pair = first_number_pair(raw);
  if (!pair) return {};
  Parsed out;
  out.kind = Parsed::Kind::point;
  out.point = convert_point(pair->first, pair->second, profile, width, height);
  return out;
}

bool judge_point_in_box(Point p, const Box& box) { return box.contains(p); }

bool point_in_polygon(Point p, const std::vector<Point>& polygon) {
  const std::size_t n = polygon.size();
  // Boundary first, exactly: collinear and within the edge's span.
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    long long cross = static_cast<long long>(b.x - a.x) * (p.y - a.y) -
                      static_cast<long long>(b.y - a.y) * (p.x - a.x);
    if (cross == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
        std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
      return true;
  }
  // Even-odd parity of strict crossings along the +x ray, exact in integers.
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = polygon[i];
    const Point b = polygon[(i + 1) % n];
    if ((a.y > p.y) == (b.y > p.y)) continue;
    long long dy = b.y - a.y;
    long long lhs = static_cast<long long>(p.x - a.x) * dy;
    long long rhs = static_cast<long long>(p.y - a.y) * (b.x - a.x);
    if (dy > 0 ? lhs < rhs : lhs > rhs) inside = !inside;
  }
  return inside;
}

bool judge_polygon_refusal(const Parsed& parsed, const GroundTruth& gt) {
  if (gt.kind == GroundTruth::Kind::refusal) return parsed.kind == Parsed::Kind::refusal;
  if (gt.kind != GroundTruth::Kind::polygon) return false;
  if (parsed.kind != Parsed::Kind::point) return false;
  return point_in_polygon(parsed.point, gt.polygon);
}

bool judge_multi_action(const ActionRecord& predicted, const ActionRecord& gold, int width,
                        int height, double diag_frac) {
  ActionClass gold_class = classify(gold.kind);
  if (gold_class == ActionClass::unknown) {
    std::fprintf(stderr, "[judge] unknown gold action type '%s'\n", gold.kind.c_str());
    return false;
  }
  ActionClass pred_class = classify(predicted.kind);
  if (pred_class == ActionClass::unknown) {
    std::fprintf(stderr, "[judge] unknown predicted action type '%s'\n", predicted.kind.c_str());
    return false;
  }
  if (pred_class != gold_class) return false;
  switch (gold_class) {
    case ActionClass::click: {
      std::optional<Point> p = predicted.point;
      if (!p && predicted.bbox) p = predicted.bbox->center();
      if (!p) return false;
      if (gold.bbox) return judge_point_in_box(*p, *gold.bbox);
      if (!gold.point) return false;
      double dx = p->x - gold.point->x;
      double dy = p->y - gold.point->y;
      double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
      return std::hypot(dx, dy) <= diag_frac * diag;
    }
    case ActionClass::type:
      return support::to_lower(support::normalize_ws(predicted.text)) ==
             support::to_lower(support::normalize_ws(gold.text));
    case ActionClass::scroll:
      return support::to_lower(predicted.direction) == support::to_lower(gold.direction);
    case ActionClass::terminal_back:
    case ActionClass::terminal_done: return true;
    case ActionClass::unknown: return false;
  }
  return false;
}

JudgeResult judge_sample(const BenchmarkSample& sample, const Prediction& prediction,
                         const ModelProfile& profile) {
  JudgeResult r;
  r.sample_id = sample.sample_id;
  const Parsed& parsed = prediction.parsed;
  if (parsed.kind == Parsed::Kind::parse_failure) {
    r.reason = JudgeReason::parse_failure;
    return r;
  }
  if (sample.ground_truth.kind == GroundTruth::Kind::refusal) {
    r.correct = parsed.kind == Parsed::Kind::refusal;
    r.reason = r.correct ? JudgeReason::refusal_match : JudgeReason::refusal_mismatch;
    return r;
  }
  if (parsed.kind == Parsed::Kind::refusal) {
    r.reason = JudgeReason::refusal_mismatch;
    return r;
  }
  switch (sample.ground_truth.kind) {
    case GroundTruth::Kind::bbox:
      r.correct =
          parsed.kind == Parsed::Kind::point && judge_point_in_box(parsed.point,
                                                                   sample.ground_truth.bbox);
      break;
    case GroundTruth::Kind::polygon:
      r.correct = judge_polygon_refusal(parsed, sample.ground_truth);
      break;
    case GroundTruth::Kind::action:
      r.correct = parsed.kind == Parsed::Kind::action &&
                  judge_multi_action(parsed.action, sample.ground_truth.action, sample.width,
                                     sample.height, profile.action_diag_frac);
      break;
    case GroundTruth::Kind::refusal: break;  // handled above
  }
  r.reason = r.correct ? JudgeReason::hit : JudgeReason::miss;
  return r;
}

std::vector<JudgeResult> judge_all(const std::vector<BenchmarkSample>& samples,
                                   const std::vector<Prediction>& predictions,
                                   const ModelProfile& profile) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const auto& p : predictions) by_id[p.sample_id] = &p;
  std::vector<JudgeResult> results;
  results.reserve(samples.size());
  for (const auto& s : samples) {
    auto it = by_id.find(s.sample_id);
    if (it == by_id.end())
      throw MissingJudgeResult("no prediction for sample " + s.sample_id);
    results.push_back(judge_sample(s, *it->second, profile));
  }
  return results;
}

}  // namespace claw::evalpipe
