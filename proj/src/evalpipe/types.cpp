#include "claw/evalpipe/types.hpp"

#include <nlohmann/json.hpp>

namespace claw::evalpipe {

void BenchmarkSample::validate() const {
  if (sample_id.empty()) throw DatasetError("sample without sample_id");
  if (width <= 0 || height <= 0)
    throw DatasetError(sample_id + ": image dims must be positive");
  auto in_image = [&](Point p) {
    return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height;
  };
  switch (ground_truth.kind) {
    case GroundTruth::Kind::bbox: {
      const auto& b = ground_truth.bbox;
      if (b.x1 > b.x2 || b.y1 > b.y2 || !in_image({b.x1, b.y1}) || !in_image({b.x2, b.y2}))
        throw DatasetError(sample_id + ": bbox outside image dims");
      break;
    }
    case GroundTruth::Kind::polygon: {
      if (ground_truth.polygon.size() < 3)
        throw DegeneratePolygon(sample_id + ": polygon needs at least 3 vertices");
      for (const auto& v : ground_truth.polygon)
        if (!in_image(v)) throw DatasetError(sample_id + ": polygon vertex outside image dims");
      break;
    }
    case GroundTruth::Kind::refusal:
      break;
    case GroundTruth::Kind::action: {
      if (ground_truth.action.kind.empty())
        throw DatasetError(sample_id + ": gold action without a kind");
      break;
    }
  }
}

void ModelProfile::validate() const {
  if (model_id.empty()) throw ProfileError("profile without model_id");
  if (coordinate_convention != "absolute_pixels" && coordinate_convention != "normalized_0_1000")
    throw ProfileError(model_id + ": unknown coordinate_convention " + coordinate_convention);
  if (parser_id != "first_pair" && parser_id != "action_json")
    throw ProfileError(model_id + ": unknown parser_id " + parser_id);
  if (temperature < 0.0) throw ProfileError(model_id + ": temperature must be non-negative");
  if (max_pixels < 0) throw ProfileError(model_id + ": max_pixels must be non-negative");
  if (action_diag_frac <= 0.0 || action_diag_frac > 1.0)
    throw ProfileError(model_id + ": action_diag_frac must be in (0, 1]");
  if (zoom && (zoom->tile_fraction <= 0.0 || zoom->tile_fraction > 1.0))
    throw ProfileError(model_id + ": zoom tile_fraction must be in (0, 1]");
}

const char* to_string(JudgeReason reason) {
  switch (reason) {
    case JudgeReason::hit: return "hit";
    case JudgeReason::miss: return "miss";
    case JudgeReason::refusal_match: return "refusal_match";
    case JudgeReason::refusal_mismatch: return "refusal_mismatch";
    case JudgeReason::parse_failure: return "parse_failure";
  }
  return "miss";
}

JudgeReason judge_reason_from_string(const std::string& s) {
  if (s == "hit") return JudgeReason::hit;
  if (s == "miss") return JudgeReason::miss;
  if (s == "refusal_match") return JudgeReason::refusal_match;
  if (s == "refusal_mismatch") return JudgeReason::refusal_mismatch;
  if (s == "parse_failure") return JudgeReason::parse_failure;
  throw std::invalid_argument("unknown judge reason: " + s);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::no_baseline: return "no_baseline";
  }
  return "no_baseline";
}

void to_json(nlohmann::json& j, const Point& p) { j = nlohmann::json::array({p.x, p.y}); }

void from_json(const nlohmann::json& j, Point& p) {
  p.x = j.at(0).get<int>();
  p.y = j.at(1).get<int>();
}

void to_json(nlohmann::json& j, const Box& b) {
  j = nlohmann::json::array({b.x1, b.y1, b.x2, b.y2});
}

void from_json(const nlohmann::json& j, Box& b) {
  b.x1 = j.at(0).get<int>();
  b.y1 = j.at(1).get<int>();
  b.x2 = j.at(2).get<int>();
  b.y2 = j.at(3).get<int>();
}

void to_json(nlohmann::json& j, const ActionRecord& a) {
  j = nlohmann::json{{"kind", a.kind}};
  if (a.point) j["point"] = *a.point;
  if (a.bbox) j["bbox"] = *a.bbox;
  if (!a.text.empty()) j["text"] = a.text;
  if (!a.direction.empty()) j["direction"] = a.direction;
}

void from_json(const nlohmann::json& j, ActionRecord& a) {
  a = ActionRecord{};
  a.kind = j.at("kind").get<std::string>();
  if (j.contains("point")) a.point = j.at("point").get<Point>();
  if (j.contains("bbox")) a.bbox = j.at("bbox").get<Box>();
  if (j.contains("text")) a.text = j.at("text").get<std::string>();
  if (j.contains("direction")) a.direction = j.at("direction").get<std::string>();
}

void to_json(nlohmann::json& j, const BenchmarkSample& s) {
  j = nlohmann::json{{"sample_id", s.sample_id},
                     {"image_ref", s.image_ref},
                     {"width", s.width},
                     {"height", s.height},
                     {"instruction", s.instruction},
                     {"categories", s.categories}};
  switch (s.ground_truth.kind) {
    case GroundTruth::Kind::bbox: j["ground_truth"] = {{"bbox", s.ground_truth.bbox}}; break;
    case GroundTruth::Kind::polygon:
      j["ground_truth"] = {{"polygon", s.ground_truth.polygon}};
      break;
    case GroundTruth::Kind::refusal: j["ground_truth"] = {{"refusal", true}}; break;
    case GroundTruth::Kind::action: j["ground_truth"] = {{"action", s.ground_truth.action}}; break;
  }
}

void from_json(const nlohmann::json& j, BenchmarkSample& s) {
  s = BenchmarkSample{};
  s.sample_id = j.at("sample_id").get<std::string>();
  s.image_ref = j.value("image_ref", std::string{});
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  s.instruction = j.value("instruction", std::string{});
  if (j.contains("categories"))
    s.categories = j.at("categories").get<std::map<std::string, std::string>>();
  const auto& gt = j.at("ground_truth");
  int variants = 0;
  if (gt.contains("bbox")) {
    s.ground_truth.kind = GroundTruth::Kind::bbox;
    s.ground_truth.bbox = gt.at("bbox").get<Box>();
    ++variants;
  }
  if (gt.contains("polygon")) {
    s.ground_truth.kind = GroundTruth::Kind::polygon;
    s.ground_truth.polygon = gt.at("polygon").get<std::vector<Point>>();
    ++variants;
  }
  if (gt.contains("refusal")) {
    s.ground_truth.kind = GroundTruth::Kind::refusal;
    ++variants;
  }
  if (gt.contains("action")) {
    s.ground_truth.kind = GroundTruth::Kind::action;
    s.ground_truth.action = gt.at("action").get<ActionRecord>();
    ++variants;
  }
  if (variants != 1)
    throw DatasetError(s.sample_id + ": ground_truth must carry exactly one variant");
}

void to_json(nlohmann::json& j, const ModelProfile& p) {
  j = nlohmann::json{{"model_id", p.model_id},
                     {"prompt_template_id", p.prompt_template_id},
                     {"coordinate_convention", p.coordinate_convention},
                     {"max_pixels", p.max_pixels},
                     {"temperature", p.temperature},
                     {"parser_id", p.parser_id},
                     {"refusal_token", p.refusal_token},
                     {"action_diag_frac", p.action_diag_frac}};
  if (p.zoom) j["zoom"] = {{"tile_fraction", p.zoom->tile_fraction}, {"enabled", p.zoom->enabled}};
}

void from_json(const nlohmann::json& j, ModelProfile& p) {
  p = ModelProfile{};
  p.model_id = j.at("model_id").get<std::string>();
  p.prompt_template_id = j.value("prompt_template_id", p.prompt_template_id);
  p.coordinate_convention = j.value("coordinate_convention", p.coordinate_convention);
  p.max_pixels = j.value("max_pixels", p.max_pixels);
  p.temperature = j.value("temperature", p.temperature);
  p.parser_id = j.value("parser_id", p.parser_id);
  p.refusal_token = j.value("refusal_token", p.refusal_token);
  p.action_diag_frac = j.value("action_diag_frac", p.action_diag_frac);
  if (j.contains("zoom")) {
    ZoomSpec z;
    z.tile_fraction = j.at("zoom").value("tile_fraction", z.tile_fraction);
    z.enabled = j.at("zoom").value("enabled", z.enabled);
    p.zoom = z;
  }
}

void to_json(nlohmann::json& j, const Prediction& p) {
  j = nlohmann::json{{"sample_id", p.sample_id}, {"raw_output", p.raw_output}};
  switch (p.parsed.kind) {
    case Parsed::Kind::point: j["parsed"] = {{"point", p.parsed.point}}; break;
    case Parsed::Kind::action: j["parsed"] = {{"action", p.parsed.action}}; break;
    case Parsed::Kind::refusal: j["parsed"] = {{"refusal", true}}; break;
    case Parsed::Kind::parse_failure: j["parsed"] = {{"parse_failure", true}}; break;
  }
}

void from_json(const nlohmann::json& j, Prediction& p) {
  p = Prediction{};
  p.sample_id = j.at("sample_id").get<std::string>();
  p.raw_output = j.value("raw_output", std::string{});
  const auto& parsed = j.at("parsed");
  if (parsed.contains("point")) {
    p.parsed.kind = Parsed::Kind::point;
    p.parsed.point = parsed.at("point").get<Point>();
  } else if (parsed.contains("action")) {
    p.parsed.kind = Parsed::Kind::action;
    p.parsed.action = parsed.at("action").get<ActionRecord>();
  } else if (parsed.contains("refusal")) {
    p.parsed.kind = Parsed::Kind::refusal;
  } else {
    p.parsed.kind = Parsed::Kind::parse_failure;
  }
}

void to_json(nlohmann::json& j, const JudgeResult& r) {
  j = nlohmann::json{
      {"sample_id", r.sample_id}, {"correct", r.correct}, {"reason", to_string(r.reason)}};
}

void from_json(const nlohmann::json& j, JudgeResult& r) {
  r.sample_id = j.at("sample_id").get<std::string>();
  r.correct = j.at("correct").get<bool>();
  r.reason = judge_reason_from_string(j.at("reason").get<std::string>());
}

void to_json(nlohmann::json& j, const MetricReport& r) {
  nlohmann::json breakdowns = nlohmann::json::object();
  for (const auto& [axis, slices] : r.breakdowns) {
    nlohmann::json per_axis = nlohmann::json::object();
    for (const auto& [value, slice] : slices)
      per_axis[value] = {
          {"total", slice.total}, {"correct", slice.correct}, {"percent", slice.percent}};
    breakdowns[axis] = std::move(per_axis);
  }
  j = nlohmann::json{{"total", r.total},
                     {"correct", r.correct},
                     {"overall_percent", r.overall_percent},
                     {"breakdowns", std::move(breakdowns)}};
}

void to_json(nlohmann::json& j, const ScoreCell& c) {
  j = nlohmann::json{{"model", c.model}, {"benchmark", c.benchmark}, {"reproduced", c.reproduced}};
  if (!c.family.empty()) j["family"] = c.family;
  j["official"] = c.official ? nlohmann::json(*c.official) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ScoreCell& c) {
  c = ScoreCell{};
  c.model = j.at("model").get<std::string>();
  c.benchmark = j.at("benchmark").get<std::string>();
  c.family = j.value("family", std::string{});
  c.reproduced = j.at("reproduced").get<double>();
  if (j.contains("official") && !j.at("official").is_null())
    c.official = j.at("official").get<double>();
}

void to_json(nlohmann::json& j, const ReproductionReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json cell;
    to_json(cell, row.cell);
    cell["verdict"] = to_string(row.verdict);
    if (row.delta) cell["delta"] = *row.delta;
    rows.push_back(std::move(cell));
  }
  nlohmann::json families = nlohmann::json::object();
  for (const auto& [family, rate] : r.family_rates)
    families[family] = {
        {"pass", rate.pass}, {"fail", rate.fail}, {"rate_percent", rate.rate_percent}};
  j = nlohmann::json{{"rows", std::move(rows)},
                     {"pass", r.pass},
                     {"fail", r.fail},
                     {"no_baseline", r.no_baseline},
                     {"rate_percent", r.rate_percent},
                     {"headline", r.headline},
                     {"family_rates", std::move(families)}};
}

}  // namespace claw::evalpipe
