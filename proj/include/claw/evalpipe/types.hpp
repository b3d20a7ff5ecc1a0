#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace claw::evalpipe {

struct DatasetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneratePolygon : DatasetError {
  using DatasetError::DatasetError;
};

struct ProfileError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MissingJudgeResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A shard file whose checksum sidecar does not match (or is missing) when the
// pipeline needs to read it back.
struct CorruptShard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct Box {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
  bool operator==(const Box&) const = default;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  bool contains(Point p) const { return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2; }
  Point center() const { return {(x1 + x2) / 2, (y1 + y2) / 2}; }
};

// Both gold labels and parsed model replies use this shape; fields beyond
// `kind` are meaningful per kind (click: point/bbox, type: text, scroll:
// direction).
struct ActionRecord {
  std::string kind;  // click, type, scroll, back, done
  std::optional<Point> point;
  std::optional<Box> bbox;
  std::string text;
  std::string direction;  // up, down, left, right
  bool operator==(const ActionRecord&) const = default;
};

struct GroundTruth {
  enum class Kind { bbox, polygon, refusal, action };
  Kind kind = Kind::bbox;
  Box bbox{};
  std::vector<Point> polygon;
  ActionRecord action;
};

struct BenchmarkSample {
  std::string sample_id;
  std::string image_ref;  // opaque; never dereferenced by the pipeline
  int width = 0;
  int height = 0;
  std::string instruction;
  GroundTruth ground_truth;
  std::map<std::string, std::string> categories;  // platform, element_type, task_category

  void validate() const;  // dims positive, gt within dims, polygon non-degenerate
};

struct ZoomSpec {
  double tile_fraction = 0.25;  // f in (0, 1]
  bool enabled = true;
};

// Every knob that historically causes evaluation drift, pinned per model.
struct ModelProfile {
  std::string model_id;
  std::string prompt_template_id = "ground-v1";
  std::string coordinate_convention = "absolute_pixels";  // or normalized_0_1000
  long max_pixels = 0;                                    // 0 = uncapped
  double temperature = 0.0;
  std::string parser_id = "first_pair";  // or action_json
  std::string refusal_token = "CANNOT_GROUND";
  double action_diag_frac = 0.14;  // click tolerance as a fraction of the screen diagonal
  std::optional<ZoomSpec> zoom;

  void validate() const;
};

struct Parsed {
  enum class Kind { point, action, refusal, parse_failure };
  Kind kind = Kind::parse_failure;
  Point point{};
  ActionRecord action;
};

struct Prediction {
  std::string sample_id;
  std::string raw_output;
  Parsed parsed;
};

enum class JudgeReason { hit, miss, refusal_match, refusal_mismatch, parse_failure };
const char* to_string(JudgeReason reason);
JudgeReason judge_reason_from_string(const std::string& s);

struct JudgeResult {
  std::string sample_id;
  bool correct = false;
  JudgeReason reason = JudgeReason::miss;
};

struct MetricSlice {
  int total = 0;
  int correct = 0;
  double percent = 0.0;  // 2 decimals, half-up
};

struct MetricReport {
  int total = 0;
  int correct = 0;
  double overall_percent = 0.0;  // 2 decimals, half-up
  // axis (platform / element_type / task_category) -> value -> slice;
  // values absent from the dataset are absent here, never 0%.
  std::map<std::string, std::map<std::string, MetricSlice>> breakdowns;
};

enum class Verdict { pass, fail, no_baseline };
const char* to_string(Verdict v);

// One benchmark cell of the official-vs-reproduced score table.
struct ScoreCell {
  std::string model;
  std::string benchmark;
  std::string family;  // open_source / closed_source / ""
  std::optional<double> official;
  double reproduced = 0.0;
};

struct ReproductionRow {
  ScoreCell cell;
  Verdict verdict = Verdict::no_baseline;
  std::optional<double> delta;  // reproduced - official
};

struct FamilyRate {
  int pass = 0;
  int fail = 0;
  double rate_percent = 0.0;  // 2 decimals
};

struct ReproductionReport {
  std::vector<ReproductionRow> rows;
  int pass = 0;
  int fail = 0;
  int no_baseline = 0;
  double rate_percent = 0.0;  // pass / (pass + fail), 2 decimals
  std::string headline;       // same rate at 1 decimal, e.g. "95.8%"
  std::map<std::string, FamilyRate> family_rates;
};

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const Box& b);
void from_json(const nlohmann::json& j, Box& b);
void to_json(nlohmann::json& j, const ActionRecord& a);
void from_json(const nlohmann::json& j, ActionRecord& a);
void to_json(nlohmann::json& j, const BenchmarkSample& s);
void from_json(const nlohmann::json& j, BenchmarkSample& s);
void to_json(nlohmann::json& j, const ModelProfile& p);
void from_json(const nlohmann::json& j, ModelProfile& p);
void to_json(nlohmann::json& j, const Prediction& p);
void from_json(const nlohmann::json& j, Prediction& p);
void to_json(nlohmann::json& j, const JudgeResult& r);
void from_json(const nlohmann::json& j, JudgeResult& r);
void to_json(nlohmann::json& j, const MetricReport& r);
void to_json(nlohmann::json& j, const ScoreCell& c);
void from_json(const nlohmann::json& j, ScoreCell& c);
void to_json(nlohmann::json& j, const ReproductionReport& r);

}  // namespace claw::evalpipe
