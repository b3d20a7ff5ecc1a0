#pragma once

#include <string>
#include <vector>

#include "claw/evalpipe/types.hpp"

namespace claw::evalpipe {

// Raw model text -> parsed variant. Recognizes the profile's refusal token,
// then the parser: "first_pair" extracts the first "(x, y)"-style coordinate
// pair (normalized_0_1000 converted via round(x·W/1000) and clamped into the
// image); "action_json" expects a JSON action record. Anything else is a
// parse_failure value, never an exception.
Parsed parse_output(const std::string& raw, const ModelProfile& profile, int width, int height);

// Boundaries inclusive on both tests: integer coordinates make "exactly on
// the edge" a reachable case, not measure-zero.
bool judge_point_in_box(Point p, const Box& box);
bool point_in_polygon(Point p, const std::vector<Point>& polygon);

bool judge_polygon_refusal(const Parsed& parsed, const GroundTruth& gt);

// Types must match; click within gold bbox (or diag_frac of the screen
// diagonal from the gold point), type text case-insensitive and
// whitespace-normalized, scroll by direction, back/done by type alone.
// An unknown gold kind is false with a stderr note.
bool judge_multi_action(const ActionRecord& predicted, const ActionRecord& gold, int width,
                        int height, double diag_frac);

JudgeResult judge_sample(const BenchmarkSample& sample, const Prediction& prediction,
                         const ModelProfile& profile);

// Every sample must have exactly one prediction (matched by sample_id);
// otherwise MissingJudgeResult. Output order follows the dataset.
std::vector<JudgeResult> judge_all(const std::vector<BenchmarkSample>& samples,
                                   const std::vector<Prediction>& predictions,
                                   const ModelProfile& profile);

}  // namespace claw::evalpipe
