#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "claw/evalpipe/types.hpp"

namespace claw::evalpipe {

// Half-up decimal rounding (0.005 at 2 decimals -> 0.01), for non-negative x.
double round_half_up(double x, int decimals);

// Render an exact percentage at the given precision, half-up: 95.8333.. -> "95.8%".
std::string format_percent(double percent, int decimals);

// Accuracy overall and per category axis. Every judged sample must appear in
// the dataset slice (and vice versa) or MissingJudgeResult; category values
// with no samples simply do not appear.
MetricReport compute_metrics(const std::vector<JudgeResult>& results,
                             const std::vector<BenchmarkSample>& samples);

// pass ⇔ reproduced ≥ official ∨ |reproduced − official| ≤ 2.0; cells without
// an official number are no_baseline and excluded from the rate.
Verdict verdict_for(const ScoreCell& cell);
ReproductionReport compare_official(const std::vector<ScoreCell>& cells);

// {"rows": [ScoreCell…]} with an optional "note" field, as shipped in data/.
std::vector<ScoreCell> load_score_table(const std::filesystem::path& path);

}  // namespace claw::evalpipe
