#include "claw/evalpipe/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "claw/support/fs.hpp"

namespace claw::evalpipe {

double round_half_up(double x, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::floor(x * scale + 0.5) / scale;
}

std::string format_percent(double percent, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, round_half_up(percent, decimals));
  return buf;
}

MetricReport compute_metrics(const std::vector<JudgeResult>& results,
                             const std::vector<BenchmarkSample>& samples) {
  std::unordered_map<std::string, const BenchmarkSample*> by_id;
  for (const auto& s : samples) by_id[s.sample_id] = &s;

  MetricReport report;
  std::map<std::string, std::map<std::string, std::pair<int, int>>> counts;  // total, correct
  std::unordered_map<std::string, int> seen;
  for (const auto& r : results) {
    auto it = by_id.find(r.sample_id);
    if (it == by_id.end())
      throw MissingJudgeResult("judged sample " + r.sample_id + " is not in the dataset");
    if (++seen[r.sample_id] > 1)
      throw MissingJudgeResult("sample " + r.sample_id + " judged more than once");
    ++report.total;
    if (r.correct) ++report.correct;
    for (const auto& [axis, value] : it->second->categories) {
      auto& cell = counts[axis][value];
      ++cell.first;
      if (r.correct) ++cell.second;
    }
  }
  if (report.total != static_cast<int>(samples.size()))
    throw MissingJudgeResult("judged " + std::to_string(report.total) + " of " +
                             std::to_string(samples.size()) + " samples");
  auto percent = [](int correct, int total) {
    return total == 0 ? 0.0 : round_half_up(100.0 * correct / total, 2);
  };
  report.overall_percent = percent(report.correct, report.total);
  for (const auto& [axis, values] : counts)
    for (const auto& [value, cell] : values)
      report.breakdowns[axis][value] =
          MetricSlice{cell.first, cell.second, percent(cell.second, cell.first)};
  return report;
}

Verdict verdict_for(const ScoreCell& cell) {
  if (!cell.official) return Verdict::no_baseline;
  if (cell.reproduced >= *cell.official) return Verdict::pass;
  return std::abs(cell.reproduced - *cell.official) <= 2.0 ? Verdict::pass : Verdict::fail;
}

ReproductionReport compare_official(const std::vector<ScoreCell>& cells) {
  ReproductionReport report;
  std::map<std::string, FamilyRate> families;
  for (const auto& cell : cells) {
    ReproductionRow row;
    row.cell = cell;
    row.verdict = verdict_for(cell);
    if (cell.official) row.delta = cell.reproduced - *cell.official;
    switch (row.verdict) {
      case Verdict::pass: ++report.pass; break;
      case Verdict::fail: ++report.fail; break;
      case Verdict::no_baseline: ++report.no_baseline; break;
    }
    if (row.verdict != Verdict::no_baseline && !cell.family.empty()) {
      auto& fam = families[cell.family];
      if (row.verdict == Verdict::pass)
        ++fam.pass;
      else
        ++fam.fail;
    }
    report.rows.push_back(std::move(row));
  }
  int graded = report.pass + report.fail;
  double rate = graded == 0 ? 0.0 : 100.0 * report.pass / graded;
  report.rate_percent = round_half_up(rate, 2);
  report.headline = format_percent(rate, 1);
  for (auto& [name, fam] : families) {
    int n = fam.pass + fam.fail;
    fam.rate_percent = n == 0 ? 0.0 : round_half_up(100.0 * fam.pass / n, 2);
    report.family_rates[name] = fam;
  }
  return report;
}

std::vector<ScoreCell> load_score_table(const std::filesystem::path& path) {
  nlohmann::json doc = support::read_json_file(path);
  return doc.at("rows").get<std::vector<ScoreCell>>();
}

}  // namespace claw::evalpipe
