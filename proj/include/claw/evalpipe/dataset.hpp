#pragma once

#include <filesystem>
#include <vector>

#include "claw/evalpipe/types.hpp"

namespace claw::evalpipe {

// Line-delimited BenchmarkSample records. Every sample is validated on load;
// a polygon with fewer than three vertices raises DegeneratePolygon here, not
// later in the judge.
std::vector<BenchmarkSample> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const std::vector<BenchmarkSample>& samples);

// Synthetic benchmark generator with known ground truth. Fractions select the
// ground-truth variant per sample (remainder = bbox); polygons are concave
// stars so containment tests exercise the even-odd rule.
struct GenConfig {
  int count = 100;
  int width = 1000;
  int height = 1000;
  std::uint64_t seed = 0;
  double polygon_frac = 0.0;
  double refusal_frac = 0.0;
  double action_frac = 0.0;
};

std::vector<BenchmarkSample> generate_benchmark(const GenConfig& cfg);

}  // namespace claw::evalpipe
