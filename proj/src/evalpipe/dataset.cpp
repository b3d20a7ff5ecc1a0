#include "claw/evalpipe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "claw/support/fs.hpp"
#include "claw/support/rand.hpp"

namespace claw::evalpipe {
namespace {

const std::vector<std::string> kPlatforms = {"mobile", "desktop", "web"};
const std::vector<std::string> kElements = {"button", "icon", "text_field", "checkbox",
                                            "menu_item"};
const std::vector<std::string> kTaskCats = {"navigation", "form_fill", "settings", "search"};
const std::vector<std::string> kLabels = {"Save",   "Cancel",  "Submit", "Search", "Profile",
                                          "Wifi",   "Compose", "Export", "Filter", "Refresh"};
const std::vector<std::string> kTexts = {"hello there", "quarterly report", "sunset.jpg",
                                         "meeting at 3pm", "battery saver"};
const std::vector<std::string> kDirections = {"up", "down", "left", "right"};

int rand_int(support::Rng& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(support::pick_index(rng, static_cast<std::size_t>(hi - lo + 1)));
}

Box random_box(support::Rng& rng, int width, int height) {
  int w = rand_int(rng, 40, std::min(200, width));
  int h = rand_int(rng, 40, std::min(200, height));
  int x1 = rand_int(rng, 0, width - w);
  int y1 = rand_int(rng, 0, height - h);
  return {x1, y1, x1 + w, y1 + h};
}

// Star polygon: vertices at sorted jittered angles around an interior center
// with per-vertex radii. Sorted angles keep it simple (non-self-intersecting);
// varying radii make it concave.
std::vector<Point> random_star(support::Rng& rng, int width, int height) {
  int n = rand_int(rng, 5, 9);
  double r_max = 0.18 * std::min(width, height);
  double cx = r_max + support::uniform01(rng) * (width - 2 * r_max);
  double cy = r_max + support::uniform01(rng) * (height - 2 * r_max);
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i)
    angles[i] = (i + 0.8 * support::uniform01(rng)) * 2.0 * std::numbers::pi / n;
  std::sort(angles.begin(), angles.end());
  std::vector<Point> verts(n);
  for (int i = 0; i < n; ++i) {
    double r = r_max * (0.35 + 0.65 * support::uniform01(rng));
    int x = static_cast<int>(std::lround(cx + r * std::cos(angles[i])));
    int y = static_cast<int>(std::lround(cy + r * std::sin(angles[i])));
    verts[i] = {std::clamp(x, 0, width), std::clamp(y, 0, height)};
  }
  return verts;
}

ActionRecord random_action(support::Rng& rng, int width, int height) {
  ActionRecord a;
  switch (support::pick_index(rng, 5)) {
    case 0: {
      a.kind = "click";
      a.bbox = random_box(rng, width, height);
      a.point = a.bbox->center();
      break;
    }
    case 1:
      a.kind = "type";
      a.text = kTexts[support::pick_index(rng, kTexts.size())];
      break;
    case 2:
      a.kind = "scroll";
      a.direction = kDirections[support::pick_index(rng, kDirections.size())];
      break;
    case 3: a.kind = "back"; break;
    default: a.kind = "done"; break;
  }
  return a;
}

}  // namespace

std::vector<BenchmarkSample> load_dataset(const std::filesystem::path& path) {
  std::vector<BenchmarkSample> samples;
  for (const auto& row : support::read_jsonl(path)) {
    BenchmarkSample s = row.get<BenchmarkSample>();
    s.validate();
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<BenchmarkSample>& samples) {
  std::vector<nlohmann::json> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.emplace_back(s);
  support::write_jsonl_atomic(path, rows);
}

std::vector<BenchmarkSample> generate_benchmark(const GenConfig& cfg) {
  if (cfg.count < 0 || cfg.width <= 0 || cfg.height <= 0)
    throw DatasetError("generator needs a non-negative count and positive dims");
  if (cfg.polygon_frac + cfg.refusal_frac + cfg.action_frac > 1.0 + 1e-12)
    throw DatasetError("variant fractions exceed 1");
  std::vector<BenchmarkSample> samples;
  samples.reserve(static_cast<std::size_t>(cfg.count));
  for (int i = 0; i < cfg.count; ++i) {
    support::Rng rng(support::derive_seed(cfg.seed, {"bench", std::to_string(i)}));
    BenchmarkSample s;
    s.sample_id = "syn-" + std::to_string(i);
    s.image_ref = "synthetic://" + std::to_string(cfg.seed) + "/" + std::to_string(i);
    s.width = cfg.width;
    s.height = cfg.height;
    s.categories["platform"] = kPlatforms[support::pick_index(rng, kPlatforms.size())];
    s.categories["element_type"] = kElements[support::pick_index(rng, kElements.size())];
    s.categories["task_category"] = kTaskCats[support::pick_index(rng, kTaskCats.size())];
    const std::string& label = kLabels[support::pick_index(rng, kLabels.size())];
    double u = support::uniform01(rng);
    if (u < cfg.polygon_frac) {
      s.ground_truth.kind = GroundTruth::Kind::polygon;
      s.ground_truth.polygon = random_star(rng, cfg.width, cfg.height);
      s.instruction = "Click inside the highlighted " + s.categories["element_type"] + " region";
    } else if (u < cfg.polygon_frac + cfg.refusal_frac) {
      s.ground_truth.kind = GroundTruth::Kind::refusal;
      s.instruction = "Click the " + label + " control (not present on this screen)";
    } else if (u < cfg.polygon_frac + cfg.refusal_frac + cfg.action_frac) {
      s.ground_truth.kind = GroundTruth::Kind::action;
      s.ground_truth.action = random_action(rng, cfg.width, cfg.height);
      s.instruction = "Perform the next step toward: " + label;
    } else {
      s.ground_truth.kind = GroundTruth::Kind::bbox;
      s.ground_truth.bbox = random_box(rng, cfg.width, cfg.height);
      s.instruction = "Click the " + s.categories["element_type"] + " labeled " + label;
    }
    s.validate();
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace claw::evalpipe
