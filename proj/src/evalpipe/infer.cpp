#include "claw/evalpipe/infer.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "claw/evalpipe/judge.hpp"
#include "claw/evalpipe/zoom.hpp"
#include "claw/support/fs.hpp"
#include "claw/support/hash.hpp"

namespace claw::evalpipe {
namespace {

std::string prompt_for(const BenchmarkSample& sample, const ModelProfile& profile, bool refine) {
  std::string convention = profile.coordinate_convention == "normalized_0_1000"
                               ? "Coordinates are integers in [0, 1000] normalized to the image."
                               : "Coordinates are absolute pixels.";
  if (profile.parser_id == "action_json")
    return "Instruction: " + sample.instruction +
           "\nReply with one JSON action record {\"kind\": ...}. " + convention +
           " If the instruction cannot be grounded reply " + profile.refusal_token + ".";
  std::string view = refine ? "the cropped view" : "the screenshot";
  return "Locate the target of: " + sample.instruction + "\nReply with one (x, y) point on " +
         view + ". " + convention + " If the target is absent reply " + profile.refusal_token +
         ".";
}

std::string call_raw(const BenchmarkSample& sample, const ModelProfile& profile,
                     const ctl::EndpointSpec& endpoint, std::optional<Box> crop, bool* failed) {
  try {
    ctl::ChatResponse resp = ctl::endpoint_call(endpoint, grounding_request(sample, profile, crop));
    if (failed) *failed = false;
    return resp.content;
  } catch (const ctl::EndpointError& e) {
    std::fprintf(stderr, "[infer] %s: %s\n", sample.sample_id.c_str(), e.what());
    if (failed) *failed = true;
    return {};
  }
}

std::string shard_content(const std::vector<Prediction>& predictions) {
  std::string content;
  for (const auto& p : predictions) {
    content += nlohmann::json(p).dump();
    content.push_back('\n');
  }
  return content;
}

}  // namespace

ctl::ChatRequest grounding_request(const BenchmarkSample& sample, const ModelProfile& profile,
                                   std::optional<Box> crop) {
  nlohmann::json meta{{"sample_id", sample.sample_id},
                      {"image_ref", sample.image_ref},
                      {"width", sample.width},
                      {"height", sample.height}};
  if (crop) meta["crop"] = *crop;
  if (profile.max_pixels > 0) meta["max_pixels"] = profile.max_pixels;
  nlohmann::json image_block{
      {"type", "image_url"},
      {"image_url",
       {{"url", "data:application/json;base64," + support::base64_encode(meta.dump())}}}};
  ctl::ChatMessage msg;
  msg.role = "user";
  msg.parts = nlohmann::json::array(
      {image_block, {{"type", "text"}, {"text", prompt_for(sample, profile, crop.has_value())}}});
  ctl::ChatRequest req;
  req.model = profile.model_id;
  req.temperature = profile.temperature;
  req.messages.push_back(std::move(msg));
  return req;
}

Prediction single_stage(const BenchmarkSample& sample, const ModelProfile& profile,
                        const ctl::EndpointSpec& endpoint) {
  Prediction p;
  p.sample_id = sample.sample_id;
  p.raw_output = call_raw(sample, profile, endpoint, std::nullopt, nullptr);
  p.parsed = parse_output(p.raw_output, profile, sample.width, sample.height);
  return p;
}

Prediction zoom_pipeline(const BenchmarkSample& sample, const ModelProfile& profile,
                         const ctl::EndpointSpec& endpoint) {
  Prediction p;
  p.sample_id = sample.sample_id;
  std::string raw1 = call_raw(sample, profile, endpoint, std::nullopt, nullptr);
  Parsed coarse = parse_output(raw1, profile, sample.width, sample.height);
  if (coarse.kind == Parsed::Kind::refusal) {
    p.raw_output = "stage1: " + raw1;
    p.parsed = coarse;
    return p;
  }
  if (coarse.kind != Parsed::Kind::point) {
    std::string raw2 = call_raw(sample, profile, endpoint, std::nullopt, nullptr);
    p.raw_output = "stage1: " + raw1 + "\nfallback: " + raw2;
    p.parsed = parse_output(raw2, profile, sample.width, sample.height);
    return p;
  }
  Box crop = zoom_crop(sample.width, sample.height, coarse.point, profile.zoom->tile_fraction);
  std::string raw2 = call_raw(sample, profile, endpoint, crop, nullptr);
  p.raw_output = "stage1: " + raw1 + "\nstage2: " + raw2;
  Parsed fine = parse_output(raw2, profile, crop.width(), crop.height());
  if (fine.kind == Parsed::Kind::point) {
    p.parsed.kind = Parsed::Kind::point;
    p.parsed.point = remap_to_global(crop, fine.point);
  } else {
    p.parsed = fine;
  }
  return p;
}

Prediction predict_sample(const BenchmarkSample& sample, const ModelProfile& profile,
                          const ctl::EndpointSpec& endpoint) {
  if (profile.zoom && profile.zoom->enabled) return zoom_pipeline(sample, profile, endpoint);
  return single_stage(sample, profile, endpoint);
}

std::vector<std::pair<std::size_t, std::size_t>> shard_ranges(std::size_t n, int shard_count) {
  if (shard_count < 1) throw std::invalid_argument("shard_count must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  ranges.reserve(static_cast<std::size_t>(shard_count));
  std::size_t count = static_cast<std::size_t>(shard_count);
  std::size_t base = n / count, extra = n % count, start = 0;
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t len = base + (k < extra ? 1 : 0);
    ranges.emplace_back(start, start + len);
    start += len;
  }
  return ranges;
}

std::filesystem::path shard_path(const std::filesystem::path& dir, int shard) {
  return dir / ("pred.shard-" + std::to_string(shard) + ".jsonl");
}

bool shard_valid(const std::filesystem::path& dir, int shard) {
  auto file = shard_path(dir, shard);
  auto sidecar = file;
  sidecar += ".sha256";
  std::error_code ec;
  if (!std::filesystem::exists(file, ec) || !std::filesystem::exists(sidecar, ec)) return false;
  std::string expected = support::read_file(sidecar);
  while (!expected.empty() && (expected.back() == '\n' || expected.back() == '\r'))
    expected.pop_back();
  return support::sha256(support::read_file(file)).hex() == expected;
}

void infer(const std::vector<BenchmarkSample>& samples, const ModelProfile& profile,
           const ctl::EndpointSpec& endpoint, const std::filesystem::path& out_dir,
           const InferOptions& options) {
  profile.validate();
  endpoint.validate();
  if (options.shard_count < 1) throw std::invalid_argument("shard_count must be >= 1");
  if (options.worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
  support::ensure_dir(out_dir);
  auto ranges = shard_ranges(samples.size(), options.shard_count);

  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      int shard = next.fetch_add(1);
      if (shard >= options.shard_count) return;
      try {
        if (options.resume && shard_valid(out_dir, shard)) {
          std::fprintf(stderr, "[infer] shard %d: valid, skipped\n", shard);
          continue;
        }
        std::vector<Prediction> predictions;
        predictions.reserve(ranges[shard].second - ranges[shard].first);
        for (std::size_t i = ranges[shard].first; i < ranges[shard].second; ++i)
          predictions.push_back(predict_sample(samples[i], profile, endpoint));
        std::string content = shard_content(predictions);
        auto file = shard_path(out_dir, shard);
        support::write_file_atomic(file, content);
        auto sidecar = file;
        sidecar += ".sha256";
        support::write_file_atomic(sidecar, support::sha256(content).hex() + "\n");
      } catch (...) {
        std::scoped_lock lk(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int threads = std::min(options.worker_count, options.shard_count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& dir, int shard_count) {
  std::vector<Prediction> predictions;
  for (int shard = 0; shard < shard_count; ++shard) {
    if (!shard_valid(dir, shard))
      throw CorruptShard("shard " + std::to_string(shard) + " is missing or fails its checksum");
    for (const auto& row : support::read_jsonl(shard_path(dir, shard)))
      predictions.push_back(row.get<Prediction>());
  }
  return predictions;
}

void write_judge_results(const std::filesystem::path& path,
                         const std::vector<JudgeResult>& results) {
  std::vector<nlohmann::json> rows;
  rows.reserve(results.size());
  for (const auto& r : results) rows.emplace_back(r);
  support::write_jsonl_atomic(path, rows);
}

std::vector<JudgeResult> read_judge_results(const std::filesystem::path& path) {
  std::vector<JudgeResult> results;
  for (const auto& row : support::read_jsonl(path)) results.push_back(row.get<JudgeResult>());
  return results;
}

}  // namespace claw::evalpipe
