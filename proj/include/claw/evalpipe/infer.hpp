#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "claw/ctl/endpoint.hpp"
#include "claw/evalpipe/types.hpp"

namespace claw::evalpipe {

// The chat body for one grounding query: an image block plus the instruction
// prompt. The benchmark is synthetic, so the image block's data URL carries a
// base64 JSON descriptor of the screen (dims, crop window, resolution cap)
// instead of raster bytes; the serving side resolves it.
ctl::ChatRequest grounding_request(const BenchmarkSample& sample, const ModelProfile& profile,
                                   std::optional<Box> crop);

// One-shot full-image grounding. Endpoint failures (after the spec's retries)
// become parse_failure predictions, never exceptions.
Prediction single_stage(const BenchmarkSample& sample, const ModelProfile& profile,
                        const ctl::EndpointSpec& endpoint);

// Coarse point on the full image -> centered crop -> refined point remapped to
// global pixels. Both raw outputs are logged in raw_output. Stage-1
// parse_failure falls back to single-stage; stage-1 refusal is final.
Prediction zoom_pipeline(const BenchmarkSample& sample, const ModelProfile& profile,
                         const ctl::EndpointSpec& endpoint);

// Dispatches on profile.zoom.
Prediction predict_sample(const BenchmarkSample& sample, const ModelProfile& profile,
                          const ctl::EndpointSpec& endpoint);

// Contiguous [begin, end) sample ranges; the first (n mod count) shards are
// one longer.
std::vector<std::pair<std::size_t, std::size_t>> shard_ranges(std::size_t n, int shard_count);

std::filesystem::path shard_path(const std::filesystem::path& dir, int shard);
// File and sidecar exist and the sha256 matches.
bool shard_valid(const std::filesystem::path& dir, int shard);

struct InferOptions {
  int shard_count = 1;
  int worker_count = 1;
  bool resume = false;
};

// Workers pull shard indices from a shared counter; each shard's predictions
// are computed in sample order and written atomically (file, then checksum
// sidecar). With resume, checksum-valid shards are skipped and invalid ones
// recomputed, so any interrupt schedule converges to the same bytes.
void infer(const std::vector<BenchmarkSample>& samples, const ModelProfile& profile,
           const ctl::EndpointSpec& endpoint, const std::filesystem::path& out_dir,
           const InferOptions& options);

// All shards 0..shard_count-1, checksum-verified (CorruptShard otherwise),
// concatenated in shard order.
std::vector<Prediction> read_predictions(const std::filesystem::path& dir, int shard_count);

void write_judge_results(const std::filesystem::path& path,
                         const std::vector<JudgeResult>& results);
std::vector<JudgeResult> read_judge_results(const std::filesystem::path& path);

}  // namespace claw::evalpipe
