#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace claw::support {

std::string read_file(const std::filesystem::path& path);

// Write via a temp file in the same directory, then rename. Readers never see
// a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

void ensure_dir(const std::filesystem::path& dir);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& value);

// One JSON value per line.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl_atomic(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

}  // namespace claw::support
