#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace claw::ctl {

struct EndpointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chat-completions-compatible endpoint. auth_env names an environment
// variable holding the bearer token (empty = unauthenticated).
struct EndpointSpec {
  std::string base_url;           // e.g. http://127.0.0.1:8080
  std::string auth_env;
  int timeout_ms = 30000;         // per attempt
  int retries = 3;                // attempts beyond the first
  int backoff_ms = 50;            // doubled per retry

  void validate() const;  // timeout_ms > 0, retries ≥ 0
};

struct ChatMessage {
  std::string role;
  std::string content;
  // Structured multi-part content (image + text blocks). When non-null it
  // replaces the plain string in the wire body.
  nlohmann::json parts = nullptr;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;

  nlohmann::json to_json() const;
};

struct ChatResponse {
  std::string content;  // first choice's message content
  int status = 0;       // final HTTP status
  int attempts = 1;     // total POSTs made
};

// POST /v1/chat/completions with bounded retries and exponential backoff on
// transport errors and 5xx. Logs a request/response digest line per attempt.
// Throws EndpointError once retries are exhausted or on a non-retryable
// (4xx / unparseable) response.
ChatResponse endpoint_call(const EndpointSpec& spec, const ChatRequest& request);

}  // namespace claw::ctl
