#include "claw/ctl/endpoint.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "claw/support/hash.hpp"

namespace claw::ctl {

void EndpointSpec::validate() const {
  if (base_url.empty()) throw std::invalid_argument("endpoint base_url is empty");
  if (timeout_ms <= 0) throw std::invalid_argument("endpoint timeout_ms must be positive");
  if (retries < 0) throw std::invalid_argument("endpoint retries must be non-negative");
}

nlohmann::json ChatRequest::to_json() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages)
    msgs.push_back({{"role", m.role}, {"content", m.parts.is_null() ? nlohmann::json(m.content)
                                                                    : m.parts}});
  return {{"model", model},
          {"messages", msgs},
          {"temperature", temperature},
          {"max_tokens", max_tokens}};
}

ChatResponse endpoint_call(const EndpointSpec& spec, const ChatRequest& request) {
  spec.validate();
  const std::string body = request.to_json().dump();
  const std::string req_digest = support::sha256(body).hex().substr(0, 12);

  httplib::Client client(spec.base_url);
  client.set_connection_timeout(0, spec.timeout_ms * 1000);
  client.set_read_timeout(0, spec.timeout_ms * 1000);
  client.set_write_timeout(0, spec.timeout_ms * 1000);
  httplib::Headers headers;
  if (!spec.auth_env.empty()) {
    if (const char* token = std::getenv(spec.auth_env.c_str()))
      headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error;
  int backoff = spec.backoff_ms;
  for (int attempt = 1; attempt <= spec.retries + 1; ++attempt) {
    auto res = client.Post("/v1/chat/completions", headers, body, "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      std::fprintf(stderr, "[endpoint] req=%s attempt=%d %s\n", req_digest.c_str(), attempt,
                   last_error.c_str());
    } else {
      const std::string resp_digest = support::sha256(res->body).hex().substr(0, 12);
      std::fprintf(stderr, "[endpoint] req=%s attempt=%d status=%d resp=%s\n", req_digest.c_str(),
                   attempt, res->status, resp_digest.c_str());
      if (res->status >= 200 && res->status < 300) {
        try {
          auto j = nlohmann::json::parse(res->body);
          ChatResponse out;
          out.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
          out.status = res->status;
          out.attempts = attempt;
          return out;
        } catch (const nlohmann::json::exception& e) {
          throw EndpointError(std::string("malformed completion response: ") + e.what());
        }
      }
      if (res->status < 500)
        throw EndpointError("endpoint rejected request with status " +
                            std::to_string(res->status));
      last_error = "status " + std::to_string(res->status);
    }
    if (attempt <= spec.retries) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff = std::min(backoff * 2, 1000);
    }
  }
  throw EndpointError("endpoint unreachable after " + std::to_string(spec.retries + 1) +
                      " attempts (" + last_error + ")");
}

}  // namespace claw::ctl
