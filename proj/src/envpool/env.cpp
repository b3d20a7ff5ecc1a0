#include "claw/envpool/env.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace claw::envpool {

SimEnv::SimEnv(std::string env_id, const simdevice::AppRegistry& registry,
               const simdevice::FaultPlan& plan)
    : env_id_(std::move(env_id)), device_(registry) {
  device_.inject(plan);
}

simdevice::Observation SimEnv::reset(const simdevice::TaskSpec& task) {
  return device_.reset(task);
}

simdevice::StepResult SimEnv::step(const simdevice::Action& action) {
  return device_.step(action);
}

ProbeResult SimEnv::probe() {
  switch (device_.health()) {
    case simdevice::SimDevice::Health::healthy: return {true, ""};
    case simdevice::SimDevice::Health::stalled: return {false, "stall"};
    case simdevice::SimDevice::Health::crashed: return {false, "crash"};
  }
  return {true, ""};
}

struct RemoteEnv::Impl {
  httplib::Client client;
  explicit Impl(const std::string& base_url, int timeout_ms) : client(base_url) {
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(0, timeout_ms * 1000);
    client.set_write_timeout(0, timeout_ms * 1000);
  }
};

RemoteEnv::RemoteEnv(std::string env_id, std::string base_url, int timeout_ms)
    : env_id_(std::move(env_id)), impl_(std::make_unique<Impl>(base_url, timeout_ms)) {}

RemoteEnv::~RemoteEnv() = default;

namespace {

simdevice::FaultKind fault_kind_of(const std::string& body) {
  try {
    auto j = nlohmann::json::parse(body);
    if (j.value("fault", "") == "stall") return simdevice::FaultKind::stall;
  } catch (const nlohmann::json::exception&) {
  }
  return simdevice::FaultKind::crash;
}

}  // namespace

simdevice::Observation RemoteEnv::reset(const simdevice::TaskSpec& task) {
  auto res = impl_->client.Post("/env/reset", nlohmann::json(task).dump(), "application/json");
  if (!res) throw std::runtime_error("remote env unreachable: " + env_id_);
  if (res->status == 503) throw simdevice::EnvFaultedError(fault_kind_of(res->body));
  if (res->status != 200)
    throw std::runtime_error("remote reset failed with status " + std::to_string(res->status));
  return nlohmann::json::parse(res->body).at("observation").get<simdevice::Observation>();
}

simdevice::StepResult RemoteEnv::step(const simdevice::Action& action) {
  auto res = impl_->client.Post("/env/step", nlohmann::json(action).dump(), "application/json");
  if (!res) throw std::runtime_error("remote env unreachable: " + env_id_);
  if (res->status == 503) throw simdevice::EnvFaultedError(fault_kind_of(res->body));
  if (res->status != 200)
    throw std::runtime_error("remote step failed with status " + std::to_string(res->status));
  auto j = nlohmann::json::parse(res->body);
  simdevice::StepResult out;
  out.obs = j.at("observation").get<simdevice::Observation>();
  out.terminal = j.at("terminal").get<bool>();
  if (j.contains("outcome") && !j.at("outcome").is_null())
    out.outcome_hint = j.at("outcome").get<int>();
  return out;
}

ProbeResult RemoteEnv::probe() {
  auto res = impl_->client.Get("/env/probe");
  if (!res) return {false, "transport: " + httplib::to_string(res.error())};
  if (res->status != 200) return {false, "status " + std::to_string(res->status)};
  try {
    auto j = nlohmann::json::parse(res->body);
    return {j.at("healthy").get<bool>(), j.value("reason", "")};
  } catch (const nlohmann::json::exception& e) {
    return {false, std::string("malformed probe response: ") + e.what()};
  }
}

}  // namespace claw::envpool
