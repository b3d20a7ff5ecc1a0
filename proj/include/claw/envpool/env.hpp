#pragma once

#include <memory>
#include <string>

#include "claw/simdevice/device.hpp"
#include "claw/simdevice/types.hpp"

namespace claw::envpool {

struct ProbeResult {
  bool healthy = true;
  std::string reason;  // "stall" / "crash" / transport detail when unhealthy
};

// Unified backend: simulated devices and remote device servers are
// interchangeable behind reset/step/probe.
class Env {
 public:
  virtual ~Env() = default;
  virtual const std::string& env_id() const = 0;
  virtual simdevice::Observation reset(const simdevice::TaskSpec& task) = 0;
  virtual simdevice::StepResult step(const simdevice::Action& action) = 0;
  // Side-effect free; never throws.
  virtual ProbeResult probe() = 0;
  // Re-arms the fault stream. Rollout collectors inject per-episode plans so
  // trajectories replay independently of which env served them; backends
  // without fault control ignore it.
  virtual void configure_faults(const simdevice::FaultPlan&) {}
};

class SimEnv final : public Env {
 public:
  SimEnv(std::string env_id, const simdevice::AppRegistry& registry,
         const simdevice::FaultPlan& plan);

  const std::string& env_id() const override { return env_id_; }
  simdevice::Observation reset(const simdevice::TaskSpec& task) override;
  simdevice::StepResult step(const simdevice::Action& action) override;
  ProbeResult probe() override;
  void configure_faults(const simdevice::FaultPlan& plan) override { device_.inject(plan); }

 private:
  std::string env_id_;
  simdevice::SimDevice device_;
};

// Wire-protocol client for a remote device server:
//   POST /env/reset  {task}            -> {observation}
//   POST /env/step   {action}          -> {observation, terminal, outcome?} | 503 {fault}
//   GET  /env/probe                    -> {healthy, reason}
// Fault responses surface as EnvFaultedError, matching the simulated backend.
class RemoteEnv final : public Env {
 public:
  RemoteEnv(std::string env_id, std::string base_url, int timeout_ms = 5000);
  ~RemoteEnv() override;

  const std::string& env_id() const override { return env_id_; }
  simdevice::Observation reset(const simdevice::TaskSpec& task) override;
  simdevice::StepResult step(const simdevice::Action& action) override;
  ProbeResult probe() override;

 private:
  struct Impl;
  std::string env_id_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace claw::envpool
