#pragma once

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "claw/envpool/env.hpp"
#include "claw/simdevice/app_graph.hpp"

namespace claw::envpool {

struct PoolExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SparesExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotLeaseOwner : std::logic_error {
  using std::logic_error::logic_error;
};
struct PoolNotInitialized : std::logic_error {
  using std::logic_error::logic_error;
};

enum class EnvStatus { idle, leased, unhealthy, retired };
const char* to_string(EnvStatus s);

struct PoolConfig {
  int pool_size = 64;
  int spare_count = 0;
  int health_timeout_ms = 1000;
  int teardown_every_episodes = 50;
  std::optional<simdevice::FaultPlan> fault_plan;
  int acquire_wait_ms = 30000;
  // Rotation promotes a spare and, when set, immediately restocks the queue
  // with a fresh env so long chaos runs never drain it.
  bool replenish_spares = true;

  void validate() const;
};

struct Lease {
  std::string env_id;
  std::string worker_id;
  Env* env = nullptr;
  simdevice::Observation obs;  // from the reset performed at acquire/rotate
  simdevice::TaskSpec task;
};

struct RotationEvent {
  std::string retired_env;
  std::string promoted_env;
  std::string task_id;
  std::string worker_id;
  std::string reason;
};

struct DoctorReport {
  bool initialized = false;
  int idle = 0;
  int leased = 0;
  int unhealthy = 0;
  int retired = 0;
  int spare_depth = 0;
  int spares_created = 0;
  int spares_promoted = 0;
  long episodes_served = 0;
  int teardowns = 0;
  std::vector<RotationEvent> rotations;
};

void to_json(nlohmann::json& j, const RotationEvent& e);
void to_json(nlohmann::json& j, const DoctorReport& r);

// Shared service over many simulated envs. acquire/release/rotate/health_check
// are mutually atomic and safe under concurrent rollout workers; interaction
// with a leased env is exclusive to its owner. Each env's fault stream is
// seeded from (fault_plan.rng_seed, env_id, generation), so runs replay
// exactly under a fixed schedule.
class EnvPool {
 public:
  EnvPool(const PoolConfig& cfg, const simdevice::AppRegistry& registry,
          std::uint64_t base_seed = 0);

  // Creates pool_size active envs plus spare_count spares. Re-initializable
  // after teardown_all; previously retired handles stay in the books.
  void init();
  bool initialized() const;

  // Blocks up to acquire_wait_ms for a healthy idle env, rotating unhealthy
  // idle ones through the spare queue on the way. The env comes back already
  // reset to the task.
  Lease acquire(const simdevice::TaskSpec& task, const std::string& worker_id);

  // Pure probe; flips pool status to unhealthy on a bad report. Throws
  // std::logic_error on retired handles.
  ProbeResult health_check(const std::string& env_id);

  // pre: the leased env was marked unhealthy. Retires it, promotes a spare
  // reset to the same task, and transfers the lease. The caller restarts the
  // episode from the fresh observation; the partial trajectory is discarded.
  Lease rotate_spare(const Lease& lease);

  // Returns the env to the idle set. Every teardown_every_episodes served,
  // the backing device is recreated fresh first.
  void release(const Lease& lease);

  // Retires everything; idempotent. Use requires init() again.
  void teardown_all();

  DoctorReport doctor() const;

 private:
  struct Entry {
    std::string env_id;
    std::unique_ptr<Env> env;
    EnvStatus status = EnvStatus::idle;
    bool is_spare = false;
    std::string lease_owner;
    long episodes_served = 0;
    int generation = 0;
  };

  std::unique_ptr<Env> make_env(const std::string& env_id, int generation) const;
  Entry& checked_entry(const std::string& env_id);
  Entry* promote_spare_locked(Entry& broken, const simdevice::TaskSpec& task,
                              const std::string& worker_id, const std::string& reason);

  PoolConfig cfg_;
  const simdevice::AppRegistry* registry_;
  std::uint64_t base_seed_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool initialized_ = false;
  std::vector<std::unique_ptr<Entry>> entries_;
  int spawned_ = 0;
  int spares_created_ = 0;
  int spares_promoted_ = 0;
  long episodes_total_ = 0;
  int teardowns_ = 0;
  std::vector<RotationEvent> rotations_;
};

}  // namespace claw::envpool
