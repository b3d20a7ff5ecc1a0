#include "claw/envpool/pool.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "claw/support/rand.hpp"

namespace claw::envpool {

const char* to_string(EnvStatus s) {
  switch (s) {
    case EnvStatus::idle: return "idle";
    case EnvStatus::leased: return "leased";
    case EnvStatus::unhealthy: return "unhealthy";
    case EnvStatus::retired: return "retired";
  }
  return "idle";
}

void PoolConfig::validate() const {
  if (pool_size < 1) throw std::invalid_argument("pool_size must be at least 1");
  if (spare_count < 0) throw std::invalid_argument("spare_count must be non-negative");
  if (health_timeout_ms <= 0) throw std::invalid_argument("health_timeout_ms must be positive");
  if (teardown_every_episodes < 1)
    throw std::invalid_argument("teardown_every_episodes must be at least 1");
  if (acquire_wait_ms <= 0) throw std::invalid_argument("acquire_wait_ms must be positive");
  if (fault_plan) {
    if (fault_plan->stall_prob < 0.0 || fault_plan->crash_prob < 0.0 ||
        fault_plan->stall_prob + fault_plan->crash_prob > 1.0)
      throw std::invalid_argument("fault probabilities must be non-negative and sum to at most 1");
  }
}

void to_json(nlohmann::json& j, const RotationEvent& e) {
  j = nlohmann::json{{"retired_env", e.retired_env},
                     {"promoted_env", e.promoted_env},
                     {"task_id", e.task_id},
                     {"worker_id", e.worker_id},
                     {"reason", e.reason}};
}

void to_json(nlohmann::json& j, const DoctorReport& r) {
  j = nlohmann::json{{"initialized", r.initialized},
                     {"counts",
                      {{"idle", r.idle},
                       {"leased", r.leased},
                       {"unhealthy", r.unhealthy},
                       {"retired", r.retired}}},
                     {"spare_depth", r.spare_depth},
                     {"spares_created", r.spares_created},
                     {"spares_promoted", r.spares_promoted},
                     {"episodes_served", r.episodes_served},
                     {"teardowns", r.teardowns},
                     {"rotations", r.rotations}};
}

EnvPool::EnvPool(const PoolConfig& cfg, const simdevice::AppRegistry& registry,
                 std::uint64_t base_seed)
    : cfg_(cfg), registry_(&registry), base_seed_(base_seed) {
  cfg_.validate();
}

std::unique_ptr<Env> EnvPool::make_env(const std::string& env_id, int generation) const {
  simdevice::FaultPlan plan;
  if (cfg_.fault_plan) plan = *cfg_.fault_plan;
  plan.rng_seed = support::derive_seed(
      cfg_.fault_plan ? cfg_.fault_plan->rng_seed : base_seed_,
      {env_id, std::to_string(generation)});
  return std::make_unique<SimEnv>(env_id, *registry_, plan);
}

void EnvPool::init() {
  std::lock_guard<std::mutex> lk(mu_);
  if (initialized_) return;
  // Ids restart per init so fault-stream seeds replay across teardown cycles;
  // lookups skip retired entries, so reused ids are unambiguous.
  spawned_ = 0;
  for (int i = 0; i < cfg_.pool_size + cfg_.spare_count; ++i) {
    auto e = std::make_unique<Entry>();
    e->env_id = "env-" + std::to_string(spawned_++);
    e->is_spare = i >= cfg_.pool_size;
    e->env = make_env(e->env_id, e->generation);
    if (e->is_spare) ++spares_created_;
    entries_.push_back(std::move(e));
  }
  initialized_ = true;
  cv_.notify_all();
}

bool EnvPool::initialized() const {
  std::lock_guard<std::mutex> lk(mu_);
  return initialized_;
}

EnvPool::Entry& EnvPool::checked_entry(const std::string& env_id) {
  for (auto& e : entries_)
    if (e->env_id == env_id && e->status != EnvStatus::retired) return *e;
  throw std::logic_error("no live env with id " + env_id);
}

EnvPool::Entry* EnvPool::promote_spare_locked(Entry& broken, const simdevice::TaskSpec& task,
                                              const std::string& worker_id,
                                              const std::string& reason) {
  Entry* spare = nullptr;
  for (auto& e : entries_) {
    if (e->is_spare && e->status == EnvStatus::idle) {
      spare = e.get();
      break;
    }
  }
  if (spare == nullptr) {
    broken.lease_owner.clear();
    return nullptr;
  }
  broken.status = EnvStatus::retired;
  broken.lease_owner.clear();
  spare->is_spare = false;
  spare->status = EnvStatus::leased;
  spare->lease_owner = worker_id;
  ++spares_promoted_;
  rotations_.push_back({broken.env_id, spare->env_id, task.task_id, worker_id, reason});
  if (cfg_.replenish_spares) {
    auto e = std::make_unique<Entry>();
    e->env_id = "env-" + std::to_string(spawned_++);
    e->is_spare = true;
    e->env = make_env(e->env_id, e->generation);
    ++spares_created_;
    entries_.push_back(std::move(e));
  }
  return spare;
}

Lease EnvPool::acquire(const simdevice::TaskSpec& task, const std::string& worker_id) {
  std::unique_lock<std::mutex> lk(mu_);
  if (!initialized_) throw PoolNotInitialized("acquire on a torn-down pool");
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg_.acquire_wait_ms);
  for (;;) {
    for (auto& e : entries_) {
      if (e->is_spare || e->status != EnvStatus::idle) continue;
      auto probe = e->env->probe();
      if (probe.healthy) {
        e->status = EnvStatus::leased;
        e->lease_owner = worker_id;
        auto obs = e->env->reset(task);
        return {e->env_id, worker_id, e->env.get(), obs, task};
      }
      e->status = EnvStatus::unhealthy;
      Entry* fresh = promote_spare_locked(*e, task, worker_id, probe.reason);
      if (fresh != nullptr) {
        auto obs = fresh->env->reset(task);
        return {fresh->env_id, worker_id, fresh->env.get(), obs, task};
      }
    }
    if (cv_.wait_until(lk, deadline) == std::cv_status::timeout)
      throw PoolExhausted("no healthy env became available within the wait bound");
  }
}

ProbeResult EnvPool::health_check(const std::string& env_id) {
  std::lock_guard<std::mutex> lk(mu_);
  if (!initialized_) throw PoolNotInitialized("health_check on a torn-down pool");
  Entry& e = checked_entry(env_id);
  auto probe = e.env->probe();
  if (!probe.healthy) e.status = EnvStatus::unhealthy;
  return probe;
}

Lease EnvPool::rotate_spare(const Lease& lease) {
  std::lock_guard<std::mutex> lk(mu_);
  if (!initialized_) throw PoolNotInitialized("rotate_spare on a torn-down pool");
  Entry& e = checked_entry(lease.env_id);
  if (e.status != EnvStatus::unhealthy)
    throw std::logic_error("rotate_spare requires an unhealthy env, got status " +
                           std::string(to_string(e.status)));
  if (e.lease_owner != lease.worker_id)
    throw NotLeaseOwner("env " + lease.env_id + " is not leased by " + lease.worker_id);
  Entry* fresh = promote_spare_locked(e, lease.task, lease.worker_id, "rotation");
  if (fresh == nullptr) throw SparesExhausted("spare queue is empty");
  auto obs = fresh->env->reset(lease.task);
  cv_.notify_all();
  return {fresh->env_id, lease.worker_id, fresh->env.get(), obs, lease.task};
}

void EnvPool::release(const Lease& lease) {
  std::lock_guard<std::mutex> lk(mu_);
  if (!initialized_) throw PoolNotInitialized("release on a torn-down pool");
  Entry& e = checked_entry(lease.env_id);
  if (e.status != EnvStatus::leased || e.lease_owner != lease.worker_id)
    throw NotLeaseOwner("env " + lease.env_id + " is not leased by " + lease.worker_id);
  e.lease_owner.clear();
  ++e.episodes_served;
  ++episodes_total_;
  if (e.episodes_served % cfg_.teardown_every_episodes == 0) {
    ++e.generation;
    e.env = make_env(e.env_id, e.generation);
    ++teardowns_;
  }
  e.status = EnvStatus::idle;
  cv_.notify_all();
}

void EnvPool::teardown_all() {
  std::lock_guard<std::mutex> lk(mu_);
  for (auto& e : entries_) {
    e->status = EnvStatus::retired;
    e->lease_owner.clear();
    e->env.reset();
  }
  initialized_ = false;
  cv_.notify_all();
}

DoctorReport EnvPool::doctor() const {
  std::lock_guard<std::mutex> lk(mu_);
  DoctorReport r;
  r.initialized = initialized_;
  for (const auto& e : entries_) {
    switch (e->status) {
      case EnvStatus::idle: ++r.idle; break;
      case EnvStatus::leased: ++r.leased; break;
      case EnvStatus::unhealthy: ++r.unhealthy; break;
      case EnvStatus::retired: ++r.retired; break;
    }
    if (e->is_spare && e->status == EnvStatus::idle) ++r.spare_depth;
  }
  r.spares_created = spares_created_;
  r.spares_promoted = spares_promoted_;
  r.episodes_served = episodes_total_;
  r.teardowns = teardowns_;
  r.rotations = rotations_;
  return r;
}

}  // namespace claw::envpool
