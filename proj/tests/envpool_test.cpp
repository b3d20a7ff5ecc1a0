#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "claw/envpool/pool.hpp"
#include "claw/simdevice/suite.hpp"
#include "support/mock_server.hpp"

using namespace claw;
using envpool::EnvPool;
using envpool::Lease;
using envpool::PoolConfig;

namespace {

const std::string kAppsDir = std::string(CLAW_SOURCE_DIR) + "/data/apps";
const std::string kSuitePath = std::string(CLAW_SOURCE_DIR) + "/data/tasks/suite.json";

simdevice::FaultPlan plan_of(double stall, double crash, std::uint64_t seed) {
  simdevice::FaultPlan p;
  p.stall_prob = stall;
  p.crash_prob = crash;
  p.rng_seed = seed;
  return p;
}

// Replays the task's reference solution on the leased env, restarting from
// reset on every injected fault via spare rotation. Returns the rotation
// count; `faults` accumulates every EnvFaultedError seen and `log`, when
// given, the anchor of every observation (restarts included).
int run_episode_with_rotation(EnvPool& pool, Lease& lease, const simdevice::SuiteTask& st,
                              int& faults, std::vector<simdevice::AnchorKey>* log = nullptr) {
  int rotations = 0;
  for (;;) {
    auto obs = lease.obs;
    if (log) log->push_back(simdevice::anchor_hash(obs));
    bool restart = false;
    for (std::size_t i = 0; i < st.reference_solution.size();) {
      auto action = simdevice::bind_reference_step(st.reference_solution[i], obs.state);
      try {
        auto r = lease.env->step(action);
        obs = r.obs;
        if (log) log->push_back(simdevice::anchor_hash(obs));
        ++i;
        if (r.terminal) break;
      } catch (const simdevice::EnvFaultedError&) {
        ++faults;
        pool.health_check(lease.env_id);
        lease = pool.rotate_spare(lease);
        ++rotations;
        restart = true;
        break;
      }
    }
    if (!restart) return rotations;
  }
}

}  // namespace

TEST_CASE("acquire leases and release returns to idle") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  PoolConfig cfg;
  cfg.pool_size = 2;
  EnvPool pool(cfg, registry);
  pool.init();

  auto lease = pool.acquire(st.task, "w0");
  auto d = pool.doctor();
  CHECK(d.leased == 1);
  CHECK(d.idle == 1);
  CHECK(lease.obs.state.app_id == "settings");

  pool.release(lease);
  d = pool.doctor();
  CHECK(d.leased == 0);
  CHECK(d.idle == 2);
  CHECK(d.episodes_served == 1);
}

TEST_CASE("leases are exclusive and a blocked acquire resumes on release") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  PoolConfig cfg;
  cfg.pool_size = 1;
  cfg.acquire_wait_ms = 5000;
  EnvPool pool(cfg, registry);
  pool.init();

  auto first = pool.acquire(st.task, "w0");
  std::atomic<bool> acquired{false};
  std::thread waiter([&] {
    auto second = pool.acquire(st.task, "w1");
    acquired = true;
    pool.release(second);
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  CHECK_FALSE(acquired.load());
  pool.release(first);
  waiter.join();
  CHECK(acquired.load());
}

TEST_CASE("pool guards initialization, ownership, and exhaustion") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  PoolConfig cfg;
  cfg.pool_size = 1;
  cfg.acquire_wait_ms = 50;
  EnvPool pool(cfg, registry);

  CHECK_THROWS_AS(pool.acquire(st.task, "w0"), envpool::PoolNotInitialized);
  pool.init();

  auto lease = pool.acquire(st.task, "w0");
  CHECK_THROWS_AS(pool.acquire(st.task, "w1"), envpool::PoolExhausted);

  auto stolen = lease;
  stolen.worker_id = "intruder";
  CHECK_THROWS_AS(pool.release(stolen), envpool::NotLeaseOwner);
  pool.release(lease);
  CHECK_THROWS_AS(pool.release(lease), envpool::NotLeaseOwner);

  pool.teardown_all();
  pool.teardown_all();  // idempotent
  CHECK_THROWS_AS(pool.acquire(st.task, "w0"), envpool::PoolNotInitialized);
  auto d = pool.doctor();
  CHECK_FALSE(d.initialized);
  CHECK(d.retired == 1);
}

TEST_CASE("health probes are pure with respect to the episode trajectory") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("vault.star_sunset");

  PoolConfig cfg;
  cfg.pool_size = 1;
  EnvPool pool(cfg, registry);
  pool.init();

  std::vector<std::vector<simdevice::AnchorKey>> runs;
  for (int probed = 0; probed < 2; ++probed) {
    auto lease = pool.acquire(st.task, "w0");
    std::vector<simdevice::AnchorKey> anchors{simdevice::anchor_hash(lease.obs)};
    auto obs = lease.obs;
    for (const auto& ref : st.reference_solution) {
      if (probed) CHECK(pool.health_check(lease.env_id).healthy);
      auto r = lease.env->step(simdevice::bind_reference_step(ref, obs.state));
      obs = r.obs;
      anchors.push_back(simdevice::anchor_hash(obs));
      if (r.terminal) break;
    }
    runs.push_back(anchors);
    pool.release(lease);
  }
  CHECK(runs[0] == runs[1]);
}

TEST_CASE("a faulted env rotates to a spare that restarts the episode") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  PoolConfig cfg;
  cfg.pool_size = 1;
  cfg.spare_count = 1;
  cfg.replenish_spares = false;
  cfg.fault_plan = plan_of(1.0, 0.0, 7);  // stall on the very first step
  EnvPool pool(cfg, registry);
  pool.init();

  auto lease = pool.acquire(st.task, "w0");
  CHECK_THROWS_AS(lease.env->step(simdevice::Action::back()), simdevice::EnvFaultedError);

  CHECK_THROWS_AS(pool.rotate_spare(lease), std::logic_error);  // not yet marked
  auto probe = pool.health_check(lease.env_id);
  CHECK_FALSE(probe.healthy);
  CHECK(probe.reason == "stall");

  auto fresh = pool.rotate_spare(lease);
  CHECK(fresh.env_id != lease.env_id);
  CHECK(fresh.obs.state.app_id == "settings");
  CHECK(fresh.obs.step_index == 0);

  auto d = pool.doctor();
  CHECK(d.retired == 1);
  CHECK(d.spare_depth == 0);
  CHECK(d.spares_promoted == 1);
  REQUIRE(d.rotations.size() == 1);
  CHECK(d.rotations[0].retired_env == lease.env_id);
  CHECK(d.rotations[0].promoted_env == fresh.env_id);
  CHECK(d.rotations[0].task_id == st.task.task_id);

  // The promoted env stalls too (same plan), and the queue is now empty.
  CHECK_THROWS_AS(fresh.env->step(simdevice::Action::back()), simdevice::EnvFaultedError);
  pool.health_check(fresh.env_id);
  CHECK_THROWS_AS(pool.rotate_spare(fresh), envpool::SparesExhausted);
}

TEST_CASE("acquire rotates an unhealthy idle env through the spare queue") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  PoolConfig cfg;
  cfg.pool_size = 1;
  cfg.spare_count = 3;
  cfg.replenish_spares = false;
  cfg.fault_plan = plan_of(0.0, 1.0, 7);  // crash on every step
  EnvPool pool(cfg, registry);
  pool.init();

  // Crash the active env mid-episode, then hand it back without rotating:
  // the sticky flag stays with the device.
  auto lease = pool.acquire(st.task, "w0");
  CHECK_THROWS_AS(lease.env->step(simdevice::Action::back()), simdevice::EnvFaultedError);
  pool.release(lease);

  auto next = pool.acquire(st.task, "w1");
  CHECK(next.env_id != lease.env_id);
  auto d = pool.doctor();
  CHECK(d.spare_depth == 2);
  CHECK(d.spares_promoted == 1);
  REQUIRE(d.rotations.size() == 1);
  CHECK(d.rotations[0].reason == "crash");
}

TEST_CASE("periodic teardown recreates an env that replays like new") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("messenger.alice_roger");

  PoolConfig cfg;
  cfg.pool_size = 1;
  cfg.teardown_every_episodes = 2;
  EnvPool pool(cfg, registry);
  pool.init();

  auto run_once = [&](std::vector<simdevice::AnchorKey>& out) {
    auto lease = pool.acquire(st.task, "w0");
    auto obs = lease.obs;
    out.push_back(simdevice::anchor_hash(obs));
    for (const auto& ref : st.reference_solution) {
      auto r = lease.env->step(simdevice::bind_reference_step(ref, obs.state));
      obs = r.obs;
      out.push_back(simdevice::anchor_hash(obs));
      if (r.terminal) break;
    }
    pool.release(lease);
  };

  std::vector<simdevice::AnchorKey> first, second, third;
  run_once(first);
  run_once(second);  // teardown fires after this release
  CHECK(pool.doctor().teardowns == 1);
  run_once(third);  // recreated env
  CHECK(first == second);
  CHECK(first == third);
}

TEST_CASE("teardown then init replays identical trajectories under the same seeds") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);

  PoolConfig cfg;
  cfg.pool_size = 2;
  cfg.spare_count = 2;
  cfg.fault_plan = plan_of(0.10, 0.05, 99);
  EnvPool pool(cfg, registry, 1234);

  auto run_schedule = [&] {
    pool.init();
    std::vector<simdevice::AnchorKey> log;
    int faults = 0;
    for (const char* id : {"settings.wifi_on", "vault.star_sunset", "files.fav_report",
                           "messenger.alice_roger", "settings.brightness_100"}) {
      const auto& st = suite.find(id);
      auto lease = pool.acquire(st.task, "w0");
      run_episode_with_rotation(pool, lease, st, faults, &log);
      pool.release(lease);
    }
    pool.teardown_all();
    return std::make_pair(log, faults);
  };

  auto a = run_schedule();
  auto b = run_schedule();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  CHECK(a.second > 0);  // the plan actually injects faults on this schedule
}

TEST_CASE("sustained faults rotate exactly once per fault with zero aborts") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);

  PoolConfig cfg;
  cfg.pool_size = 8;
  cfg.spare_count = 4;
  cfg.fault_plan = plan_of(0.03, 0.02, 2024);
  EnvPool pool(cfg, registry);
  pool.init();

  int faults = 0;
  int rotations = 0;
  int aborts = 0;
  const auto& tasks = suite.tasks();
  for (int ep = 0; ep < 60; ++ep) {
    const auto& st = tasks[static_cast<std::size_t>(ep) % tasks.size()];
    try {
      auto lease = pool.acquire(st.task, "w0");
      rotations += run_episode_with_rotation(pool, lease, st, faults);
      pool.release(lease);
    } catch (const envpool::SparesExhausted&) {
      ++aborts;
    } catch (const envpool::PoolExhausted&) {
      ++aborts;
    }
  }
  CHECK(aborts == 0);
  CHECK(faults > 0);
  CHECK(rotations == faults);
  auto d = pool.doctor();
  CHECK(static_cast<int>(d.rotations.size()) == rotations);
  CHECK(d.spares_promoted == rotations);
  // Conservation: every handle ever created is exactly one of the four
  // statuses, and promoted spares account for the created-minus-idle gap.
  CHECK(d.idle + d.leased + d.unhealthy + d.retired ==
        cfg.pool_size + d.spares_created);
  CHECK(d.spares_promoted == d.spares_created - d.spare_depth);
  CHECK(d.episodes_served == 60);
}

TEST_CASE("concurrent workers drain the pool without losing leases") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);

  PoolConfig cfg;
  cfg.pool_size = 4;
  cfg.spare_count = 4;
  cfg.fault_plan = plan_of(0.02, 0.02, 5);
  EnvPool pool(cfg, registry);
  pool.init();

  std::atomic<int> completed{0};
  std::atomic<int> aborted{0};
  auto worker = [&](int wid) {
    for (int ep = 0; ep < 10; ++ep) {
      const auto& st = suite.tasks()[static_cast<std::size_t>(wid * 10 + ep) %
                                     suite.tasks().size()];
      int faults = 0;
      try {
        auto lease = pool.acquire(st.task, "w" + std::to_string(wid));
        run_episode_with_rotation(pool, lease, st, faults);
        pool.release(lease);
        ++completed;
      } catch (...) {
        ++aborted;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < 8; ++w) threads.emplace_back(worker, w);
  for (auto& t : threads) t.join();

  CHECK(completed.load() == 80);
  CHECK(aborted.load() == 0);
  auto d = pool.doctor();
  CHECK(d.leased == 0);
  CHECK(d.episodes_served == 80);
}

TEST_CASE("remote envs speak the wire protocol of the simulated backend") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  mock::DeviceServer server(registry);
  server.start();
  envpool::RemoteEnv remote("remote-0", server.base_url());

  CHECK(remote.probe().healthy);
  auto obs = remote.reset(st.task);

  simdevice::SimDevice local(registry);
  auto lobs = local.reset(st.task);
  CHECK(simdevice::anchor_hash(obs) == simdevice::anchor_hash(lobs));
  CHECK(obs.step_index == 0);

  for (const auto& ref : st.reference_solution) {
    auto action = simdevice::bind_reference_step(ref, obs.state);
    auto r = remote.step(action);
    auto l = local.step(action);
    CHECK(simdevice::anchor_hash(r.obs) == simdevice::anchor_hash(l.obs));
    CHECK(r.terminal == l.terminal);
    if (r.terminal) {
      REQUIRE(r.outcome_hint.has_value());
      CHECK(*r.outcome_hint == 1);
    }
    obs = r.obs;
  }
}

TEST_CASE("remote faults surface as env faults and unhealthy probes") {
  simdevice::AppRegistry registry(kAppsDir);
  auto suite = simdevice::TaskSuite::load_file(kSuitePath);
  const auto& st = suite.find("settings.wifi_on");

  mock::DeviceServer server(registry);
  server.device().inject(plan_of(1.0, 0.0, 3));
  server.start();
  envpool::RemoteEnv remote("remote-0", server.base_url());

  remote.reset(st.task);
  CHECK_THROWS_AS(remote.step(simdevice::Action::back()), simdevice::EnvFaultedError);
  auto probe = remote.probe();
  CHECK_FALSE(probe.healthy);
  CHECK(probe.reason == "stall");

  server.stop();
  CHECK_FALSE(remote.probe().healthy);
  CHECK_THROWS_AS(remote.reset(st.task), std::runtime_error);
}
