#include "claw/credit/credit.hpp"

#include <cmath>
#include <stdexcept>

namespace claw::credit {

namespace {

void require_group(const RolloutGroup& group) {
  if (group.trajectories.size() < 2)
    throw std::invalid_argument("group normalization needs at least 2 trajectories");
}

struct Moments {
  double mean = 0.0;
  double popstd = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.popstd = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

AdvantageSet zero_shaped(const RolloutGroup& group) {
  AdvantageSet out;
  out.episode_adv.assign(group.trajectories.size(), 0.0);
  for (const auto& t : group.trajectories) {
    out.step_adv.emplace_back(t.steps.size(), 0.0);
    out.combined_adv.emplace_back(t.steps.size(), 0.0);
  }
  return out;
}

}  // namespace

std::vector<double> episode_returns(const RolloutGroup& group) {
  std::vector<double> out;
  out.reserve(group.trajectories.size());
  for (const auto& t : group.trajectories) {
    double r = 0.0;
    for (const auto& s : t.steps) r += s.reward;
    out.push_back(r);
  }
  return out;
}

AdvantageSet grpo_advantages(const RolloutGroup& group, const CreditConfig& cfg) {
  require_group(group);
  const auto returns = episode_returns(group);
  const auto m = moments(returns);
  const double denom = std::max(m.popstd, cfg.std_floor);

  AdvantageSet out = zero_shaped(group);
  for (std::size_t i = 0; i < returns.size(); ++i) {
    const double a = (returns[i] - m.mean) / denom;
    out.episode_adv[i] = a;
    for (double& c : out.combined_adv[i]) c = a;
  }
  return out;
}

std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma) {
  std::vector<double> g(rewards.size(), 0.0);
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    g[t] = acc;
  }
  return g;
}

std::map<simdevice::AnchorKey, std::vector<std::pair<int, int>>> anchor_groups(
    const RolloutGroup& group) {
  std::map<simdevice::AnchorKey, std::vector<std::pair<int, int>>> out;
  for (std::size_t i = 0; i < group.trajectories.size(); ++i) {
    const auto& steps = group.trajectories[i].steps;
    for (std::size_t t = 0; t < steps.size(); ++t) {
      out[steps[t].anchor].emplace_back(static_cast<int>(i), static_cast<int>(t));
    }
  }
  return out;
}

AdvantageSet gigpo_advantages(const RolloutGroup& group, const CreditConfig& cfg) {
  AdvantageSet out = grpo_advantages(group, cfg);
  if (cfg.omega == 0.0) return out;  // exact reduction to the episode-level estimator

  std::vector<std::vector<double>> disc;
  disc.reserve(group.trajectories.size());
  for (const auto& t : group.trajectories) {
    std::vector<double> rewards;
    rewards.reserve(t.steps.size());
    for (const auto& s : t.steps) rewards.push_back(s.reward);
    disc.push_back(discounted_returns(rewards, cfg.gamma));
  }

  for (const auto& [anchor, members] : anchor_groups(group)) {
    if (members.size() < 2) continue;  // singleton buckets keep step_adv 0
    std::vector<double> gs;
    gs.reserve(members.size());
    for (const auto& [i, t] : members) gs.push_back(disc[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
    const auto m = moments(gs);
    const double denom = std::max(m.popstd, cfg.std_floor);
    for (std::size_t k = 0; k < members.size(); ++k) {
      const auto [i, t] = members[k];
      out.step_adv[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] = (gs[k] - m.mean) / denom;
    }
  }

  for (std::size_t i = 0; i < out.combined_adv.size(); ++i) {
    for (std::size_t t = 0; t < out.combined_adv[i].size(); ++t) {
      out.combined_adv[i][t] = out.episode_adv[i] + cfg.omega * out.step_adv[i][t];
    }
  }
  return out;
}

}  // namespace claw::credit
