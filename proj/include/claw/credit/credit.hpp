#pragma once

#include <map>
#include <utility>
#include <vector>

#include "claw/trajectory.hpp"

namespace claw::credit {

struct CreditConfig {
  double gamma = 0.95;     // discount for step-level returns
  double omega = 1.0;      // weight of the step-level advantage
  double std_floor = 1e-8; // denominator floor for group normalization
};

// Shapes align with the group's trajectories: one episode_adv per trajectory,
// one step_adv/combined_adv per step.
struct AdvantageSet {
  std::vector<double> episode_adv;
  std::vector<std::vector<double>> step_adv;
  std::vector<std::vector<double>> combined_adv;
};

std::vector<double> episode_returns(const RolloutGroup& group);

// Episode-level group normalization: every step of trajectory i carries
// (R_i - mean) / max(popstd, floor); step_adv stays zero.
AdvantageSet grpo_advantages(const RolloutGroup& group, const CreditConfig& cfg);

// G_t = sum_k gamma^k r_{t+k}.
std::vector<double> discounted_returns(const std::vector<double>& rewards, double gamma);

// Buckets every step (trajectory index, step index) of the group by the
// anchor hash of its decision state. The buckets partition all steps.
std::map<simdevice::AnchorKey, std::vector<std::pair<int, int>>> anchor_groups(
    const RolloutGroup& group);

// Two-level estimator: episode advantage plus omega times the anchor-bucket
// normalized discounted return. Singleton buckets contribute zero; omega = 0
// reduces to grpo_advantages field-for-field.
AdvantageSet gigpo_advantages(const RolloutGroup& group, const CreditConfig& cfg);

}  // namespace claw::credit
