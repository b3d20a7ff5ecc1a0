#pragma once

#include <stdexcept>
#include <vector>

#include "claw/credit/credit.hpp"
#include "claw/support/hash.hpp"
#include "claw/trainer/policy.hpp"
#include "claw/trainer/rollout.hpp"

namespace claw::trainer {

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical digest of the combined advantages; logged next to each update and
// recomputed by policy_gradient so the plumbing between estimator and update
// is checkable end to end.
support::Digest advantage_digest(const credit::AdvantageSet& adv);

struct GradientResult {
  std::vector<double> grad;  // same layout as PolicyParams::w
  support::Digest consumed_advantages;
};

// REINFORCE-with-advantage: grad = Σ_{i,t} combined_adv[i][t] · ∇_W log π.
// For the tempered linear softmax the per-step term is
// (1/temperature) · (φ(a) ⊗ e_tmpl(a) − Σ_c π_c φ(c) ⊗ e_tmpl(c)).
GradientResult policy_gradient(const CollectedGroup& collected,
                               const credit::AdvantageSet& advantages,
                               const PolicyParams& params, double temperature);

// Ascent step: W + lr · grad. Pure.
PolicyParams update(const PolicyParams& params, const std::vector<double>& grad,
                    double learning_rate);

}  // namespace claw::trainer
