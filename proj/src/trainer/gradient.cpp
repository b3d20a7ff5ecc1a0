#include "claw/trainer/gradient.hpp"

#include <cmath>
#include <cstdio>

namespace claw::trainer {

support::Digest advantage_digest(const credit::AdvantageSet& adv) {
  std::string buf;
  char num[32];
  for (std::size_t i = 0; i < adv.combined_adv.size(); ++i) {
    for (double x : adv.combined_adv[i]) {
      std::snprintf(num, sizeof num, "%.17g", x);
      buf += num;
      buf.push_back('\x1f');
    }
    buf.push_back('\x1e');
  }
  return support::sha256(buf);
}

GradientResult policy_gradient(const CollectedGroup& collected,
                               const credit::AdvantageSet& advantages,
                               const PolicyParams& params, double temperature) {
  const auto& trajectories = collected.group.trajectories;
  if (advantages.combined_adv.size() != trajectories.size() ||
      collected.observations.size() != trajectories.size())
    throw ShapeMismatch("advantages are not aligned with the group");
  for (std::size_t i = 0; i < trajectories.size(); ++i)
    if (advantages.combined_adv[i].size() != trajectories[i].steps.size())
      throw ShapeMismatch("advantage row " + std::to_string(i) +
                          " is not aligned with its trajectory");

  GradientResult out;
  out.grad.assign(params.w.size(), 0.0);
  out.consumed_advantages = advantage_digest(advantages);

  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    for (std::size_t t = 0; t < trajectories[i].steps.size(); ++t) {
      const double adv = advantages.combined_adv[i][t];
      if (adv == 0.0) continue;
      const auto& obs = collected.observations[i][t];
      const auto& taken = trajectories[i].steps[t].action;
      const auto candidates = enumerate_candidates(obs.state, collected.task);
      const auto probs = candidate_probs(params, obs.state, collected.task, candidates, temperature);
      const auto ctx = feature_context(obs.state, collected.task);

      std::size_t taken_idx = candidates.size();
      for (std::size_t c = 0; c < candidates.size(); ++c)
        if (candidates[c].action == taken) {
          taken_idx = c;
          break;
        }
      if (taken_idx == candidates.size())
        throw ShapeMismatch("logged action is not among the re-enumerated candidates");

      const double scale = adv / temperature;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double coeff = (c == taken_idx ? 1.0 : 0.0) - probs[c];
        if (coeff == 0.0) continue;
        const auto f = features(ctx, candidates[c]);
        const int k = candidates[c].template_id;
        for (int d = 0; d < params.dim; ++d) {
          const double fd = f[static_cast<std::size_t>(d)];
          if (fd != 0.0)
            out.grad[static_cast<std::size_t>(d * params.templates + k)] += scale * coeff * fd;
        }
      }
    }
  }
  return out;
}

PolicyParams update(const PolicyParams& params, const std::vector<double>& grad,
                    double learning_rate) {
  if (grad.size() != params.w.size()) throw ShapeMismatch("gradient shape differs from params");
  for (double g : grad)
    if (!std::isfinite(g)) throw NonFiniteGradient("gradient contains a non-finite entry");
  PolicyParams next = params;
  for (std::size_t i = 0; i < next.w.size(); ++i) next.w[i] += learning_rate * grad[i];
  return next;
}

}  // namespace claw::trainer
