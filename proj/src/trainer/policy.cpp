#include "claw/trainer/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace claw::trainer {

bool PolicyParams::finite() const {
  return std::all_of(w.begin(), w.end(), [](double x) { return std::isfinite(x); });
}

PolicyParams PolicyParams::zeros() {
  PolicyParams p;
  p.w.assign(static_cast<std::size_t>(p.dim * p.templates), 0.0);
  return p;
}

PolicyParams PolicyParams::random_init(std::uint64_t seed, double scale) {
  PolicyParams p = zeros();
  support::Rng rng(seed);
  for (auto& x : p.w) x = scale * (2.0 * support::uniform01(rng) - 1.0);
  return p;
}

std::vector<double> candidate_probs(const PolicyParams& params,
                                    const simdevice::ScreenState& state,
                                    const simdevice::TaskSpec& task,
                                    const std::vector<Candidate>& candidates,
                                    double temperature) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to score");
  if (temperature <= 0.0) throw std::invalid_argument("temperature must be positive");
  const auto ctx = feature_context(state, task);
  std::vector<double> logits(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto f = features(ctx, candidates[i]);
    double s = 0.0;
    for (int d = 0; d < params.dim; ++d)
      s += f[static_cast<std::size_t>(d)] * params.at(d, candidates[i].template_id);
    logits[i] = s / temperature;
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - m);
    z += l;
  }
  for (auto& l : logits) l /= z;
  return logits;
}

double log_prob_of(const PolicyParams& params, const simdevice::Observation& obs,
                   const simdevice::TaskSpec& task, const simdevice::Action& action,
                   double temperature) {
  const auto candidates = enumerate_candidates(obs.state, task);
  const auto probs = candidate_probs(params, obs.state, task, candidates, temperature);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (candidates[i].action == action) return std::log(probs[i]);
  throw std::invalid_argument("action is not one of the enumerated candidates");
}

Policy::Choice LinearSoftmaxPolicy::act(const simdevice::Observation& obs,
                                        const simdevice::TaskSpec& task, double temperature,
                                        support::Rng& rng) {
  const auto candidates = enumerate_candidates(obs.state, task);
  const auto probs = candidate_probs(params_, obs.state, task, candidates, temperature);
  const double u = support::uniform01(rng);
  double acc = 0.0;
  std::size_t pick = candidates.size() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  return {candidates[pick].action, std::log(probs[pick]), static_cast<int>(candidates.size())};
}

Policy::Choice LinearSoftmaxPolicy::greedy(const simdevice::Observation& obs,
                                           const simdevice::TaskSpec& task) {
  const auto candidates = enumerate_candidates(obs.state, task);
  // Temperature cancels in the argmax; 1.0 keeps the scores finite.
  const auto probs = candidate_probs(params_, obs.state, task, candidates, 1.0);
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  return {candidates[best].action, 0.0, static_cast<int>(candidates.size())};
}

Policy::Choice RemotePolicy::query(const simdevice::Observation& obs,
                                   const simdevice::TaskSpec& task, double temperature) {
  const auto candidates = enumerate_candidates(obs.state, task);
  nlohmann::json cand_json = nlohmann::json::array();
  for (const auto& c : candidates) cand_json.push_back(c.action);
  nlohmann::json prompt = {{"instruction", task.instruction},
                           {"screen", obs.state},
                           {"step_index", obs.step_index},
                           {"candidates", cand_json}};
  ctl::ChatRequest req;
  req.model = model_;
  req.temperature = temperature;
  req.messages = {
      {"system", "Reply with exactly one JSON action object chosen from the candidates."},
      {"user", prompt.dump()}};
  auto res = ctl::endpoint_call(spec_, req);
  Choice out;
  out.candidate_count = static_cast<int>(candidates.size());
  try {
    out.action = nlohmann::json::parse(res.content).get<simdevice::Action>();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[trainer] unparseable remote action (%s); substituting no-op tap\n",
                 e.what());
    out.action = simdevice::Action::tap(0, 0);
  }
  return out;
}

Policy::Choice RemotePolicy::act(const simdevice::Observation& obs,
                                 const simdevice::TaskSpec& task, double temperature,
                                 support::Rng&) {
  return query(obs, task, temperature);
}

Policy::Choice RemotePolicy::greedy(const simdevice::Observation& obs,
                                    const simdevice::TaskSpec& task) {
  return query(obs, task, 0.0);
}

}  // namespace claw::trainer
