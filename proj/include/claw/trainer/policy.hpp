#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "claw/ctl/endpoint.hpp"
#include "claw/simdevice/types.hpp"
#include "claw/support/rand.hpp"
#include "claw/trainer/features.hpp"

namespace claw::trainer {

// Weight matrix, row-major feature_dim × kTemplates. A candidate's score is
// features · W[:, template].
struct PolicyParams {
  int dim = feature_dim();
  int templates = kTemplates;
  std::vector<double> w;
  std::string version = kFeatureVersion;

  double at(int d, int k) const { return w[static_cast<std::size_t>(d * templates + k)]; }
  double& at(int d, int k) { return w[static_cast<std::size_t>(d * templates + k)]; }
  bool finite() const;

  static PolicyParams zeros();
  static PolicyParams random_init(std::uint64_t seed, double scale = 0.01);
};

class Policy {
 public:
  struct Choice {
    simdevice::Action action;
    double logprob = 0.0;
    int candidate_count = 0;
  };

  virtual ~Policy() = default;
  virtual Choice act(const simdevice::Observation& obs, const simdevice::TaskSpec& task,
                     double temperature, support::Rng& rng) = 0;
  // Deterministic argmax (first candidate wins ties); logprob is 0.
  virtual Choice greedy(const simdevice::Observation& obs, const simdevice::TaskSpec& task) = 0;
};

class LinearSoftmaxPolicy final : public Policy {
 public:
  LinearSoftmaxPolicy() : params_(PolicyParams::zeros()) {}
  explicit LinearSoftmaxPolicy(PolicyParams params) : params_(std::move(params)) {}

  const PolicyParams& params() const { return params_; }
  void set_params(PolicyParams params) { params_ = std::move(params); }

  Choice act(const simdevice::Observation& obs, const simdevice::TaskSpec& task,
             double temperature, support::Rng& rng) override;
  Choice greedy(const simdevice::Observation& obs, const simdevice::TaskSpec& task) override;

 private:
  PolicyParams params_;
};

// Softmax over candidate scores at the given temperature; sums to 1.
std::vector<double> candidate_probs(const PolicyParams& params,
                                    const simdevice::ScreenState& state,
                                    const simdevice::TaskSpec& task,
                                    const std::vector<Candidate>& candidates, double temperature);

// log π(action | obs) under the tempered softmax; the action must be one of
// the enumerated candidates.
double log_prob_of(const PolicyParams& params, const simdevice::Observation& obs,
                   const simdevice::TaskSpec& task, const simdevice::Action& action,
                   double temperature);

// Chat-completions-backed policy: the observation and candidate list go out
// as text, the reply is parsed as an Action JSON object. Parse failures fall
// back to a dead tap at the origin with a logged warning. Not trainable here.
class RemotePolicy final : public Policy {
 public:
  RemotePolicy(ctl::EndpointSpec spec, std::string model)
      : spec_(std::move(spec)), model_(std::move(model)) {}

  Choice act(const simdevice::Observation& obs, const simdevice::TaskSpec& task,
             double temperature, support::Rng& rng) override;
  Choice greedy(const simdevice::Observation& obs, const simdevice::TaskSpec& task) override;

 private:
  Choice query(const simdevice::Observation& obs, const simdevice::TaskSpec& task,
               double temperature);

  ctl::EndpointSpec spec_;
  std::string model_;
};

}  // namespace claw::trainer
