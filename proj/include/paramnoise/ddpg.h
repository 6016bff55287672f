// Copyright 2026 The paramnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARAMNOISE_DDPG_H_
#define PARAMNOISE_DDPG_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "paramnoise/envs.h"
#include "paramnoise/nets.h"
#include "paramnoise/noise.h"
#include "paramnoise/replay.h"
#include "paramnoise/rng.h"

namespace paramnoise {

struct TrainConfig {
  std::string env = "sparse-cartpole-swingup";
  nlohmann::json env_overrides = nlohmann::json::object();
  Strategy strategy = Strategy::kProposed;

  int hidden1 = 64;
  int hidden2 = 64;
  bool layer_norm = true;

  double lr_actor = 1e-4;
  double lr_critic = 1e-3;
  double gamma = 0.99;
  double tau = 0.01;
  int batch = 64;
  double critic_l2 = 1e-2;
  std::size_t replay_capacity = 100000;
  // env steps before the first gradient step
  int warmup_steps = 1000;
  int train_steps_per_env_step = 1;

  NoiseHyper noise;  // noise.window is K
  // env steps between action-distance sigma adaptations; 0 adapts once per
  // window, as part of the window update
  int sigma_adapt_interval = 0;
  // states used to estimate the action distance
  int distance_batch = 64;

  int epochs = 10;
  int episodes_per_epoch = 10;
  // unperturbed-policy evaluation episodes per epoch (0 disables)
  int eval_episodes = 1;
  std::uint64_t seed = 0;

  // Throws Error(kConfigInvalid) / Error(kEnvNotFound).
  void Validate() const;
};

// Default initial sigma: 0.6 on sparse tasks,
// 0.2 on dense ones.
double DefaultSigmaInit(std::string_view env_name);

struct Agent {
  PolicyNet actor;
  PolicyNet target_actor;
  CriticNet critic;
  CriticNet target_critic;
  Adam actor_opt;
  Adam critic_opt;
  RunningNormalizer normalizer;
};

Agent MakeAgent(const EnvSpec& spec, const TrainConfig& config, Rng& rng);

struct TrainStats {
  double critic_loss = 0.0;  // mean squared TD error, excluding the penalty
  double actor_loss = 0.0;   // -mean Q(s, pi(s))
};

// One critic step toward r + gamma (1 - done) Q'(s', pi'(s')) with an L2
// penalty, one actor step ascending Q(s, pi(s)), then soft target updates.
// Throws Error(kBufferTooSmall) when the buffer holds fewer than
// config.batch transitions.
TrainStats TrainStep(Agent& agent, const ReplayBuffer& buffer,
                     const TrainConfig& config, Rng& rng);

struct EpochStats {
  int epoch = 0;
  double mean_return_perturbed = 0.0;
  double mean_return_clean = 0.0;  // NaN when evaluation is disabled
};

struct TrainingResult {
  std::vector<EpochStats> curve;
  std::vector<ExplorationLog> exploration;
  std::vector<double> episode_returns;  // perturbed, in episode order
  // alpha in force while each episode was sampled
  std::vector<double> episode_alpha;
};

// Off-policy trainer with per-episode parameter-space perturbation of the
// actor. Each episode runs actor + eps with eps drawn from the strategy's
// distribution; every K episodes the distribution is refit from the window's
// (eps, return) pairs.
class Trainer {
 public:
  explicit Trainer(TrainConfig config);

  const TrainConfig& config() const { return config_; }
  const Env& env() const { return *env_; }
  const Agent& agent() const { return agent_; }
  Agent& mutable_agent() { return agent_; }
  const NoiseDistribution& noise() const { return noise_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const TrainingResult& result() const { return result_; }
  std::int64_t total_steps() const { return total_steps_; }
  int epochs_done() const { return static_cast<int>(result_.curve.size()); }

  // Runs one perturbed episode and returns its return.
  double RunEpisode();
  EpochStats RunEpoch();
  // Runs the remaining configured epochs.
  const TrainingResult& Run();

  // Return of one unperturbed episode on a private env copy.
  double EvaluateClean(Rng& rng) const;

  // Versioned binary dump of networks, optimizer moments, normalizer, noise
  // distribution, RNG streams, counters and the training history. The replay
  // buffer is not saved.
  void SaveCheckpoint(std::ostream& os) const;
  void LoadCheckpoint(std::istream& is);
  void SaveCheckpoint(const std::filesystem::path& path) const;
  void LoadCheckpoint(const std::filesystem::path& path);

 private:
  // action distance between the actor and a sigma-scaled isotropic probe
  double ProbeDistance();
  void AdaptSigma();

  TrainConfig config_;
  std::unique_ptr<Env> env_;
  Agent agent_;
  NoiseDistribution noise_;
  std::unique_ptr<NoiseSampler> sampler_;
  ReplayBuffer buffer_;
  std::vector<EpisodeRecord> window_;
  TrainingResult result_;
  std::int64_t total_steps_ = 0;
  int windows_done_ = 0;

  Rng env_rng_;
  Rng noise_rng_;
  Rng replay_rng_;
  Rng probe_rng_;
  Rng eval_rng_;
};

TrainingResult RunTraining(const TrainConfig& config);

inline constexpr std::string_view kCurveCsvHeader =
    "epoch,mean_return_perturbed,mean_return_clean";
void WriteCurveCsv(std::ostream& os, std::span<const EpochStats> curve);

}  // namespace paramnoise

#endif  // PARAMNOISE_DDPG_H_
