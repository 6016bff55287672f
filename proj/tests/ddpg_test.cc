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


#include "paramnoise/ddpg.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "paramnoise/error.h"

namespace paramnoise {
namespace {

TrainConfig Tiny(Strategy s = Strategy::kProposed) {
  TrainConfig c;
  c.env = "sparse-cartpole-swingup";
  c.env_overrides = {{"horizon", 40}};
  c.strategy = s;
  c.hidden1 = 8;
  c.hidden2 = 8;
  c.batch = 8;
  c.warmup_steps = 20;
  c.replay_capacity = 1000;
  c.distance_batch = 8;
  c.noise.window = 3;
  c.noise.sigma_init = 0.6;
  c.epochs = 3;
  c.episodes_per_epoch = 4;
  c.eval_episodes = 1;
  c.seed = 5;
  return c;
}

ReplayBuffer FilledBuffer(const Env& env, int n, Rng& rng) {
  ReplayBuffer buf(1000, env.spec().state_dim, env.spec().action_dim);
  for (int i = 0; i < n; ++i) {
    Transition t;
    t.state = StandardNormal(env.spec().state_dim, rng);
    t.action = Vector::Constant(env.spec().action_dim, rng.Uniform(-1, 1));
    t.reward = rng.Uniform(0, 1);
    t.next_state = StandardNormal(env.spec().state_dim, rng);
    buf.Add(t);
  }
  return buf;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c = Tiny();
  c.Validate();
  c.gamma = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  c = Tiny();
  c.tau = 1.5;
  EXPECT_THROW(c.Validate(), Error);
  c = Tiny();
  c.env = "nowhere";
  try {
    c.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEnvNotFound);
  }
}

TEST(TrainConfigTest, SigmaDefaults) {
  EXPECT_EQ(DefaultSigmaInit("sparse-cartpole-swingup"), 0.6);
  EXPECT_EQ(DefaultSigmaInit("cartpole-swingup"), 0.2);
}

TEST(TrainStepTest, TargetsFollowTau) {
  TrainConfig c = Tiny();
  auto env = MakeEnv(c.env, c.env_overrides);
  Rng rng(1);
  ReplayBuffer buf = FilledBuffer(*env, 32, rng);
  Agent a = MakeAgent(env->spec(), c, rng);

  c.tau = 1.0;
  TrainStep(a, buf, c, rng);
  EXPECT_EQ(a.target_actor.params(), a.actor.params());
  EXPECT_EQ(a.target_critic.params(), a.critic.params());

  c.tau = 0.0;
  const Vector ta = a.target_actor.params(), tc = a.target_critic.params();
  TrainStep(a, buf, c, rng);
  EXPECT_EQ(a.target_actor.params(), ta);
  EXPECT_EQ(a.target_critic.params(), tc);
  EXPECT_NE(a.actor.params(), ta);
}

TEST(TrainStepTest, BufferTooSmall) {
  TrainConfig c = Tiny();
  auto env = MakeEnv(c.env, c.env_overrides);
  Rng rng(2);
  ReplayBuffer buf = FilledBuffer(*env, 3, rng);
  Agent a = MakeAgent(env->spec(), c, rng);
  try {
    TrainStep(a, buf, c, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBufferTooSmall);
  }
}

TEST(TrainStepTest, CriticFitsConstantReward) {
  TrainConfig c = Tiny();
  c.gamma = 0.5;
  c.critic_l2 = 0.0;
  c.lr_critic = 3e-3;
  auto env = MakeEnv(c.env, c.env_overrides);
  Rng rng(3);
  ReplayBuffer buf(1000, env->spec().state_dim, env->spec().action_dim);
  for (int i = 0; i < 200; ++i) {
    Transition t;
    t.state = StandardNormal(5, rng);
    t.action = Vector::Constant(1, rng.Uniform(-1, 1));
    t.reward = 1.0;
    t.next_state = StandardNormal(5, rng);
    t.done = true;  // Q = r exactly
    buf.Add(t);
  }
  Agent a = MakeAgent(env->spec(), c, rng);
  double loss = 0;
  for (int i = 0; i < 1500; ++i) loss = TrainStep(a, buf, c, rng).critic_loss;
  EXPECT_LT(loss, 1e-2);
}

TEST(TrainerTest, ZeroEpochsLeavesInitialState) {
  TrainConfig c = Tiny();
  c.epochs = 0;
  Trainer t(c);
  const Vector before = t.agent().actor.params();
  const TrainingResult& r = t.Run();
  EXPECT_TRUE(r.curve.empty());
  EXPECT_TRUE(r.exploration.empty());
  EXPECT_EQ(t.agent().actor.params(), before);
  EXPECT_EQ(t.total_steps(), 0);
}

TEST(TrainerTest, SameSeedSameCurve) {
  const TrainingResult a = RunTraining(Tiny());
  const TrainingResult b = RunTraining(Tiny());
  ASSERT_EQ(a.curve.size(), 3u);
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].mean_return_perturbed, b.curve[i].mean_return_perturbed);
    EXPECT_EQ(a.curve[i].mean_return_clean, b.curve[i].mean_return_clean);
  }
  EXPECT_EQ(a.episode_returns, b.episode_returns);
  ASSERT_EQ(a.exploration.size(), 4u);  // 12 episodes, windows of 3
  for (std::size_t i = 0; i < a.exploration.size(); ++i) {
    EXPECT_EQ(a.exploration[i].sigma, b.exploration[i].sigma);
    EXPECT_EQ(a.exploration[i].update_index, static_cast<int>(i) + 1);
  }
}

TEST(TrainerTest, EpisodeLeavesActorAloneBeforeTraining) {
  TrainConfig c = Tiny();
  c.warmup_steps = 1000000;
  Trainer t(c);
  const Vector before = t.agent().actor.params();
  t.RunEpisode();
  EXPECT_EQ(t.agent().actor.params(), before);
  EXPECT_EQ(t.total_steps(), 40);
  EXPECT_EQ(t.buffer().size(), 40u);
  for (std::size_t i = 0; i < t.buffer().size(); ++i) EXPECT_FALSE(t.buffer().at(i).done);
}

TEST(TrainerTest, StrategiesPinAlpha) {
  for (auto s : {Strategy::kPlappert, Strategy::kFixedVariance}) {
    TrainConfig c = Tiny(s);
    const TrainingResult r = RunTraining(c);
    for (const auto& l : r.exploration) EXPECT_EQ(l.alpha, 1.0);
    if (s == Strategy::kFixedVariance) {
      for (const auto& l : r.exploration) EXPECT_EQ(l.sigma, 0.6);
    }
  }
  const TrainingResult ac = RunTraining(Tiny(Strategy::kAdaptiveCov));
  for (double a : ac.episode_alpha) EXPECT_EQ(a, 0.0);
}

TEST(TrainerTest, SigmaMovesOneFactorPerWindow) {
  const TrainingResult r = RunTraining(Tiny(Strategy::kPlappert));
  double prev = 0.6;
  ASSERT_FALSE(r.exploration.empty());
  for (const auto& l : r.exploration) {
    const double up = prev * 1.01, down = prev / 1.01;
    EXPECT_TRUE(l.sigma == up || l.sigma == down) << l.update_index;
    prev = l.sigma;
  }
}

TEST(TrainerTest, StepCadenceAdaptsWithinEpisodes) {
  TrainConfig c = Tiny(Strategy::kPlappert);
  c.sigma_adapt_interval = 10;
  c.warmup_steps = 1000000;
  Trainer t(c);
  t.RunEpisode();  // 40 steps, 4 adaptations
  const double ratio = std::log(t.noise().sigma() / 0.6) / std::log(1.01);
  EXPECT_NEAR(std::abs(ratio), std::round(std::abs(ratio)), 1e-9);
  EXPECT_LE(std::abs(ratio), 4.0 + 1e-9);
  EXPECT_NE(t.noise().sigma(), 0.6);
}

TEST(TrainerTest, ProIsIsotropicWhileReturnsAreZero) {
  const TrainingResult r = RunTraining(Tiny());
  std::size_t first = r.episode_returns.size();
  for (std::size_t i = 0; i < r.episode_returns.size(); ++i) {
    if (r.episode_returns[i] != 0.0) {
      first = i;
      break;
    }
  }
  for (std::size_t i = 0; i <= std::min(first, r.episode_alpha.size() - 1); ++i) {
    EXPECT_EQ(r.episode_alpha[i], 1.0);
  }
}

TEST(TrainerTest, CheckpointRoundTripIsBitExact) {
  TrainConfig c = Tiny();
  c.epochs = 4;
  Trainer a(c);
  a.RunEpoch();
  a.RunEpisode();  // leave a partial window behind
  std::stringstream blob;
  a.SaveCheckpoint(blob);

  Trainer b(c);
  b.LoadCheckpoint(blob);
  std::stringstream again;
  b.SaveCheckpoint(again);
  EXPECT_EQ(blob.str(), again.str());
  EXPECT_EQ(b.agent().actor.params(), a.agent().actor.params());
  EXPECT_EQ(b.noise().covariance(), a.noise().covariance());
  EXPECT_EQ(b.epochs_done(), 1);
  EXPECT_EQ(b.result().episode_returns, a.result().episode_returns);

  // replay contents are not checkpointed, so compare continuations of two
  // trainers restored from the same snapshot
  Trainer c1(c), c2(c);
  std::stringstream s1(blob.str()), s2(blob.str());
  c1.LoadCheckpoint(s1);
  c2.LoadCheckpoint(s2);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(c1.RunEpisode(), c2.RunEpisode());
}

TEST(TrainerTest, CheckpointRejectsGarbage) {
  Trainer t(Tiny());
  std::stringstream bad("not a checkpoint at all");
  try {
    t.LoadCheckpoint(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  std::stringstream blob;
  t.SaveCheckpoint(blob);
  std::stringstream truncated(blob.str().substr(0, blob.str().size() / 2));
  EXPECT_THROW(t.LoadCheckpoint(truncated), Error);
}

// Small-scale learning check on the dense pendulum: the median seed's best
// epoch reaches the environment's solved threshold.
TEST(TrainerTest, DensePendulumSmoke) {
  std::vector<double> best;
  double threshold = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TrainConfig c;
    c.env = "pendulum-swingup";
    c.strategy = Strategy::kProposed;
    c.hidden1 = 32;
    c.hidden2 = 32;
    c.noise.sigma_init = DefaultSigmaInit(c.env);
    c.epochs = 15;
    c.episodes_per_epoch = 10;
    c.eval_episodes = 2;
    c.seed = seed;
    Trainer t(c);
    threshold = t.env().spec().solved_threshold;
    double b = -1e300;
    for (const auto& e : t.Run().curve) b = std::max(b, e.mean_return_clean);
    best.push_back(b);
  }
  std::sort(best.begin(), best.end());
  EXPECT_GE(best[2], threshold) << best[0] << " " << best[2] << " " << best[4];
}

TEST(TrainerTest, CurveCsv) {
  std::ostringstream os;
  const std::vector<EpochStats> curve = {{1, 2.5, std::nan("")}, {2, 3.0, 1.0}};
  WriteCurveCsv(os, curve);
  EXPECT_EQ(os.str(),
            "epoch,mean_return_perturbed,mean_return_clean\n1,2.5,nan\n2,3,1\n");
}

}  // namespace
}  // namespace paramnoise
