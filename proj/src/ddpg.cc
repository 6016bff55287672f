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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "paramnoise/csv.h"
#include "paramnoise/error.h"

namespace paramnoise {

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigInvalid, what);
  };
  if (!EnvExists(env)) {
    throw Error(ErrorCode::kEnvNotFound, "no environment named '" + env + "'");
  }
  if (!(gamma > 0 && gamma < 1)) fail("gamma must lie in (0, 1)");
  if (!(tau >= 0 && tau <= 1)) fail("tau must lie in [0, 1]");
  if (batch < 1) fail("batch must be >= 1");
  if (!(lr_actor >= 0) || !(lr_critic >= 0)) fail("learning rates must be >= 0");
  if (!(critic_l2 >= 0)) fail("critic_l2 must be >= 0");
  if (replay_capacity < static_cast<std::size_t>(batch)) {
    fail("replay capacity below batch size");
  }
  if (hidden1 < 1 || hidden2 < 1) fail("hidden sizes must be >= 1");
  if (warmup_steps < 0 || train_steps_per_env_step < 0) {
    fail("warmup and train ratio must be >= 0");
  }
  if (sigma_adapt_interval < 0 || distance_batch < 1) {
    fail("sigma_adapt_interval must be >= 0 and distance_batch >= 1");
  }
  if (epochs < 0 || episodes_per_epoch < 1 || eval_episodes < 0) {
    fail("epochs >= 0, episodes_per_epoch >= 1, eval_episodes >= 0");
  }
  noise.Validate();
}

double DefaultSigmaInit(std::string_view env_name) {
  return env_name.substr(0, 7) == "sparse-" ? 0.6 : 0.2;
}

Agent MakeAgent(const EnvSpec& spec, const TrainConfig& config, Rng& rng) {
  Agent a{PolicyNet(spec.state_dim, config.hidden1, config.hidden2,
                    spec.action_limits, config.layer_norm),
          {},
          CriticNet(spec.state_dim, spec.action_dim, config.hidden1,
                    config.hidden2, config.layer_norm),
          {},
          {},
          {},
          RunningNormalizer(spec.state_dim)};
  a.actor.Initialize(rng);
  a.critic.Initialize(rng);
  a.target_actor = a.actor;
  a.target_critic = a.critic;
  a.actor_opt = Adam(a.actor.params().size(), AdamConfig{config.lr_actor});
  a.critic_opt = Adam(a.critic.params().size(), AdamConfig{config.lr_critic});
  return a;
}

TrainStats TrainStep(Agent& agent, const ReplayBuffer& buffer,
                     const TrainConfig& config, Rng& rng) {
  const auto n = static_cast<std::size_t>(config.batch);
  if (buffer.size() < n) {
    throw Error(ErrorCode::kBufferTooSmall,
                "buffer holds " + std::to_string(buffer.size()) +
                    " transitions, batch is " + std::to_string(n));
  }
  const Batch b = buffer.Sample(n, rng);
  const Matrix states = agent.normalizer.Normalize(b.states);
  const Matrix next_states = agent.normalizer.Normalize(b.next_states);
  const double inv_b = 1.0 / static_cast<double>(n);

  const Matrix next_actions = agent.target_actor.Forward(next_states);
  const Eigen::RowVectorXd next_q =
      agent.target_critic.Forward(next_states, next_actions);
  const Eigen::RowVectorXd target =
      b.rewards.array() +
      config.gamma * (1.0 - b.done.array()) * next_q.array();

  TrainStats stats;
  const Eigen::RowVectorXd q = agent.critic.Forward(states, b.actions);
  const Eigen::RowVectorXd td = q - target;
  stats.critic_loss = td.squaredNorm() * inv_b;
  CriticNet::Gradients cg =
      agent.critic.Backward(states, b.actions, (2.0 * inv_b) * td);
  agent.critic.mlp().AddL2Penalty(config.critic_l2, &cg.params);
  agent.critic_opt.Step(agent.critic.params(), cg.params);

  const Matrix actions = agent.actor.Forward(states);
  const Eigen::RowVectorXd grad_q = Eigen::RowVectorXd::Constant(
      static_cast<Eigen::Index>(n), -inv_b);
  const CriticNet::Gradients ag = agent.critic.Backward(states, actions, grad_q);
  stats.actor_loss = -agent.critic.Forward(states, actions).mean();
  agent.actor_opt.Step(agent.actor.params(),
                       agent.actor.Backward(states, ag.actions));

  SoftUpdate(agent.target_actor.params(), agent.actor.params(), config.tau);
  SoftUpdate(agent.target_critic.params(), agent.critic.params(), config.tau);
  return stats;
}

namespace {

TrainConfig Validated(TrainConfig c) {
  c.Validate();
  return c;
}

}  // namespace

Trainer::Trainer(TrainConfig config)
    : config_(Validated(std::move(config))),
      env_(MakeEnv(config_.env, config_.env_overrides)),
      noise_(1, config_.noise.sigma_init),
      buffer_(config_.replay_capacity, env_->spec().state_dim,
              env_->spec().action_dim),
      env_rng_(Rng::Derive(config_.seed, 1)),
      noise_rng_(Rng::Derive(config_.seed, 2)),
      replay_rng_(Rng::Derive(config_.seed, 3)),
      probe_rng_(Rng::Derive(config_.seed, 4)),
      eval_rng_(Rng::Derive(config_.seed, 5)) {
  Rng init_rng = Rng::Derive(config_.seed, 0);
  agent_ = MakeAgent(env_->spec(), config_, init_rng);
  noise_ = NoiseDistribution(static_cast<int>(agent_.actor.num_perturbable()),
                             config_.noise.sigma_init);
  if (AlphaRuleFor(config_.strategy) == AlphaRule::kDirectionalOnly) {
    noise_.set_alpha(0.0);
  }
  sampler_ = std::make_unique<NoiseSampler>(noise_);
}

double Trainer::ProbeDistance() {
  Matrix states = buffer_.SampleStates(
      static_cast<std::size_t>(config_.distance_batch), probe_rng_);
  states = agent_.normalizer.Normalize(states);
  const Vector probe =
      noise_.sigma() *
      StandardNormal(agent_.actor.num_perturbable(), probe_rng_);
  return PolicyDistance(agent_.actor, agent_.actor.Perturbed(probe), states);
}

void Trainer::AdaptSigma() {
  noise_.set_sigma(paramnoise::AdaptSigma(noise_.sigma(), ProbeDistance(),
                                          config_.noise.delta,
                                          config_.noise.sigma_factor));
  sampler_->set_sigma(noise_.sigma());
}

double Trainer::RunEpisode() {
  const RunningNormalizer frozen = agent_.normalizer;
  Vector eps = sampler_->Sample(noise_rng_);
  const PolicyNet perturbed = agent_.actor.Perturbed(eps);
  result_.episode_alpha.push_back(noise_.alpha());

  Vector obs = env_->Reset(env_rng_);
  double ret = 0.0;
  const bool adapt = AdaptsSigma(config_.strategy);
  bool done = false;
  while (!done) {
    const Vector action = perturbed.Act(frozen.Normalize(obs));
    StepResult step = env_->Step(action);
    ret += step.reward;
    agent_.normalizer.Update(obs);
    buffer_.Add(Transition{std::move(obs), action, step.reward,
                           step.observation, false});
    obs = std::move(step.observation);
    done = step.done;
    ++total_steps_;

    if (total_steps_ > config_.warmup_steps &&
        buffer_.size() >= static_cast<std::size_t>(config_.batch)) {
      for (int i = 0; i < config_.train_steps_per_env_step; ++i) {
        TrainStep(agent_, buffer_, config_, replay_rng_);
      }
    }
    if (adapt && config_.sigma_adapt_interval > 0 &&
        total_steps_ % config_.sigma_adapt_interval == 0) {
      AdaptSigma();
    }
  }

  window_.push_back(EpisodeRecord{std::move(eps), ret});
  result_.episode_returns.push_back(ret);
  if (static_cast<int>(window_.size()) == config_.noise.window) {
    NoiseHyper hyper = config_.noise;
    hyper.alpha_rule = AlphaRuleFor(config_.strategy);
    std::optional<double> d;
    if (adapt && config_.sigma_adapt_interval == 0) d = ProbeDistance();
    WindowUpdate next = EndOfWindowUpdate(noise_, window_, d, hyper, ++windows_done_);
    noise_ = std::move(next.next);
    result_.exploration.push_back(next.log);
    window_.clear();
    sampler_ = std::make_unique<NoiseSampler>(noise_);
  }
  return ret;
}

double Trainer::EvaluateClean(Rng& rng) const {
  std::unique_ptr<Env> env = env_->Clone();
  Vector obs = env->Reset(rng);
  double ret = 0.0;
  bool done = false;
  while (!done) {
    StepResult step = env->Step(agent_.actor.Act(agent_.normalizer.Normalize(obs)));
    ret += step.reward;
    obs = std::move(step.observation);
    done = step.done;
  }
  return ret;
}

EpochStats Trainer::RunEpoch() {
  EpochStats stats;
  stats.epoch = epochs_done() + 1;
  double sum = 0.0;
  for (int e = 0; e < config_.episodes_per_epoch; ++e) sum += RunEpisode();
  stats.mean_return_perturbed = sum / config_.episodes_per_epoch;
  if (config_.eval_episodes > 0) {
    double clean = 0.0;
    for (int e = 0; e < config_.eval_episodes; ++e) clean += EvaluateClean(eval_rng_);
    stats.mean_return_clean = clean / config_.eval_episodes;
  } else {
    stats.mean_return_clean = std::numeric_limits<double>::quiet_NaN();
  }
  result_.curve.push_back(stats);
  return stats;
}

const TrainingResult& Trainer::Run() {
  while (epochs_done() < config_.epochs) RunEpoch();
  return result_;
}

TrainingResult RunTraining(const TrainConfig& config) {
  Trainer trainer(config);
  return trainer.Run();
}

void WriteCurveCsv(std::ostream& os, std::span<const EpochStats> curve) {
  os << kCurveCsvHeader << '\n';
  for (const auto& e : curve) {
    os << e.epoch << ',' << FormatDouble(e.mean_return_perturbed) << ','
       << FormatDouble(e.mean_return_clean) << '\n';
  }
}

// Checkpoint layout (all integers little-endian):
//   8 bytes  magic "PNCKPT\0\1"
//   u32      format version (1)
//   u32      section count
//   per section: u32 name length, name bytes, u8 kind ('D' doubles,
//   'S' string), u64 element count, payload (IEEE-754 binary64 values or
//   raw bytes).
namespace {

constexpr char kMagic[8] = {'P', 'N', 'C', 'K', 'P', 'T', '\0', '\1'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void PutLe(std::ostream& os, T v) {
  static_assert(std::is_integral_v<T>);
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  }
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T GetLe(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw Error(ErrorCode::kIoError, "truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{buf[i]} << (8 * i);
  return static_cast<T>(v);
}

struct Section {
  char kind = 'D';
  std::vector<double> values;
  std::string text;
};

using Sections = std::map<std::string, Section>;

void AddDoubles(Sections& s, const std::string& name, const double* data,
                std::size_t n) {
  s[name] = Section{'D', std::vector<double>(data, data + n), {}};
}
void AddVector(Sections& s, const std::string& name, const Vector& v) {
  AddDoubles(s, name, v.data(), static_cast<std::size_t>(v.size()));
}
void AddText(Sections& s, const std::string& name, std::string text) {
  s[name] = Section{'S', {}, std::move(text)};
}
template <typename RngT>
std::string RngText(const RngT& rng) {
  std::ostringstream os;
  rng.Save(os);
  return os.str();
}

const Section& Need(const Sections& s, const std::string& name, char kind) {
  auto it = s.find(name);
  if (it == s.end() || it->second.kind != kind) {
    throw Error(ErrorCode::kIoError, "checkpoint lacks section '" + name + "'");
  }
  return it->second;
}

Vector NeedVector(const Sections& s, const std::string& name, Eigen::Index size) {
  const Section& sec = Need(s, name, 'D');
  if (static_cast<Eigen::Index>(sec.values.size()) != size) {
    throw Error(ErrorCode::kIoError, "checkpoint section '" + name + "' has wrong size");
  }
  return Eigen::Map<const Vector>(sec.values.data(), size);
}

void LoadRng(const Sections& s, const std::string& name, Rng& rng) {
  std::istringstream is(Need(s, name, 'S').text);
  rng.Load(is);
}

}  // namespace

void Trainer::SaveCheckpoint(std::ostream& os) const {
  Sections s;
  AddVector(s, "actor", agent_.actor.params());
  AddVector(s, "target_actor", agent_.target_actor.params());
  AddVector(s, "critic", agent_.critic.params());
  AddVector(s, "target_critic", agent_.target_critic.params());
  AddVector(s, "actor_opt.m", agent_.actor_opt.m());
  AddVector(s, "actor_opt.v", agent_.actor_opt.v());
  AddVector(s, "critic_opt.m", agent_.critic_opt.m());
  AddVector(s, "critic_opt.v", agent_.critic_opt.v());
  const double t_pair[2] = {static_cast<double>(agent_.actor_opt.t()),
                            static_cast<double>(agent_.critic_opt.t())};
  AddDoubles(s, "opt.t", t_pair, 2);
  const double count = agent_.normalizer.count();
  AddDoubles(s, "normalizer.count", &count, 1);
  AddVector(s, "normalizer.mean", agent_.normalizer.mean());
  AddVector(s, "normalizer.m2", agent_.normalizer.m2());
  const double noise_scalars[2] = {noise_.sigma(), noise_.alpha()};
  AddDoubles(s, "noise.sigma_alpha", noise_scalars, 2);
  AddDoubles(s, "noise.covariance", noise_.covariance().data(),
             static_cast<std::size_t>(noise_.covariance().size()));
  const double counters[3] = {static_cast<double>(total_steps_),
                              static_cast<double>(windows_done_),
                              static_cast<double>(result_.episode_returns.size())};
  AddDoubles(s, "counters", counters, 3);
  AddDoubles(s, "history.returns", result_.episode_returns.data(),
             result_.episode_returns.size());
  AddDoubles(s, "history.alpha", result_.episode_alpha.data(),
             result_.episode_alpha.size());
  std::vector<double> flat;
  for (const auto& e : result_.curve) {
    flat.insert(flat.end(), {static_cast<double>(e.epoch), e.mean_return_perturbed,
                             e.mean_return_clean});
  }
  AddDoubles(s, "history.curve", flat.data(), flat.size());
  flat.clear();
  for (const auto& l : result_.exploration) {
    flat.insert(flat.end(),
                {static_cast<double>(l.update_index), l.sigma_bar, l.alpha, l.sigma});
  }
  AddDoubles(s, "history.exploration", flat.data(), flat.size());
  std::vector<double> pending;
  for (const auto& r : window_) {
    pending.push_back(r.ret);
    pending.insert(pending.end(), r.noise.data(), r.noise.data() + r.noise.size());
  }
  AddDoubles(s, "window", pending.data(), pending.size());
  AddText(s, "rng.env", RngText(env_rng_));
  AddText(s, "rng.noise", RngText(noise_rng_));
  AddText(s, "rng.replay", RngText(replay_rng_));
  AddText(s, "rng.probe", RngText(probe_rng_));
  AddText(s, "rng.eval", RngText(eval_rng_));

  os.write(kMagic, sizeof(kMagic));
  PutLe<std::uint32_t>(os, kCheckpointVersion);
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  for (const auto& [name, sec] : s) {
    PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    os.put(sec.kind);
    if (sec.kind == 'D') {
      PutLe<std::uint64_t>(os, sec.values.size());
      for (double v : sec.values) PutLe<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v));
    } else {
      PutLe<std::uint64_t>(os, sec.text.size());
      os.write(sec.text.data(), static_cast<std::streamsize>(sec.text.size()));
    }
  }
  if (!os) throw Error(ErrorCode::kIoError, "checkpoint write failed");
}

void Trainer::LoadCheckpoint(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kIoError, "not a checkpoint");
  }
  const auto version = GetLe<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kIoError, "unsupported checkpoint version " + std::to_string(version));
  }
  Sections s;
  const auto n_sections = GetLe<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < n_sections; ++i) {
    std::string name(GetLe<std::uint32_t>(is), '\0');
    is.read(name.data(), static_cast<std::streamsize>(name.size()));
    Section sec;
    sec.kind = static_cast<char>(is.get());
    const auto count = GetLe<std::uint64_t>(is);
    if (sec.kind == 'D') {
      sec.values.resize(count);
      for (auto& v : sec.values) v = std::bit_cast<double>(GetLe<std::uint64_t>(is));
    } else if (sec.kind == 'S') {
      sec.text.resize(count);
      is.read(sec.text.data(), static_cast<std::streamsize>(count));
    } else {
      throw Error(ErrorCode::kIoError, "bad section kind in checkpoint");
    }
    if (!is) throw Error(ErrorCode::kIoError, "truncated checkpoint");
    s[name] = std::move(sec);
  }

  agent_.actor.params() = NeedVector(s, "actor", agent_.actor.params().size());
  agent_.target_actor.params() =
      NeedVector(s, "target_actor", agent_.target_actor.params().size());
  agent_.critic.params() = NeedVector(s, "critic", agent_.critic.params().size());
  agent_.target_critic.params() =
      NeedVector(s, "target_critic", agent_.target_critic.params().size());
  const Vector t = NeedVector(s, "opt.t", 2);
  agent_.actor_opt.Restore(NeedVector(s, "actor_opt.m", agent_.actor_opt.m().size()),
                           NeedVector(s, "actor_opt.v", agent_.actor_opt.v().size()),
                           static_cast<long long>(t[0]));
  agent_.critic_opt.Restore(
      NeedVector(s, "critic_opt.m", agent_.critic_opt.m().size()),
      NeedVector(s, "critic_opt.v", agent_.critic_opt.v().size()),
      static_cast<long long>(t[1]));
  const Eigen::Index sd = agent_.normalizer.dim();
  agent_.normalizer.Restore(NeedVector(s, "normalizer.count", 1)[0],
                            NeedVector(s, "normalizer.mean", sd),
                            NeedVector(s, "normalizer.m2", sd));
  const Vector sa = NeedVector(s, "noise.sigma_alpha", 2);
  const Eigen::Index nd = noise_.dim();
  const Vector cov = NeedVector(s, "noise.covariance", nd * nd);
  noise_.set_covariance(Eigen::Map<const Matrix>(cov.data(), nd, nd));
  noise_.set_sigma(sa[0]);
  noise_.set_alpha(sa[1]);
  const Vector counters = NeedVector(s, "counters", 3);
  total_steps_ = static_cast<std::int64_t>(counters[0]);
  windows_done_ = static_cast<int>(counters[1]);
  TrainingResult history;
  history.episode_returns = Need(s, "history.returns", 'D').values;
  history.episode_alpha = Need(s, "history.alpha", 'D').values;
  const auto& curve = Need(s, "history.curve", 'D').values;
  const auto& expl = Need(s, "history.exploration", 'D').values;
  if (history.episode_returns.size() != static_cast<std::size_t>(counters[2]) ||
      history.episode_alpha.size() != history.episode_returns.size() ||
      curve.size() % 3 != 0 || expl.size() % 4 != 0) {
    throw Error(ErrorCode::kIoError, "checkpoint history is malformed");
  }
  for (std::size_t i = 0; i < curve.size(); i += 3) {
    history.curve.push_back(
        EpochStats{static_cast<int>(curve[i]), curve[i + 1], curve[i + 2]});
  }
  for (std::size_t i = 0; i < expl.size(); i += 4) {
    history.exploration.push_back(ExplorationLog{static_cast<int>(expl[i]),
                                                 expl[i + 1], expl[i + 2], expl[i + 3]});
  }
  const Section& pending = Need(s, "window", 'D');
  const std::size_t stride = static_cast<std::size_t>(nd) + 1;
  if (pending.values.size() % stride != 0) {
    throw Error(ErrorCode::kIoError, "checkpoint window section is malformed");
  }
  window_.clear();
  for (std::size_t at = 0; at < pending.values.size(); at += stride) {
    window_.push_back(EpisodeRecord{
        Eigen::Map<const Vector>(pending.values.data() + at + 1, nd),
        pending.values[at]});
  }
  LoadRng(s, "rng.env", env_rng_);
  LoadRng(s, "rng.noise", noise_rng_);
  LoadRng(s, "rng.replay", replay_rng_);
  LoadRng(s, "rng.probe", probe_rng_);
  LoadRng(s, "rng.eval", eval_rng_);
  sampler_ = std::make_unique<NoiseSampler>(noise_);
  result_ = std::move(history);
}

void Trainer::SaveCheckpoint(const std::filesystem::path& path) const {
  std::ostringstream os(std::ios::binary);
  SaveCheckpoint(os);
  WriteFileAtomic(path, os.str());
}

void Trainer::LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  LoadCheckpoint(in);
}

}  // namespace paramnoise
