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

#include "paramnoise/toybench.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "paramnoise/csv.h"
#include "paramnoise/error.h"

namespace paramnoise::toy {

void ToyConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigInvalid, what);
  };
  if (!(tol > 0)) fail("tol must be positive");
  if (!(lr >= 0)) fail("lr must be non-negative");
  if (window < 1) fail("K must be >= 1");
  if (!(sigma_fix_sq > 0)) fail("sigma_fix_sq must be positive");
  if (!(h > 0) || !(h2 > 0)) fail("h and h2 must be positive");
  if (max_steps < 1) fail("max_steps must be >= 1");
  if (!(sparse_threshold > 0)) fail("sparse_threshold must be positive");
  if (trajectory_stride < 1) fail("trajectory_stride must be >= 1");
  if (!theta_init.allFinite() || !c.allFinite()) fail("non-finite theta/c");
  if (strategy == Strategy::kPlappert) {
    fail("the plappert strategy needs an action space; use fv, ac or pro");
  }
}

double RewardDense(const Vec2& theta, const Vec2& c) {
  return std::exp(-(theta - c).squaredNorm());
}

double RewardSparse(const Vec2& theta, const Vec2& c, double threshold) {
  const double d2 = (theta - c).squaredNorm();
  return d2 <= threshold ? std::exp(-d2) : 0.0;
}

Vec2 RewardGradient(const Vec2& theta, const Vec2& c, bool sparse,
                    double threshold) {
  const Vec2 diff = theta - c;
  const double d2 = diff.squaredNorm();
  if (sparse && d2 > threshold) return Vec2::Zero();
  return -2.0 * std::exp(-d2) * diff;
}

ToyResult RunToy(const ToyConfig& config) {
  config.Validate();
  Rng rng = Rng::Derive(config.seed, 0);

  NoiseHyper hyper;
  hyper.h = config.h;
  hyper.h2 = config.h2;
  hyper.window = config.window;
  hyper.sigma_init = std::sqrt(config.sigma_fix_sq);
  hyper.alpha_rule = AlphaRuleFor(config.strategy);

  NoiseDistribution dist(2, hyper.sigma_init);
  if (hyper.alpha_rule == AlphaRule::kDirectionalOnly) dist.set_alpha(0.0);

  auto reward = [&](const Vec2& p) {
    return config.sparse ? RewardSparse(p, config.c, config.sparse_threshold)
                         : RewardDense(p, config.c);
  };

  ToyResult result;
  Vec2 theta = config.theta_init;
  std::vector<EpisodeRecord> records(static_cast<std::size_t>(config.window));
  const bool track = config.record_trajectory;

  for (std::int64_t step = 1; step <= config.max_steps; ++step) {
    const NoiseSampler sampler(dist);
    Vec2 grad_sum = Vec2::Zero();
    TrajectorySnapshot snap;
    const bool snap_now =
        track && (step - 1) % config.trajectory_stride == 0;
    if (snap_now) snap.theta = theta;
    for (auto& rec : records) {
      rec.noise = sampler.Sample(rng);
      const Vec2 perturbed = theta + rec.noise;
      rec.ret = reward(perturbed);
      grad_sum += RewardGradient(perturbed, config.c, config.sparse,
                                 config.sparse_threshold);
      if (snap_now) snap.perturbed.push_back(perturbed);
    }
    if (snap_now) {
      snap.step = step - 1;
      result.trajectory.push_back(std::move(snap));
    }
    theta += config.lr * grad_sum / static_cast<double>(config.window);

    WindowUpdate next = EndOfWindowUpdate(dist, records, std::nullopt, hyper,
                                          static_cast<int>(step));
    dist = std::move(next.next);
    result.exploration.push_back(next.log);

    if (!result.moved &&
        ((theta - config.theta_init).array().abs() > 1e-12).any()) {
      result.moved = true;
    }
    result.steps_run = step;
    result.final_distance = (theta - config.c).norm();
    if (result.final_distance < config.tol) {
      result.optimized = true;
      result.steps_to_optimize = step;
      break;
    }
  }
  if (result.steps_run == 0) result.final_distance = (theta - config.c).norm();
  if (track) {
    TrajectorySnapshot last;
    last.step = result.steps_run;
    last.theta = theta;
    result.trajectory.push_back(std::move(last));
  }
  return result;
}

SweepStats Aggregate(std::span<const SeedOutcome> outcomes) {
  SweepStats s;
  s.runs = static_cast<int>(outcomes.size());
  double step_sum = 0.0, dist_sum = 0.0;
  for (const auto& o : outcomes) {
    s.moved += o.moved ? 1 : 0;
    if (o.optimized) {
      ++s.optimized;
      step_sum += static_cast<double>(*o.steps);
    }
    dist_sum += o.distance;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (s.optimized > 0) {
    s.step_mean = step_sum / s.optimized;
    double acc = 0.0;
    for (const auto& o : outcomes) {
      if (!o.optimized) continue;
      const double d = static_cast<double>(*o.steps) - s.step_mean;
      acc += d * d;
    }
    s.step_std = std::sqrt(acc / s.optimized);
  } else {
    s.step_mean = s.step_std = nan;
  }
  if (s.runs > 0) {
    s.distance_mean = dist_sum / s.runs;
    double acc = 0.0;
    for (const auto& o : outcomes) {
      const double d = o.distance - s.distance_mean;
      acc += d * d;
    }
    s.distance_std = std::sqrt(acc / s.runs);
  } else {
    s.distance_mean = s.distance_std = nan;
  }
  return s;
}

SweepResult RunSweep(const ToyConfig& base, std::span<const std::uint64_t> seeds,
                     int jobs) {
  if (seeds.empty()) throw Error(ErrorCode::kConfigInvalid, "seed list is empty");
  base.Validate();
  const int n = static_cast<int>(seeds.size());
  SweepResult out;
  out.outcomes.resize(seeds.size());

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      ToyConfig cfg = base;
      cfg.seed = seeds[static_cast<std::size_t>(i)];
      cfg.record_trajectory = false;
      const ToyResult r = RunToy(cfg);
      auto& o = out.outcomes[static_cast<std::size_t>(i)];
      o.seed = cfg.seed;
      o.moved = r.moved;
      o.optimized = r.optimized;
      o.steps = r.steps_to_optimize;
      o.distance = Quantize(r.final_distance);
    }
  };
  const int n_threads = std::clamp(jobs, 1, n);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  out.stats = Aggregate(out.outcomes);
  return out;
}

SweepResult RunSweep(const ToyConfig& base, int n_seeds, int jobs) {
  if (n_seeds < 1) throw Error(ErrorCode::kConfigInvalid, "n_seeds must be >= 1");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
  for (int i = 0; i < n_seeds; ++i) seeds[static_cast<std::size_t>(i)] = base.seed + static_cast<std::uint64_t>(i);
  return RunSweep(base, seeds, jobs);
}

void WriteSeedCsv(std::ostream& os, std::span<const SeedOutcome> outcomes) {
  os << kSeedCsvHeader << '\n';
  for (const auto& o : outcomes) {
    os << o.seed << ',' << (o.moved ? 1 : 0) << ',' << (o.optimized ? 1 : 0)
       << ',' << (o.steps ? std::to_string(*o.steps) : std::string()) << ','
       << FormatDouble(o.distance) << '\n';
  }
}

std::vector<SeedOutcome> ReadSeedCsv(std::string_view text) {
  std::vector<SeedOutcome> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || SplitCsvLine(line).size() != 5) {
    throw Error(ErrorCode::kConfigParse, "missing seed CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 5) throw Error(ErrorCode::kConfigParse, "bad row: " + line);
    SeedOutcome o;
    o.seed = std::stoull(f[0]);
    o.moved = f[1] == "1";
    o.optimized = f[2] == "1";
    if (!f[3].empty()) o.steps = std::stoll(f[3]);
    o.distance = ParseDouble(f[4]);
    out.push_back(o);
  }
  return out;
}

void WriteTrajectoryCsv(std::ostream& os,
                        std::span<const TrajectorySnapshot> trajectory) {
  os << "step,kind,index,theta1,theta2\n";
  for (const auto& s : trajectory) {
    os << s.step << ",theta,0," << FormatDouble(s.theta[0]) << ','
       << FormatDouble(s.theta[1]) << '\n';
    for (std::size_t k = 0; k < s.perturbed.size(); ++k) {
      os << s.step << ",perturbed," << k << ','
         << FormatDouble(s.perturbed[k][0]) << ','
         << FormatDouble(s.perturbed[k][1]) << '\n';
    }
  }
}

}  // namespace paramnoise::toy
