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

#ifndef PARAMNOISE_TOYBENCH_H_
#define PARAMNOISE_TOYBENCH_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "paramnoise/noise.h"

namespace paramnoise::toy {

using Vec2 = Eigen::Vector2d;

// Two-parameter benchmark: maximize a reward peaked at c, starting from
// theta_init, with the policy gradient evaluated at perturbed parameters.
struct ToyConfig {
  Vec2 theta_init = Vec2::Zero();
  Vec2 c = Vec2(3.0, 3.0);
  bool sparse = false;
  // sparse reward is nonzero where |theta - c|^2 <= sparse_threshold
  double sparse_threshold = 6.25;
  Strategy strategy = Strategy::kProposed;
  double sigma_fix_sq = 1.0;
  int window = 10;  // K
  double lr = 0.05;
  double h = 8.0;
  double h2 = 10.0;
  // cap on parameter updates (one update per window of K episodes)
  std::int64_t max_steps = 50000;
  double tol = 0.01;
  std::uint64_t seed = 0;
  bool record_trajectory = false;
  int trajectory_stride = 1;

  // Throws Error(kConfigInvalid).
  void Validate() const;
};

struct TrajectorySnapshot {
  std::int64_t step = 0;
  Vec2 theta;
  std::vector<Vec2> perturbed;
};

struct ToyResult {
  bool moved = false;
  bool optimized = false;
  std::optional<std::int64_t> steps_to_optimize;
  double final_distance = 0.0;
  std::int64_t steps_run = 0;
  std::vector<TrajectorySnapshot> trajectory;
  std::vector<ExplorationLog> exploration;
};

double RewardDense(const Vec2& theta, const Vec2& c);
double RewardSparse(const Vec2& theta, const Vec2& c, double threshold = 6.25);
// Zero outside the sparse support; the boundary belongs to the support.
Vec2 RewardGradient(const Vec2& theta, const Vec2& c, bool sparse,
                    double threshold = 6.25);

ToyResult RunToy(const ToyConfig& config);

// Aggregates over seeds. Step statistics use optimized runs only and are NaN
// when none optimized. Standard deviations are population (1/n) values.
struct SweepStats {
  int runs = 0;
  int moved = 0;
  int optimized = 0;
  double step_mean = 0.0;
  double step_std = 0.0;
  double distance_mean = 0.0;
  double distance_std = 0.0;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool moved = false;
  bool optimized = false;
  std::optional<std::int64_t> steps;
  double distance = 0.0;
};

SweepStats Aggregate(std::span<const SeedOutcome> outcomes);

struct SweepResult {
  std::vector<SeedOutcome> outcomes;  // ordered by seed
  SweepStats stats;
};

// Runs seeds base.seed, base.seed + 1, ..., with up to `jobs` threads.
// Distances are quantized to their CSV representation before aggregation.
SweepResult RunSweep(const ToyConfig& base, int n_seeds, int jobs = 1);
// Same over an explicit seed list; outcomes keep the list's order.
SweepResult RunSweep(const ToyConfig& base, std::span<const std::uint64_t> seeds,
                     int jobs = 1);

inline constexpr std::string_view kSeedCsvHeader =
    "seed,moved,optimized,steps,distance";
void WriteSeedCsv(std::ostream& os, std::span<const SeedOutcome> outcomes);
std::vector<SeedOutcome> ReadSeedCsv(std::string_view text);

void WriteTrajectoryCsv(std::ostream& os,
                        std::span<const TrajectorySnapshot> trajectory);

}  // namespace paramnoise::toy

#endif  // PARAMNOISE_TOYBENCH_H_
