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


#ifndef PARAMNOISE_CLI_H_
#define PARAMNOISE_CLI_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paramnoise/ddpg.h"
#include "paramnoise/error.h"
#include "paramnoise/toybench.h"

namespace paramnoise::cli {

enum class Mode { kToy, kRl, kBaselineCompare };

std::string_view ModeName(Mode m);
Mode ParseMode(std::string_view name);  // throws kConfigParse

// Everything one invocation needs. Serialized as `key = value` lines; see
// FormatConfig for the full key list.
struct ExperimentConfig {
  Mode mode = Mode::kToy;
  Strategy strategy = Strategy::kProposed;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out = "runs";
  int jobs = 1;
  // toy: sweep FV, AC and Pro over both reward types and both sigma^2 values
  bool table = false;
  // toy: per-seed trajectory and exploration CSVs
  bool trajectory = false;
  // rl: write a final checkpoint per seed
  bool checkpoint = false;
  toy::ToyConfig toy;
  TrainConfig rl;
};

using Override = std::pair<std::string, std::string>;

// Defaults for the mode, then `file_text` lines, then overrides in order.
// rl.sigma_init defaults per environment unless set explicitly. Validates
// the result. Throws kConfigParse, kConfigInvalid or kEnvNotFound.
ExperimentConfig ResolveConfig(Mode mode, std::string_view file_text,
                               std::span<const Override> overrides);

// Full resolved config; feeding it back to ResolveConfig reproduces it.
std::string FormatConfig(const ExperimentConfig& config);

std::vector<std::uint64_t> ParseSeeds(std::string_view text);
std::string FormatSeeds(std::span<const std::uint64_t> seeds);

// Linear interpolation between order statistics; NaN for an empty sample.
// NaN entries are dropped first.
double Quantile(std::vector<double> values, double q);

struct RlSummaryRow {
  std::string arm;
  int epoch = 0;
  int seeds = 0;
  double median_perturbed = 0, q25_perturbed = 0, q75_perturbed = 0;
  double median_clean = 0, q25_clean = 0, q75_clean = 0;
  int nonzero_perturbed = 0;
};

inline constexpr std::string_view kRlSummaryHeader =
    "arm,epoch,seeds,median_perturbed,q25_perturbed,q75_perturbed,"
    "median_clean,q25_clean,q75_clean,nonzero_perturbed";

// One row per epoch over seed curves of equal length.
std::vector<RlSummaryRow> SummarizeCurves(
    std::string_view arm, std::span<const std::vector<EpochStats>> curves);
void WriteRlSummary(std::ostream& os, std::span<const RlSummaryRow> rows);
std::vector<EpochStats> ReadCurveCsv(std::string_view text);

inline constexpr std::string_view kToySummaryHeader =
    "strategy,sigma_fix_sq,reward,runs,moved,optimized,step_mean,step_std,"
    "distance_mean,distance_std";
std::string ToySummaryLine(const toy::ToyConfig& cell, const toy::SweepStats& s);

inline constexpr std::string_view kEpisodeCsvHeader = "episode,return,alpha";

// Runs the experiment and writes its artifacts under config.out; progress
// and the summary table go to `log`. Throws Error(kIoError) on write failure.
void RunExperiment(const ExperimentConfig& config, std::ostream& log);

// Process exit status for an error code; 0 is reserved for success.
int ExitCodeFor(ErrorCode code);

}  // namespace paramnoise::cli

#endif  // PARAMNOISE_CLI_H_
