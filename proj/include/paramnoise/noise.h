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

#ifndef PARAMNOISE_NOISE_H_
#define PARAMNOISE_NOISE_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paramnoise/mvn.h"
#include "paramnoise/rng.h"

namespace paramnoise {

// How the mixing coefficient alpha evolves between windows.
enum class AlphaRule {
  kSwitching,        // return-gap rule; the proposed method
  kDirectionalOnly,  // alpha pinned to 0: sample from the adapted covariance
  kIsotropicOnly,    // alpha pinned to 1: sample from sigma^2 I
};

// Exploration strategies shared by the toy benchmark and the RL trainer.
//   kFixedVariance  N(0, sigma^2 I), sigma never changes
//   kAdaptiveCov    N(0, Sigma), Sigma from return-weighted outer products
//   kProposed       N(0, (1 - alpha) Sigma + alpha sigma^2 I)
//   kPlappert       N(0, sigma^2 I), sigma adapted to a target action distance
enum class Strategy { kFixedVariance, kAdaptiveCov, kProposed, kPlappert };

std::string_view StrategyName(Strategy s);
// Accepts fv, ac, pro, plappert (case-insensitive). Throws kConfigParse.
Strategy ParseStrategy(std::string_view name);
AlphaRule AlphaRuleFor(Strategy s);
// True when sigma follows the action-distance rule under this strategy.
bool AdaptsSigma(Strategy s);

struct NoiseHyper {
  double h = 8.0;       // weight sharpness
  double h2 = 10.0;     // switch sharpness
  int window = 10;      // K, episodes per covariance update
  double delta = 0.2;   // target action-space deviation
  double sigma_init = 0.2;
  double sigma_factor = 1.01;
  AlphaRule alpha_rule = AlphaRule::kSwitching;

  // Throws kConfigInvalid.
  void Validate() const;
};

// Perturbation applied for one episode and the return it earned.
struct EpisodeRecord {
  Vector noise;
  double ret = 0.0;
};

struct ExplorationLog {
  int update_index = 0;
  double sigma_bar = 0.0;
  double alpha = 1.0;
  double sigma = 0.0;
};

// State of the mixed distribution N(0, (1 - alpha) Sigma + alpha sigma^2 I).
class NoiseDistribution {
 public:
  // Sigma = sigma^2 I and alpha = 1, so the first window is isotropic.
  NoiseDistribution(int dim, double sigma);

  int dim() const { return static_cast<int>(covariance_.rows()); }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }
  const Matrix& covariance() const { return covariance_; }

  // Setters validate the invariants and throw kConfigInvalid /
  // kDimensionMismatch / kNotSymmetric.
  void set_sigma(double sigma);
  void set_alpha(double alpha);
  void set_covariance(Matrix covariance);

 private:
  double sigma_;
  double alpha_ = 1.0;
  Matrix covariance_;
};

// Softmax weights over normalized return gaps. Uniform when all returns are
// equal (relative tolerance 1e-12).
Vector ComputeWeights(std::span<const double> returns, double h);

// Sum_k w_k eps_k eps_k^T. Symmetric and PSD by construction.
Matrix UpdateCovariance(std::span<const EpisodeRecord> records,
                        const Vector& weights);

// Mixing coefficient from the spread of returns in a window.
//
// With Jmax, Jmin the extreme returns: Jmax == 0 gives 1; Jmax < 0 is shifted
// to (Jmax - Jmin, 0) first; otherwise exp(-h2 (Jmax - Jmin) / Jmax) clamped
// to [0, 1]. The Jmax == 0 test runs before the negative shift, so
// returns like {0, -3} give alpha = 1.
double ComputeAlpha(std::span<const double> returns, double h2);

// sigma * factor when d < delta, otherwise sigma / factor.
double AdaptSigma(double sigma, double d, double delta, double factor);

// Root of the per-dimension mean squared difference between two action
// batches (rows are states, columns action dimensions).
double ActionDistance(const Matrix& clean, const Matrix& perturbed);

Matrix EffectiveCovariance(const NoiseDistribution& dist);

// sqrt(trace(Sigma) / N).
double SigmaBar(const Matrix& covariance);

// Jitter used when factoring a covariance: 1e-9 * trace / N, floored at the
// smallest normal double.
double DefaultJitter(const Matrix& covariance);

// Draws from N(0, EffectiveCovariance(dist)). Factorization happens once at
// construction; sampling is O(N^2) per draw.
//
// The draw is sqrt(1 - alpha) L z1 + sqrt(alpha) sigma z2 with L L^T the
// jittered Sigma and z1, z2 independent standard normals, which has the same
// law as factoring the mixed covariance but only needs Sigma's factor, so the
// factor stays valid when sigma changes mid-window.
class NoiseSampler {
 public:
  explicit NoiseSampler(const NoiseDistribution& dist);

  Vector Sample(Rng& rng) const;

  void set_sigma(double sigma) { sigma_ = sigma; }
  double sigma() const { return sigma_; }
  int dim() const { return dim_; }
  // Jitter the covariance factorization needed (0 when not factored).
  double jitter() const { return jitter_; }

 private:
  int dim_;
  double alpha_;
  double sigma_;
  double jitter_ = 0.0;
  Matrix lower_;  // empty when alpha == 1
};

Vector SampleNoise(const NoiseDistribution& dist, Rng& rng);

struct WindowUpdate {
  NoiseDistribution next;
  ExplorationLog log;
};

// Folds a full window of episodes into the next sampling distribution:
// Sigma from the return-weighted outer products, alpha from the return gap
// (or pinned by hyper.alpha_rule), sigma from the action-distance rule when
// d_estimate is present and left unchanged otherwise. The log carries the
// sigma-bar of the new Sigma.
//
// Throws kDimensionMismatch if the record count differs from hyper.window.
WindowUpdate EndOfWindowUpdate(const NoiseDistribution& dist,
                               std::span<const EpisodeRecord> records,
                               std::optional<double> d_estimate,
                               const NoiseHyper& hyper, int update_index);

inline constexpr std::string_view kExplorationLogHeader =
    "update_index,sigma_bar,alpha,sigma";
void WriteExplorationLogCsv(std::ostream& os,
                            std::span<const ExplorationLog> logs);

}  // namespace paramnoise

#endif  // PARAMNOISE_NOISE_H_
