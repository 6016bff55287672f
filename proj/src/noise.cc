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

#include "paramnoise/noise.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "paramnoise/csv.h"
#include "paramnoise/error.h"

namespace paramnoise {
namespace {

void CheckReturns(std::span<const double> returns) {
  if (returns.empty()) {
    throw Error(ErrorCode::kEmptyReturns, "no returns in window");
  }
  for (double r : returns) {
    if (!std::isfinite(r)) {
      throw Error(ErrorCode::kNonFiniteReturn, "return is not finite");
    }
  }
}

// Float sums of rewards must not flip the degenerate branches.
bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

}  // namespace

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kFixedVariance: return "fv";
    case Strategy::kAdaptiveCov: return "ac";
    case Strategy::kProposed: return "pro";
    case Strategy::kPlappert: return "plappert";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "fv") return Strategy::kFixedVariance;
  if (lower == "ac") return Strategy::kAdaptiveCov;
  if (lower == "pro") return Strategy::kProposed;
  if (lower == "plappert" || lower == "plappert-baseline") {
    return Strategy::kPlappert;
  }
  throw Error(ErrorCode::kConfigParse, "unknown strategy '" + lower + "'");
}

AlphaRule AlphaRuleFor(Strategy s) {
  switch (s) {
    case Strategy::kAdaptiveCov: return AlphaRule::kDirectionalOnly;
    case Strategy::kProposed: return AlphaRule::kSwitching;
    case Strategy::kFixedVariance:
    case Strategy::kPlappert: return AlphaRule::kIsotropicOnly;
  }
  return AlphaRule::kSwitching;
}

bool AdaptsSigma(Strategy s) {
  return s == Strategy::kProposed || s == Strategy::kPlappert;
}

void NoiseHyper::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kConfigInvalid, what);
  };
  if (!(h > 0)) fail("h must be positive");
  if (!(h2 > 0)) fail("h2 must be positive");
  if (window < 1) fail("window (K) must be >= 1");
  if (!(delta > 0)) fail("delta must be positive");
  if (!(sigma_init > 0)) fail("sigma_init must be positive");
  if (!(sigma_factor > 1)) fail("sigma_factor must exceed 1");
}

NoiseDistribution::NoiseDistribution(int dim, double sigma) : sigma_(sigma) {
  if (dim < 1) throw Error(ErrorCode::kConfigInvalid, "dim must be >= 1");
  if (!(sigma > 0)) throw Error(ErrorCode::kConfigInvalid, "sigma must be > 0");
  covariance_ = Matrix::Identity(dim, dim) * (sigma * sigma);
}

void NoiseDistribution::set_sigma(double sigma) {
  if (!(sigma > 0)) throw Error(ErrorCode::kConfigInvalid, "sigma must be > 0");
  sigma_ = sigma;
}

void NoiseDistribution::set_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "alpha must lie in [0, 1]");
  }
  alpha_ = alpha;
}

void NoiseDistribution::set_covariance(Matrix covariance) {
  if (covariance.rows() != covariance_.rows() ||
      covariance.cols() != covariance_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance shape changed");
  }
  if (!IsSymmetric(covariance)) {
    throw Error(ErrorCode::kNotSymmetric, "covariance is not symmetric");
  }
  covariance_ = std::move(covariance);
}

Vector ComputeWeights(std::span<const double> returns, double h) {
  CheckReturns(returns);
  const auto k = static_cast<Eigen::Index>(returns.size());
  const auto [min_it, max_it] = std::minmax_element(returns.begin(), returns.end());
  const double j_max = *max_it;
  const double j_min = *min_it;
  if (NearlyEqual(j_max, j_min)) {
    return Vector::Constant(k, 1.0 / static_cast<double>(k));
  }
  const double range = j_max - j_min;
  Vector w(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    w[i] = std::exp(-h * (j_max - returns[i]) / range);
  }
  return w / w.sum();
}

Matrix UpdateCovariance(std::span<const EpisodeRecord> records,
                        const Vector& weights) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyReturns, "no episode records");
  }
  if (static_cast<Eigen::Index>(records.size()) != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "weights and records differ in length");
  }
  const Eigen::Index n = records.front().noise.size();
  for (const auto& r : records) {
    if (r.noise.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "noise vectors differ in length");
    }
  }
  Matrix sigma = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < records.size(); ++k) {
    const double w = weights[static_cast<Eigen::Index>(k)];
    if (w == 0.0) continue;
    const Vector& e = records[k].noise;
    // lower triangle only, mirrored below, so the result is exactly symmetric
    for (Eigen::Index j = 0; j < n; ++j) {
      const double wej = w * e[j];
      for (Eigen::Index i = j; i < n; ++i) sigma(i, j) += wej * e[i];
    }
  }
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  return sigma;
}

double ComputeAlpha(std::span<const double> returns, double h2) {
  CheckReturns(returns);
  const auto [min_it, max_it] = std::minmax_element(returns.begin(), returns.end());
  double j_max = *max_it;
  double j_min = *min_it;
  if (NearlyEqual(j_max, 0.0)) return 1.0;
  if (j_max < 0.0) {
    j_max -= j_min;
    j_min = 0.0;
  }
  if (NearlyEqual(j_max, j_min)) return 1.0;
  const double alpha = std::exp(-h2 * (j_max - j_min) / j_max);
  return std::clamp(alpha, 0.0, 1.0);
}

double AdaptSigma(double sigma, double d, double delta, double factor) {
  return d < delta ? sigma * factor : sigma / factor;
}

double ActionDistance(const Matrix& clean, const Matrix& perturbed) {
  if (clean.rows() != perturbed.rows() || clean.cols() != perturbed.cols()) {
    throw Error(ErrorCode::kArchitectureMismatch,
                "action batches differ in shape");
  }
  if (clean.rows() == 0) throw Error(ErrorCode::kEmptyBatch, "no states");
  // (1/|A|) sum_i mean_s (diff^2) == mean over all entries
  return std::sqrt((clean - perturbed).squaredNorm() /
                   static_cast<double>(clean.size()));
}

Matrix EffectiveCovariance(const NoiseDistribution& dist) {
  const double a = dist.alpha();
  if (a == 1.0) {
    return Matrix::Identity(dist.dim(), dist.dim()) *
           (dist.sigma() * dist.sigma());
  }
  Matrix m = (1.0 - a) * dist.covariance();
  m.diagonal().array() += a * dist.sigma() * dist.sigma();
  return m;
}

double SigmaBar(const Matrix& covariance) {
  if (covariance.rows() == 0) return 0.0;
  const double mean_diag =
      covariance.trace() / static_cast<double>(covariance.rows());
  return std::sqrt(std::max(0.0, mean_diag));
}

double DefaultJitter(const Matrix& covariance) {
  if (covariance.rows() == 0) return 0.0;
  const double j = 1e-9 * std::max(0.0, covariance.trace()) /
                   static_cast<double>(covariance.rows());
  // a collapsed covariance can underflow the relative jitter to zero
  return std::max(j, std::numeric_limits<double>::min());
}

NoiseSampler::NoiseSampler(const NoiseDistribution& dist)
    : dim_(dist.dim()), alpha_(dist.alpha()), sigma_(dist.sigma()) {
  if (alpha_ < 1.0) {
    CholeskyFactor f = Cholesky(dist.covariance(), DefaultJitter(dist.covariance()));
    lower_ = std::move(f.lower);
    jitter_ = f.jitter;
  }
}

Vector NoiseSampler::Sample(Rng& rng) const {
  Vector eps = Vector::Zero(dim_);
  if (alpha_ < 1.0) eps = std::sqrt(1.0 - alpha_) * SampleMvn(lower_, rng);
  if (alpha_ > 0.0) eps += (std::sqrt(alpha_) * sigma_) * StandardNormal(dim_, rng);
  return eps;
}

Vector SampleNoise(const NoiseDistribution& dist, Rng& rng) {
  return NoiseSampler(dist).Sample(rng);
}

WindowUpdate EndOfWindowUpdate(const NoiseDistribution& dist,
                               std::span<const EpisodeRecord> records,
                               std::optional<double> d_estimate,
                               const NoiseHyper& hyper, int update_index) {
  if (static_cast<int>(records.size()) != hyper.window) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(hyper.window) + " records, got " +
                    std::to_string(records.size()));
  }
  std::vector<double> returns;
  returns.reserve(records.size());
  for (const auto& r : records) {
    if (r.noise.size() != dist.dim()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "noise length differs from distribution dim");
    }
    returns.push_back(r.ret);
  }

  WindowUpdate out{dist, {}};
  const Vector weights = ComputeWeights(returns, hyper.h);
  out.next.set_covariance(UpdateCovariance(records, weights));

  switch (hyper.alpha_rule) {
    case AlphaRule::kSwitching:
      out.next.set_alpha(ComputeAlpha(returns, hyper.h2));
      break;
    case AlphaRule::kDirectionalOnly:
      out.next.set_alpha(0.0);
      break;
    case AlphaRule::kIsotropicOnly:
      out.next.set_alpha(1.0);
      break;
  }
  if (d_estimate) {
    out.next.set_sigma(AdaptSigma(dist.sigma(), *d_estimate, hyper.delta,
                                  hyper.sigma_factor));
  }
  out.log = {update_index, SigmaBar(out.next.covariance()), out.next.alpha(),
             out.next.sigma()};
  return out;
}

void WriteExplorationLogCsv(std::ostream& os,
                            std::span<const ExplorationLog> logs) {
  os << kExplorationLogHeader << '\n';
  for (const auto& l : logs) {
    os << l.update_index << ',' << FormatDouble(l.sigma_bar) << ','
       << FormatDouble(l.alpha) << ',' << FormatDouble(l.sigma) << '\n';
  }
}

}  // namespace paramnoise
