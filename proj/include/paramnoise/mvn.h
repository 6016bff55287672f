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

#ifndef PARAMNOISE_MVN_H_
#define PARAMNOISE_MVN_H_

#include <Eigen/Core>

#include "paramnoise/rng.h"

namespace paramnoise {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Lower factor with lower * lower^T = m + jitter * I.
struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;
};

// |m(i,j) - m(j,i)| <= 1e-12 * max(1, |m(i,j)|) for all i, j.
bool IsSymmetric(const Matrix& m);

// Factorizes m + j*I for the first j in {0, jitter, 10*jitter, ...} that
// succeeds, trying at most 10 escalations past `jitter`. The all-zero matrix
// factors to the zero matrix with j = 0.
//
// Throws Error(kNotSymmetric) for asymmetric input and Error(kNotPsd) when
// every escalation fails.
CholeskyFactor Cholesky(const Matrix& m, double jitter);

// Returns lower * z with z a vector of independent standard normals from rng.
Vector SampleMvn(const Matrix& lower, Rng& rng);

// Fills a vector with independent standard normals.
Vector StandardNormal(Eigen::Index n, Rng& rng);

}  // namespace paramnoise

#endif  // PARAMNOISE_MVN_H_
