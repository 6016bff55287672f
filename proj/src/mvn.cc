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

#include "paramnoise/mvn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "paramnoise/error.h"

namespace paramnoise {

bool IsSymmetric(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      const double a = m(i, j);
      const double b = m(j, i);
      if (!(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)))) {
        return false;
      }
    }
  }
  return true;
}

CholeskyFactor Cholesky(const Matrix& m, double jitter) {
  if (!IsSymmetric(m)) {
    throw Error(ErrorCode::kNotSymmetric,
                "matrix of size " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " is not symmetric");
  }
  if (!(jitter >= 0.0)) {
    throw Error(ErrorCode::kNotPsd, "jitter must be non-negative");
  }
  const Eigen::Index n = m.rows();
  if (m.isZero(0.0)) return {Matrix::Zero(n, n), 0.0};

  Eigen::LLT<Matrix> llt(n);
  double j = 0.0;
  constexpr int kMaxEscalations = 10;
  for (int attempt = 0; attempt <= kMaxEscalations + 1; ++attempt) {
    if (attempt == 1) {
      if (jitter == 0.0) break;
      j = jitter;
    } else if (attempt > 1) {
      j *= 10.0;
    }
    Matrix shifted = m;
    shifted.diagonal().array() += j;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      Matrix lower = llt.matrixL();
      if (lower.allFinite()) return {std::move(lower), j};
    }
  }
  throw Error(ErrorCode::kNotPsd,
              "cholesky failed after jitter escalation up to " +
                  std::to_string(j));
}

Vector StandardNormal(Eigen::Index n, Rng& rng) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.Normal();
  return z;
}

Vector SampleMvn(const Matrix& lower, Rng& rng) {
  const Vector z = StandardNormal(lower.rows(), rng);
  return lower.triangularView<Eigen::Lower>() * z;
}

}  // namespace paramnoise
