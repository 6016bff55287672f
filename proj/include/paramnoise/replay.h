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

#ifndef PARAMNOISE_REPLAY_H_
#define PARAMNOISE_REPLAY_H_

#include <cstddef>
#include <vector>

#include "paramnoise/mvn.h"
#include "paramnoise/rng.h"

namespace paramnoise {

struct Transition {
  Vector state;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  // true only for terminal states; horizon truncation does not count
  bool done = false;
};

struct Batch {
  Matrix states;       // state_dim x B
  Matrix actions;      // action_dim x B
  Eigen::RowVectorXd rewards;
  Matrix next_states;  // state_dim x B
  Eigen::RowVectorXd done;  // 1.0 where terminal
};

// Fixed-capacity ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

  void Add(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const;

  // Throws kBufferTooSmall when fewer than n transitions are stored.
  Batch Sample(std::size_t n, Rng& rng) const;
  // n stored states drawn uniformly, as columns.
  Matrix SampleStates(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  int state_dim_;
  int action_dim_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<Transition> data_;
};

// Online per-dimension mean and variance (Welford / Chan merging).
class RunningNormalizer {
 public:
  RunningNormalizer() = default;
  explicit RunningNormalizer(int dim, double clip = 5.0);

  void Update(const Vector& x);
  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const Vector& mean() const { return mean_; }
  // population variance; zero before two samples
  Vector variance() const;
  const Vector& m2() const { return m2_; }
  double clip() const { return clip_; }

  // (x - mean) / sqrt(var + 1e-8), clipped to [-clip, clip].
  Vector Normalize(const Vector& x) const;
  Matrix Normalize(const Matrix& columns) const;

  void Restore(double count, Vector mean, Vector m2);

 private:
  double count_ = 0.0;
  Vector mean_;
  Vector m2_;
  double clip_ = 5.0;
};

}  // namespace paramnoise

#endif  // PARAMNOISE_REPLAY_H_
