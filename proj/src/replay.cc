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

#include "paramnoise/replay.h"

#include <string>

#include "paramnoise/error.h"

namespace paramnoise {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim) {
  if (capacity == 0) {
    throw Error(ErrorCode::kConfigInvalid, "replay capacity must be positive");
  }
  data_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::Add(Transition t) {
  if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_ ||
      t.action.size() != action_dim_) {
    throw Error(ErrorCode::kDimensionMismatch, "transition has wrong shape");
  }
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
  size_ = data_.size();
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw Error(ErrorCode::kDimensionMismatch, "index out of range");
  return data_[i];
}

Batch ReplayBuffer::Sample(std::size_t n, Rng& rng) const {
  if (n == 0 || size_ < n) {
    throw Error(ErrorCode::kBufferTooSmall,
                "buffer holds " + std::to_string(size_) + ", need " +
                    std::to_string(n));
  }
  const auto b = static_cast<Eigen::Index>(n);
  Batch out{Matrix(state_dim_, b), Matrix(action_dim_, b),
            Eigen::RowVectorXd(b), Matrix(state_dim_, b),
            Eigen::RowVectorXd(b)};
  for (Eigen::Index j = 0; j < b; ++j) {
    const Transition& t = data_[rng.UniformInt(size_)];
    out.states.col(j) = t.state;
    out.actions.col(j) = t.action;
    out.rewards[j] = t.reward;
    out.next_states.col(j) = t.next_state;
    out.done[j] = t.done ? 1.0 : 0.0;
  }
  return out;
}

Matrix ReplayBuffer::SampleStates(std::size_t n, Rng& rng) const {
  if (n == 0 || size_ == 0) {
    throw Error(ErrorCode::kBufferTooSmall, "no states to sample");
  }
  Matrix out(state_dim_, static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = data_[rng.UniformInt(size_)].state;
  }
  return out;
}

RunningNormalizer::RunningNormalizer(int dim, double clip)
    : mean_(Vector::Zero(dim)), m2_(Vector::Zero(dim)), clip_(clip) {}

void RunningNormalizer::Update(const Vector& x) {
  if (x.size() != mean_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "normalizer input size");
  }
  count_ += 1.0;
  const Vector delta = x - mean_;
  mean_ += delta / count_;
  m2_.array() += delta.array() * (x - mean_).array();
}

Vector RunningNormalizer::variance() const {
  if (count_ < 2.0) return Vector::Zero(mean_.size());
  return (m2_ / count_).cwiseMax(0.0);
}

Vector RunningNormalizer::Normalize(const Vector& x) const {
  const Vector std = (variance().array() + 1e-8).sqrt();
  return ((x - mean_).array() / std.array()).cwiseMax(-clip_).cwiseMin(clip_);
}

Matrix RunningNormalizer::Normalize(const Matrix& columns) const {
  const Vector inv_std = (variance().array() + 1e-8).rsqrt();
  Matrix out = columns.colwise() - mean_;
  out.array().colwise() *= inv_std.array();
  return out.cwiseMax(-clip_).cwiseMin(clip_);
}

void RunningNormalizer::Restore(double count, Vector mean, Vector m2) {
  if (mean.size() != mean_.size() || m2.size() != m2_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "normalizer state size");
  }
  count_ = count;
  mean_ = std::move(mean);
  m2_ = std::move(m2);
}

}  // namespace paramnoise
