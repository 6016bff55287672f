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

#ifndef PARAMNOISE_NETS_H_
#define PARAMNOISE_NETS_H_

#include <vector>

#include <Eigen/Core>

#include "paramnoise/mvn.h"
#include "paramnoise/rng.h"

namespace paramnoise {

// Two hidden layers, each affine -> optional layer norm -> ReLU.
//
// All parameters live in one contiguous vector. The affine weights and biases
// come first and form the perturbable prefix of length
// num_perturbable(); layer-norm gains and biases follow and are never
// perturbed. Shaped views are Eigen maps into that vector, so the flat and
// shaped views always alias the same values. Batches are column-major: one
// sample per column.
struct MlpLayout {
  int input_dim = 0;
  int hidden1 = 64;
  int hidden2 = 64;
  int output_dim = 0;
  // extra inputs concatenated onto the first hidden layer's output
  int side_dim = 0;
  bool layer_norm = true;

  bool operator==(const MlpLayout&) const = default;
};

class Mlp {
 public:
  struct Cache {
    Matrix x;       // input
    Matrix side;    // side input
    Matrix z1, n1, a1;
    Eigen::RowVectorXd inv_std1;
    Matrix z2, n2, a2;
    Eigen::RowVectorXd inv_std2;
    Matrix out;     // pre-output-activation
  };

  Mlp() = default;
  explicit Mlp(const MlpLayout& layout);

  const MlpLayout& layout() const { return layout_; }
  Eigen::Index num_params() const { return params_.size(); }
  Eigen::Index num_perturbable() const { return num_perturbable_; }

  Vector& params() { return params_; }
  const Vector& params() const { return params_; }
  Eigen::VectorBlock<Vector> flat() { return params_.head(num_perturbable_); }
  Eigen::VectorBlock<const Vector> flat() const {
    return params_.head(num_perturbable_);
  }

  using MatMap = Eigen::Map<Matrix>;
  using ConstMatMap = Eigen::Map<const Matrix>;
  using VecMap = Eigen::Map<Vector>;
  using ConstVecMap = Eigen::Map<const Vector>;

  // layer in {0, 1, 2}
  MatMap weight(int layer);
  ConstMatMap weight(int layer) const;
  VecMap bias(int layer);
  ConstVecMap bias(int layer) const;
  // hidden layer in {0, 1}; only meaningful with layer_norm
  VecMap ln_gain(int layer);
  VecMap ln_bias(int layer);
  ConstVecMap ln_gain(int layer) const;
  ConstVecMap ln_bias(int layer) const;

  // Linear output (no output activation). `side` has side_dim rows.
  Matrix Forward(const Matrix& x, const Matrix& side, Cache* cache) const;

  // Accumulates dL/dparams into grad (length num_params()) given dL/dout,
  // and returns dL/dside when side_dim > 0 (empty matrix otherwise).
  Matrix Backward(const Cache& cache, const Matrix& grad_out,
                  Vector* grad) const;

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for hidden layers, uniform in
  // [-final_scale, final_scale] for the output layer; gains 1, biases 0.
  void Initialize(Rng& rng, double final_scale = 3e-3);

  // Adds the gradient of coeff * sum of squared hidden-layer weights to grad
  // and returns that penalty. Biases, layer-norm terms and the output layer
  // are not penalized.
  double AddL2Penalty(double coeff, Vector* grad) const;

 private:
  struct Offsets {
    Eigen::Index w[3], b[3], g[2], beta[2];
  };
  int rows(int layer) const;
  int cols(int layer) const;

  MlpLayout layout_;
  Offsets off_{};
  Eigen::Index num_perturbable_ = 0;
  Vector params_;
};

// Deterministic actor: tanh output scaled per dimension by the action limit.
class PolicyNet {
 public:
  PolicyNet() = default;
  PolicyNet(int state_dim, int hidden1, int hidden2, std::vector<double> limits,
            bool layer_norm = true);

  int state_dim() const { return net_.layout().input_dim; }
  int action_dim() const { return net_.layout().output_dim; }
  const std::vector<double>& limits() const { return limits_; }
  Eigen::Index num_perturbable() const { return net_.num_perturbable(); }

  Mlp& mlp() { return net_; }
  const Mlp& mlp() const { return net_; }
  Vector& params() { return net_.params(); }
  const Vector& params() const { return net_.params(); }

  void Initialize(Rng& rng) { net_.Initialize(rng); }

  // states: state_dim x B -> actions: action_dim x B. Throws kDimensionMismatch.
  Matrix Forward(const Matrix& states) const;
  Vector Act(const Vector& state) const;

  // dL/dparams for a loss with gradient grad_actions wrt Forward(states).
  Vector Backward(const Matrix& states, const Matrix& grad_actions) const;

  // Copy with flat() += eps. Throws kDimensionMismatch.
  PolicyNet Perturbed(const Vector& eps) const;

  bool SameArchitecture(const PolicyNet& other) const;

 private:
  Mlp net_;
  std::vector<double> limits_;
  Eigen::VectorXd limit_vec_;
};

// Q(s, a): the action joins after the first hidden layer.
class CriticNet {
 public:
  CriticNet() = default;
  CriticNet(int state_dim, int action_dim, int hidden1, int hidden2,
            bool layer_norm = true);

  int state_dim() const { return net_.layout().input_dim; }
  int action_dim() const { return net_.layout().side_dim; }

  Mlp& mlp() { return net_; }
  const Mlp& mlp() const { return net_; }
  Vector& params() { return net_.params(); }
  const Vector& params() const { return net_.params(); }

  void Initialize(Rng& rng) { net_.Initialize(rng); }

  // 1 x B row of Q values.
  Eigen::RowVectorXd Forward(const Matrix& states, const Matrix& actions) const;

  struct Gradients {
    Vector params;
    Matrix actions;  // dL/da, action_dim x B
  };
  Gradients Backward(const Matrix& states, const Matrix& actions,
                     const Eigen::RowVectorXd& grad_q) const;

 private:
  Mlp net_;
};

// Root-mean action discrepancy between two actors over a batch of states
// (columns). Throws kEmptyBatch or kArchitectureMismatch.
double PolicyDistance(const PolicyNet& policy, const PolicyNet& perturbed,
                      const Matrix& states);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(Eigen::Index size, AdamConfig config);

  // params -= step(grad)
  void Step(Vector& params, const Vector& grad);

  const AdamConfig& config() const { return config_; }
  const Vector& m() const { return m_; }
  const Vector& v() const { return v_; }
  long long t() const { return t_; }
  void Restore(Vector m, Vector v, long long t);

 private:
  AdamConfig config_;
  Vector m_, v_;
  long long t_ = 0;
};

// target <- tau * source + (1 - tau) * target
void SoftUpdate(Vector& target, const Vector& source, double tau);

}  // namespace paramnoise

#endif  // PARAMNOISE_NETS_H_
