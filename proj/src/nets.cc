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

#include "paramnoise/nets.h"

#include <cmath>
#include <string>

#include "paramnoise/error.h"
#include "paramnoise/noise.h"

namespace paramnoise {
namespace {

constexpr double kLayerNormEps = 1e-5;

// Per-column normalization over the feature (row) axis.
void LayerNormForward(const Matrix& z, Eigen::Map<const Vector> gain,
                      Eigen::Map<const Vector> bias, Matrix* normed,
                      Eigen::RowVectorXd* inv_std, Matrix* y) {
  const double rows = static_cast<double>(z.rows());
  const Eigen::RowVectorXd mean = z.colwise().sum() / rows;
  *normed = z.rowwise() - mean;
  const Eigen::RowVectorXd var = normed->array().square().colwise().sum() / rows;
  *inv_std = (var.array() + kLayerNormEps).rsqrt().matrix();
  normed->array().rowwise() *= inv_std->array();
  *y = (normed->array().colwise() * gain.array()).colwise() + bias.array();
}

// Returns dL/dz; accumulates gain and bias gradients.
Matrix LayerNormBackward(const Matrix& grad_y, const Matrix& normed,
                         const Eigen::RowVectorXd& inv_std,
                         Eigen::Map<const Vector> gain,
                         Eigen::Map<Vector> grad_gain,
                         Eigen::Map<Vector> grad_bias) {
  grad_gain += (grad_y.array() * normed.array()).rowwise().sum().matrix();
  grad_bias += grad_y.rowwise().sum();
  const Matrix g = grad_y.array().colwise() * gain.array();
  const double rows = static_cast<double>(g.rows());
  const Eigen::RowVectorXd mean_g = g.colwise().sum() / rows;
  const Eigen::RowVectorXd mean_gn =
      (g.array() * normed.array()).colwise().sum() / rows;
  Matrix dz = g.rowwise() - mean_g;
  dz.array() -= normed.array().rowwise() * mean_gn.array();
  dz.array().rowwise() *= inv_std.array();
  return dz;
}

}  // namespace

Mlp::Mlp(const MlpLayout& layout) : layout_(layout) {
  if (layout.input_dim < 1 || layout.hidden1 < 1 || layout.hidden2 < 1 ||
      layout.output_dim < 1 || layout.side_dim < 0) {
    throw Error(ErrorCode::kConfigInvalid, "invalid MLP layer sizes");
  }
  Eigen::Index at = 0;
  for (int l = 0; l < 3; ++l) {
    off_.w[l] = at;
    at += static_cast<Eigen::Index>(rows(l)) * cols(l);
    off_.b[l] = at;
    at += rows(l);
  }
  num_perturbable_ = at;
  for (int l = 0; l < 2; ++l) {
    off_.g[l] = at;
    off_.beta[l] = at + rows(l);
    if (layout.layer_norm) at += 2 * rows(l);
  }
  params_ = Vector::Zero(at);
  if (layout.layer_norm) {
    for (int l = 0; l < 2; ++l) ln_gain(l).setOnes();
  }
}

int Mlp::rows(int layer) const {
  switch (layer) {
    case 0: return layout_.hidden1;
    case 1: return layout_.hidden2;
    default: return layout_.output_dim;
  }
}

int Mlp::cols(int layer) const {
  switch (layer) {
    case 0: return layout_.input_dim;
    case 1: return layout_.hidden1 + layout_.side_dim;
    default: return layout_.hidden2;
  }
}

Mlp::MatMap Mlp::weight(int l) {
  return MatMap(params_.data() + off_.w[l], rows(l), cols(l));
}
Mlp::ConstMatMap Mlp::weight(int l) const {
  return ConstMatMap(params_.data() + off_.w[l], rows(l), cols(l));
}
Mlp::VecMap Mlp::bias(int l) { return VecMap(params_.data() + off_.b[l], rows(l)); }
Mlp::ConstVecMap Mlp::bias(int l) const {
  return ConstVecMap(params_.data() + off_.b[l], rows(l));
}
Mlp::VecMap Mlp::ln_gain(int l) { return VecMap(params_.data() + off_.g[l], rows(l)); }
Mlp::VecMap Mlp::ln_bias(int l) {
  return VecMap(params_.data() + off_.beta[l], rows(l));
}
Mlp::ConstVecMap Mlp::ln_gain(int l) const {
  return ConstVecMap(params_.data() + off_.g[l], rows(l));
}
Mlp::ConstVecMap Mlp::ln_bias(int l) const {
  return ConstVecMap(params_.data() + off_.beta[l], rows(l));
}

void Mlp::Initialize(Rng& rng, double final_scale) {
  for (int l = 0; l < 3; ++l) {
    const double bound =
        l < 2 ? 1.0 / std::sqrt(static_cast<double>(cols(l))) : final_scale;
    auto w = weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.Uniform(-bound, bound);
    }
    auto b = bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.Uniform(-bound, bound);
  }
  if (layout_.layer_norm) {
    for (int l = 0; l < 2; ++l) {
      ln_gain(l).setOnes();
      ln_bias(l).setZero();
    }
  }
}

double Mlp::AddL2Penalty(double coeff, Vector* grad) const {
  double penalty = 0.0;
  for (int l = 0; l < 2; ++l) {
    const auto w = weight(l);
    penalty += coeff * w.squaredNorm();
    MatMap(grad->data() + off_.w[l], rows(l), cols(l)) += (2.0 * coeff) * w;
  }
  return penalty;
}

Matrix Mlp::Forward(const Matrix& x, const Matrix& side, Cache* cache) const {
  if (x.rows() != layout_.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.rows()) + " rows, expected " +
                    std::to_string(layout_.input_dim));
  }
  if (layout_.side_dim > 0 &&
      (side.rows() != layout_.side_dim || side.cols() != x.cols())) {
    throw Error(ErrorCode::kDimensionMismatch, "side input has wrong shape");
  }
  Cache local;
  Cache& c = cache ? *cache : local;
  c.x = x;

  Matrix z = (weight(0) * x).colwise() + bias(0);
  if (layout_.layer_norm) {
    LayerNormForward(z, ln_gain(0), ln_bias(0), &c.n1, &c.inv_std1, &c.a1);
  } else {
    c.a1 = std::move(z);
  }
  c.a1 = c.a1.cwiseMax(0.0);

  if (layout_.side_dim > 0) {
    c.side = side;
    const auto w = weight(1);
    z = w.leftCols(layout_.hidden1) * c.a1 + w.rightCols(layout_.side_dim) * side;
    z.colwise() += bias(1);
  } else {
    z = (weight(1) * c.a1).colwise() + bias(1);
  }
  if (layout_.layer_norm) {
    LayerNormForward(z, ln_gain(1), ln_bias(1), &c.n2, &c.inv_std2, &c.a2);
  } else {
    c.a2 = std::move(z);
  }
  c.a2 = c.a2.cwiseMax(0.0);

  c.out = (weight(2) * c.a2).colwise() + bias(2);
  return c.out;
}

Matrix Mlp::Backward(const Cache& c, const Matrix& grad_out,
                     Vector* grad) const {
  auto gmat = [&](int l) {
    return MatMap(grad->data() + off_.w[l], rows(l), cols(l));
  };
  auto gvec = [&](Eigen::Index off, int n) { return VecMap(grad->data() + off, n); };

  gmat(2).noalias() += grad_out * c.a2.transpose();
  gvec(off_.b[2], rows(2)) += grad_out.rowwise().sum();
  Matrix g = weight(2).transpose() * grad_out;
  g.array() *= (c.a2.array() > 0.0).cast<double>();
  if (layout_.layer_norm) {
    g = LayerNormBackward(g, c.n2, c.inv_std2, ln_gain(1),
                          gvec(off_.g[1], rows(1)), gvec(off_.beta[1], rows(1)));
  }

  Matrix grad_side;
  gvec(off_.b[1], rows(1)) += g.rowwise().sum();
  const auto w1 = weight(1);
  if (layout_.side_dim > 0) {
    auto gw = gmat(1);
    gw.leftCols(layout_.hidden1).noalias() += g * c.a1.transpose();
    gw.rightCols(layout_.side_dim).noalias() += g * c.side.transpose();
    grad_side = w1.rightCols(layout_.side_dim).transpose() * g;
    g = w1.leftCols(layout_.hidden1).transpose() * g;
  } else {
    gmat(1).noalias() += g * c.a1.transpose();
    g = w1.transpose() * g;
  }
  g.array() *= (c.a1.array() > 0.0).cast<double>();
  if (layout_.layer_norm) {
    g = LayerNormBackward(g, c.n1, c.inv_std1, ln_gain(0),
                          gvec(off_.g[0], rows(0)), gvec(off_.beta[0], rows(0)));
  }
  gmat(0).noalias() += g * c.x.transpose();
  gvec(off_.b[0], rows(0)) += g.rowwise().sum();
  return grad_side;
}

PolicyNet::PolicyNet(int state_dim, int hidden1, int hidden2,
                     std::vector<double> limits, bool layer_norm)
    : net_(MlpLayout{state_dim, hidden1, hidden2,
                     static_cast<int>(limits.size()), 0, layer_norm}),
      limits_(std::move(limits)) {
  limit_vec_ = Eigen::Map<const Vector>(limits_.data(),
                                        static_cast<Eigen::Index>(limits_.size()));
  if ((limit_vec_.array() <= 0.0).any()) {
    throw Error(ErrorCode::kConfigInvalid, "action limits must be positive");
  }
}

Matrix PolicyNet::Forward(const Matrix& states) const {
  Matrix out = net_.Forward(states, Matrix(), nullptr);
  out = out.array().tanh();
  out.array().colwise() *= limit_vec_.array();
  return out;
}

Vector PolicyNet::Act(const Vector& state) const {
  return Forward(Matrix(state)).col(0);
}

Vector PolicyNet::Backward(const Matrix& states,
                           const Matrix& grad_actions) const {
  Mlp::Cache cache;
  const Matrix out = net_.Forward(states, Matrix(), &cache);
  const Eigen::ArrayXXd t = out.array().tanh();
  Matrix g = grad_actions.array() * (1.0 - t.square());
  g.array().colwise() *= limit_vec_.array();
  Vector grad = Vector::Zero(net_.num_params());
  net_.Backward(cache, g, &grad);
  return grad;
}

PolicyNet PolicyNet::Perturbed(const Vector& eps) const {
  if (eps.size() != num_perturbable()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "noise has " + std::to_string(eps.size()) +
                    " entries, actor has " +
                    std::to_string(num_perturbable()) + " perturbable params");
  }
  PolicyNet out = *this;
  out.net_.flat() += eps;
  return out;
}

bool PolicyNet::SameArchitecture(const PolicyNet& other) const {
  return net_.layout() == other.net_.layout() && limits_ == other.limits_;
}

CriticNet::CriticNet(int state_dim, int action_dim, int hidden1, int hidden2,
                     bool layer_norm)
    : net_(MlpLayout{state_dim, hidden1, hidden2, 1, action_dim, layer_norm}) {}

Eigen::RowVectorXd CriticNet::Forward(const Matrix& states,
                                      const Matrix& actions) const {
  return net_.Forward(states, actions, nullptr).row(0);
}

CriticNet::Gradients CriticNet::Backward(const Matrix& states,
                                         const Matrix& actions,
                                         const Eigen::RowVectorXd& grad_q) const {
  Mlp::Cache cache;
  net_.Forward(states, actions, &cache);
  Gradients g{Vector::Zero(net_.num_params()), Matrix()};
  g.actions = net_.Backward(cache, Matrix(grad_q), &g.params);
  return g;
}

double PolicyDistance(const PolicyNet& policy, const PolicyNet& perturbed,
                      const Matrix& states) {
  if (!policy.SameArchitecture(perturbed)) {
    throw Error(ErrorCode::kArchitectureMismatch, "actors differ in shape");
  }
  if (states.cols() == 0) throw Error(ErrorCode::kEmptyBatch, "no states");
  // ActionDistance wants states as rows
  return ActionDistance(policy.Forward(states).transpose(),
                        perturbed.Forward(states).transpose());
}

Adam::Adam(Eigen::Index size, AdamConfig config)
    : config_(config), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {}

void Adam::Step(Vector& params, const Vector& grad) {
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grad;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const double step = config_.lr * std::sqrt(c2) / c1;
  params.array() -= step * m_.array() / (v_.array().sqrt() + config_.epsilon);
}

void Adam::Restore(Vector m, Vector v, long long t) {
  if (m.size() != m_.size() || v.size() != v_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "adam state size changed");
  }
  m_ = std::move(m);
  v_ = std::move(v);
  t_ = t;
}

void SoftUpdate(Vector& target, const Vector& source, double tau) {
  if (target.size() != source.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "soft update size mismatch");
  }
  target = tau * source + (1.0 - tau) * target;
}

}  // namespace paramnoise
