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

#include "paramnoise/envs.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "paramnoise/error.h"

namespace paramnoise {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    CartpoleParams, gravity, cart_mass, pole_mass, pole_half_length, force_max,
    track_limit, success_cos, success_x, max_cart_speed, max_pole_speed,
    init_noise, dt, substeps, horizon)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    DoublePendulumParams, gravity, mass1, mass2, length1, length2, torque_max,
    damping, success_height, max_speed, init_noise, dt, horizon)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    PlanarRunnerParams, body_mass, leg_length, joint_gain, joint_damping,
    joint_limit, stance_angle, grip, drag, max_speed, max_joint_speed,
    control_cost, goal_distance, init_noise, dt, horizon)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    PendulumParams, gravity, mass, length, torque_max, max_speed, success_cos,
    init_noise, dt, substeps, horizon, solved_threshold)

double WrapAngle(double a) {
  constexpr double kPi = std::numbers::pi;
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  a -= kPi;
  return a == -kPi ? kPi : a;
}

Vector Env::Reset(Rng& rng) {
  steps_ = 0;
  ResetState(rng);
  return Observe();
}

StepResult Env::Step(const Vector& action) {
  if (action.size() != spec_.action_dim) {
    throw Error(ErrorCode::kDimensionMismatch, "action has wrong size");
  }
  if (!action.allFinite()) {
    throw Error(ErrorCode::kNonFiniteAction, "action is not finite");
  }
  Vector a = action;
  for (int i = 0; i < spec_.action_dim; ++i) {
    const double lim = spec_.action_limits[static_cast<std::size_t>(i)];
    a[i] = std::clamp(a[i], -lim, lim);
  }
  Integrate(a);
  ++steps_;
  StepResult out;
  out.observation = Observe();
  out.reward = sparse_ ? (Success() ? 1.0 : 0.0) : DenseReward(a);
  out.done = steps_ >= spec_.horizon;
  return out;
}

namespace {

void CheckState(std::span<const double> s, std::size_t n) {
  if (s.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state needs " + std::to_string(n) + " values");
  }
}

class Cartpole final : public Env {
 public:
  Cartpole(const CartpoleParams& p, bool sparse, std::string name)
      : Env(EnvSpec{std::move(name), 5, 1, {1.0}, p.horizon, p.dt, 0.0}, sparse),
        p_(p) {}

  Vector Observe() const override {
    Vector o(5);
    o << x_, x_dot_, std::cos(theta_), std::sin(theta_), theta_dot_;
    return o;
  }
  std::vector<double> state() const override {
    return {x_, theta_, x_dot_, theta_dot_};
  }
  void set_state(std::span<const double> s) override {
    CheckState(s, 4);
    x_ = s[0];
    theta_ = WrapAngle(s[1]);
    x_dot_ = s[2];
    theta_dot_ = s[3];
  }
  bool Success() const override {
    return std::cos(theta_) > p_.success_cos && std::abs(x_) < p_.success_x;
  }
  double DenseReward(const Vector&) const override { return std::cos(theta_); }
  double Energy() const override {
    const double l = p_.pole_half_length, mp = p_.pole_mass;
    const double kinetic =
        0.5 * (p_.cart_mass + mp) * x_dot_ * x_dot_ +
        mp * l * std::cos(theta_) * x_dot_ * theta_dot_ +
        (2.0 / 3.0) * mp * l * l * theta_dot_ * theta_dot_;
    return kinetic + mp * p_.gravity * l * std::cos(theta_);
  }
  std::unique_ptr<Env> Clone() const override {
    return std::make_unique<Cartpole>(*this);
  }

 protected:
  void ResetState(Rng& rng) override {
    const double n = p_.init_noise;
    x_ = rng.Uniform(-n, n);
    theta_ = WrapAngle(std::numbers::pi + rng.Uniform(-n, n));
    x_dot_ = rng.Uniform(-n, n);
    theta_dot_ = rng.Uniform(-n, n);
  }

  void Integrate(const Vector& action) override {
    const double force = p_.force_max * action[0];
    const double total = p_.cart_mass + p_.pole_mass;
    const double ml = p_.pole_mass * p_.pole_half_length;
    const double h = p_.dt / p_.substeps;
    for (int i = 0; i < p_.substeps; ++i) {
      const double s = std::sin(theta_), c = std::cos(theta_);
      const double temp = (force + ml * theta_dot_ * theta_dot_ * s) / total;
      const double theta_acc =
          (p_.gravity * s - c * temp) /
          (p_.pole_half_length * (4.0 / 3.0 - p_.pole_mass * c * c / total));
      const double x_acc = temp - ml * theta_acc * c / total;
      x_dot_ = std::clamp(x_dot_ + h * x_acc, -p_.max_cart_speed, p_.max_cart_speed);
      theta_dot_ = std::clamp(theta_dot_ + h * theta_acc, -p_.max_pole_speed,
                              p_.max_pole_speed);
      x_ += h * x_dot_;
      theta_ = WrapAngle(theta_ + h * theta_dot_);
      if (std::abs(x_) > p_.track_limit) {
        x_ = std::copysign(p_.track_limit, x_);
        x_dot_ = 0.0;
      }
    }
  }

 private:
  CartpoleParams p_;
  double x_ = 0, theta_ = std::numbers::pi, x_dot_ = 0, theta_dot_ = 0;
};

class DoublePendulum final : public Env {
 public:
  DoublePendulum(const DoublePendulumParams& p, bool sparse, std::string name)
      : Env(EnvSpec{std::move(name), 6, 2, {1.0, 1.0}, p.horizon, p.dt, 0.0},
            sparse),
        p_(p) {}

  Vector Observe() const override {
    Vector o(6);
    o << std::cos(q_[0]), std::sin(q_[0]), std::cos(q_[1]), std::sin(q_[1]),
        q_[2], q_[3];
    return o;
  }
  std::vector<double> state() const override { return {q_[0], q_[1], q_[2], q_[3]}; }
  void set_state(std::span<const double> s) override {
    CheckState(s, 4);
    q_ = {WrapAngle(s[0]), WrapAngle(s[1]), s[2], s[3]};
  }
  double TipHeight() const {
    return -p_.length1 * std::cos(q_[0]) - p_.length2 * std::cos(q_[1]);
  }
  bool Success() const override {
    return TipHeight() > p_.success_height * (p_.length1 + p_.length2);
  }
  double DenseReward(const Vector&) const override {
    return TipHeight() / (p_.length1 + p_.length2);
  }
  double Energy() const override {
    const double m1 = p_.mass1, m2 = p_.mass2, l1 = p_.length1, l2 = p_.length2;
    const double t1 = q_[0], t2 = q_[1], w1 = q_[2], w2 = q_[3];
    const double kinetic = 0.5 * (m1 + m2) * l1 * l1 * w1 * w1 +
                           0.5 * m2 * l2 * l2 * w2 * w2 +
                           m2 * l1 * l2 * w1 * w2 * std::cos(t1 - t2);
    const double potential =
        -(m1 + m2) * p_.gravity * l1 * std::cos(t1) - m2 * p_.gravity * l2 * std::cos(t2);
    return kinetic + potential;
  }
  std::unique_ptr<Env> Clone() const override {
    return std::make_unique<DoublePendulum>(*this);
  }

 protected:
  void ResetState(Rng& rng) override {
    const double n = p_.init_noise;
    for (double& v : q_) v = rng.Uniform(-n, n);
  }

  using State = std::array<double, 4>;

  State Derivative(const State& s, double tau1, double tau2) const {
    const double m1 = p_.mass1, m2 = p_.mass2, l1 = p_.length1, l2 = p_.length2;
    const double g = p_.gravity;
    const double d = s[0] - s[1];
    const double cd = std::cos(d), sd = std::sin(d);
    // generalized forces on absolute angles: shoulder torque minus elbow
    // reaction on link 1, elbow torque on link 2
    const double q1 = tau1 - tau2 - p_.damping * s[2];
    const double q2 = tau2 - p_.damping * s[3];
    const double a11 = (m1 + m2) * l1 * l1, a12 = m2 * l1 * l2 * cd;
    const double a22 = m2 * l2 * l2;
    const double r1 = q1 - m2 * l1 * l2 * sd * s[3] * s[3] - (m1 + m2) * g * l1 * std::sin(s[0]);
    const double r2 = q2 + m2 * l1 * l2 * sd * s[2] * s[2] - m2 * g * l2 * std::sin(s[1]);
    const double det = a11 * a22 - a12 * a12;
    return {s[2], s[3], (r1 * a22 - a12 * r2) / det, (a11 * r2 - a12 * r1) / det};
  }

  void Integrate(const Vector& action) override {
    const double tau1 = p_.torque_max * action[0];
    const double tau2 = p_.torque_max * action[1];
    const double h = p_.dt;
    auto axpy = [](const State& s, const State& k, double f) {
      return State{s[0] + f * k[0], s[1] + f * k[1], s[2] + f * k[2], s[3] + f * k[3]};
    };
    const State k1 = Derivative(q_, tau1, tau2);
    const State k2 = Derivative(axpy(q_, k1, h / 2), tau1, tau2);
    const State k3 = Derivative(axpy(q_, k2, h / 2), tau1, tau2);
    const State k4 = Derivative(axpy(q_, k3, h), tau1, tau2);
    for (int i = 0; i < 4; ++i) {
      q_[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    q_[0] = WrapAngle(q_[0]);
    q_[1] = WrapAngle(q_[1]);
    q_[2] = std::clamp(q_[2], -p_.max_speed, p_.max_speed);
    q_[3] = std::clamp(q_[3], -p_.max_speed, p_.max_speed);
  }

 private:
  DoublePendulumParams p_;
  State q_{0, 0, 0, 0};  // theta1, theta2, omega1, omega2
};

class PlanarRunner final : public Env {
 public:
  PlanarRunner(const PlanarRunnerParams& p, bool sparse, std::string name)
      : Env(EnvSpec{std::move(name), 5, 2, {1.0, 1.0}, p.horizon, p.dt, 0.0},
            sparse),
        p_(p) {}

  Vector Observe() const override {
    Vector o(5);
    o << v_, q_[0], q_[1], w_[0], w_[1];
    return o;
  }
  std::vector<double> state() const override {
    return {x_, q_[0], q_[1], v_, w_[0], w_[1]};
  }
  void set_state(std::span<const double> s) override {
    CheckState(s, 6);
    x_ = s[0];
    q_ = {s[1], s[2]};
    v_ = s[3];
    w_ = {s[4], s[5]};
  }
  bool Success() const override { return x_ > p_.goal_distance; }
  double DenseReward(const Vector& action) const override {
    return v_ - p_.control_cost * action.squaredNorm();
  }
  double Energy() const override {
    return 0.5 * p_.body_mass * v_ * v_ + 0.5 * (w_[0] * w_[0] + w_[1] * w_[1]);
  }
  std::unique_ptr<Env> Clone() const override {
    return std::make_unique<PlanarRunner>(*this);
  }

 protected:
  void ResetState(Rng& rng) override {
    const double n = p_.init_noise;
    x_ = 0.0;
    v_ = 0.0;
    q_ = {rng.Uniform(-n, n), rng.Uniform(-n, n)};
    w_ = {rng.Uniform(-n, n), rng.Uniform(-n, n)};
  }

  void Integrate(const Vector& action) override {
    const double h = p_.dt;
    double thrust = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double acc = p_.joint_gain * action[i] - p_.joint_damping * w_[i];
      w_[i] = std::clamp(w_[i] + h * acc, -p_.max_joint_speed, p_.max_joint_speed);
      q_[i] += h * w_[i];
      if (std::abs(q_[i]) > p_.joint_limit) {
        q_[i] = std::copysign(p_.joint_limit, q_[i]);
        w_[i] = 0.0;
      }
      // a stance foot sliding backwards grips and pushes the body forward
      const double foot_speed = v_ + p_.leg_length * std::cos(q_[i]) * w_[i];
      if (std::abs(q_[i]) < p_.stance_angle && foot_speed < 0.0) {
        thrust -= p_.grip * foot_speed;
      }
    }
    v_ += h * (thrust - p_.drag * v_) / p_.body_mass;
    v_ = std::clamp(v_, -p_.max_speed, p_.max_speed);
    x_ += h * v_;
  }

 private:
  PlanarRunnerParams p_;
  double x_ = 0, v_ = 0;
  std::array<double, 2> q_{0, 0}, w_{0, 0};
};

class Pendulum final : public Env {
 public:
  Pendulum(const PendulumParams& p, bool sparse, std::string name)
      : Env(EnvSpec{std::move(name), 3, 1, {1.0}, p.horizon, p.dt,
                    p.solved_threshold},
            sparse),
        p_(p) {}

  Vector Observe() const override {
    Vector o(3);
    o << std::cos(theta_), std::sin(theta_), theta_dot_;
    return o;
  }
  std::vector<double> state() const override { return {theta_, theta_dot_}; }
  void set_state(std::span<const double> s) override {
    CheckState(s, 2);
    theta_ = WrapAngle(s[0]);
    theta_dot_ = s[1];
  }
  bool Success() const override { return std::cos(theta_) > p_.success_cos; }
  double DenseReward(const Vector& action) const override {
    const double u = p_.torque_max * action[0];
    return -(theta_ * theta_ + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u);
  }
  double Energy() const override {
    const double m = p_.mass, l = p_.length;
    return 0.5 * (m * l * l / 3.0) * theta_dot_ * theta_dot_ +
           m * p_.gravity * 0.5 * l * std::cos(theta_);
  }
  std::unique_ptr<Env> Clone() const override {
    return std::make_unique<Pendulum>(*this);
  }

 protected:
  void ResetState(Rng& rng) override {
    const double n = p_.init_noise;
    theta_ = WrapAngle(std::numbers::pi + rng.Uniform(-n, n));
    theta_dot_ = rng.Uniform(-n, n);
  }
  void Integrate(const Vector& action) override {
    const double u = p_.torque_max * action[0];
    const double m = p_.mass, l = p_.length;
    const double h = p_.dt / p_.substeps;
    for (int i = 0; i < p_.substeps; ++i) {
      const double acc = 3.0 * p_.gravity / (2.0 * l) * std::sin(theta_) +
                         3.0 / (m * l * l) * u;
      theta_dot_ = std::clamp(theta_dot_ + h * acc, -p_.max_speed, p_.max_speed);
      theta_ = WrapAngle(theta_ + h * theta_dot_);
    }
  }

 private:
  PendulumParams p_;
  double theta_ = std::numbers::pi, theta_dot_ = 0;
};

struct ParsedName {
  std::string base;
  bool sparse = false;
};

ParsedName ParseName(std::string_view name) {
  constexpr std::string_view kPrefix = "sparse-";
  ParsedName out;
  if (name.substr(0, kPrefix.size()) == kPrefix) {
    out.sparse = true;
    name.remove_prefix(kPrefix.size());
  }
  out.base = std::string(name);
  return out;
}

constexpr std::string_view kBaseNames[] = {
    "cartpole-swingup", "double-pendulum-swingup", "planar-runner",
    "pendulum-swingup"};

template <typename Params>
Params ApplyOverrides(const nlohmann::json& overrides) {
  nlohmann::json j = Params{};
  if (!overrides.is_null()) {
    if (!overrides.is_object()) {
      throw Error(ErrorCode::kConfigParse, "env overrides must be an object");
    }
    for (const auto& [key, value] : overrides.items()) {
      if (!j.contains(key)) {
        throw Error(ErrorCode::kConfigParse, "unknown env parameter '" + key + "'");
      }
      j[key] = value;
    }
  }
  try {
    return j.get<Params>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigParse, e.what());
  }
}

void CheckCommon(double dt, int horizon) {
  if (!(dt > 0) || horizon < 1) {
    throw Error(ErrorCode::kConfigInvalid, "dt must be > 0 and horizon >= 1");
  }
}

}  // namespace

std::vector<std::string> EnvNames() {
  std::vector<std::string> names;
  for (auto base : kBaseNames) {
    names.emplace_back(base);
    names.push_back("sparse-" + std::string(base));
  }
  return names;
}

bool EnvExists(std::string_view name) {
  const ParsedName p = ParseName(name);
  return std::find(std::begin(kBaseNames), std::end(kBaseNames), p.base) !=
         std::end(kBaseNames);
}

nlohmann::json EnvParameters(std::string_view name,
                             const nlohmann::json& overrides) {
  const ParsedName p = ParseName(name);
  if (p.base == "cartpole-swingup") return ApplyOverrides<CartpoleParams>(overrides);
  if (p.base == "double-pendulum-swingup") {
    return ApplyOverrides<DoublePendulumParams>(overrides);
  }
  if (p.base == "planar-runner") return ApplyOverrides<PlanarRunnerParams>(overrides);
  if (p.base == "pendulum-swingup") return ApplyOverrides<PendulumParams>(overrides);
  throw Error(ErrorCode::kEnvNotFound, "no environment named '" + std::string(name) + "'");
}

std::unique_ptr<Env> MakeEnv(std::string_view name,
                             const nlohmann::json& overrides) {
  const ParsedName p = ParseName(name);
  const std::string full(name);
  if (p.base == "cartpole-swingup") {
    const auto params = ApplyOverrides<CartpoleParams>(overrides);
    CheckCommon(params.dt, params.horizon);
    if (params.substeps < 1) throw Error(ErrorCode::kConfigInvalid, "substeps < 1");
    return std::make_unique<Cartpole>(params, p.sparse, full);
  }
  if (p.base == "double-pendulum-swingup") {
    const auto params = ApplyOverrides<DoublePendulumParams>(overrides);
    CheckCommon(params.dt, params.horizon);
    return std::make_unique<DoublePendulum>(params, p.sparse, full);
  }
  if (p.base == "planar-runner") {
    const auto params = ApplyOverrides<PlanarRunnerParams>(overrides);
    CheckCommon(params.dt, params.horizon);
    return std::make_unique<PlanarRunner>(params, p.sparse, full);
  }
  if (p.base == "pendulum-swingup") {
    const auto params = ApplyOverrides<PendulumParams>(overrides);
    CheckCommon(params.dt, params.horizon);
    if (params.substeps < 1) throw Error(ErrorCode::kConfigInvalid, "substeps < 1");
    return std::make_unique<Pendulum>(params, p.sparse, full);
  }
  throw Error(ErrorCode::kEnvNotFound, "no environment named '" + full + "'");
}

}  // namespace paramnoise
