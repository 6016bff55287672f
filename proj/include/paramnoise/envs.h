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

#ifndef PARAMNOISE_ENVS_H_
#define PARAMNOISE_ENVS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "paramnoise/mvn.h"
#include "paramnoise/rng.h"

namespace paramnoise {

struct EnvSpec {
  std::string name;
  int state_dim = 0;   // observation size
  int action_dim = 0;
  std::vector<double> action_limits;
  int horizon = 500;
  double dt = 0.02;
  // per-episode return regarded as solving the task (dense variants)
  double solved_threshold = 0.0;
};

struct StepResult {
  Vector observation;
  double reward = 0.0;
  bool done = false;  // step counter reached the horizon
};

// Continuous-control task with a sparse and a dense reward over the same
// dynamics. The sparse reward is 1 on steps where the task's success
// predicate holds and 0 otherwise. Episodes end only at the horizon.
class Env {
 public:
  virtual ~Env() = default;

  const EnvSpec& spec() const { return spec_; }
  bool sparse() const { return sparse_; }
  int steps() const { return steps_; }

  // Draws the initial state and zeroes the step counter.
  Vector Reset(Rng& rng);

  // Clamps the action to the limits, advances one control step.
  // Throws Error(kNonFiniteAction).
  StepResult Step(const Vector& action);

  virtual Vector Observe() const = 0;
  // Generalized coordinates then velocities.
  virtual std::vector<double> state() const = 0;
  virtual void set_state(std::span<const double> s) = 0;
  virtual bool Success() const = 0;
  virtual double DenseReward(const Vector& action) const = 0;
  // Total mechanical energy, for integration checks.
  virtual double Energy() const = 0;
  virtual std::unique_ptr<Env> Clone() const = 0;

 protected:
  Env(EnvSpec spec, bool sparse) : spec_(std::move(spec)), sparse_(sparse) {}

  virtual void ResetState(Rng& rng) = 0;
  virtual void Integrate(const Vector& action) = 0;

  EnvSpec spec_;

 private:
  bool sparse_;
  int steps_ = 0;
};

// Wraps to (-pi, pi].
double WrapAngle(double a);

// Cart on a bounded track with a pole hanging from it (angle 0 = upright).
// Observation: x, x_dot, cos(theta), sin(theta), theta_dot. Semi-implicit
// Euler. Dense reward: cos(theta) in [-1, 1]. Sparse success:
// cos(theta) > success_cos and |x| < success_x.
struct CartpoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_half_length = 0.5;
  double force_max = 10.0;
  double track_limit = 3.0;
  double success_cos = 0.8;
  double success_x = 2.4;
  double max_cart_speed = 10.0;
  double max_pole_speed = 25.0;
  double init_noise = 0.05;
  double dt = 0.02;
  int substeps = 1;
  int horizon = 500;
};

// Two-link pendulum on a fixed pivot, torques at both joints, absolute angles
// from the downward vertical. Observation: cos/sin of both angles and both
// angular velocities. RK4. Dense reward: tip height / (l1 + l2) in [-1, 1].
// Sparse success: tip height > success_height * (l1 + l2).
struct DoublePendulumParams {
  double gravity = 9.8;
  double mass1 = 1.0;
  double mass2 = 1.0;
  double length1 = 0.5;
  double length2 = 0.5;
  double torque_max = 6.0;
  double damping = 0.05;
  double success_height = 0.9;
  double max_speed = 20.0;
  double init_noise = 0.05;
  double dt = 0.02;
  int horizon = 500;
};

// Simplified two-legged runner on a line. Legs swing about the hip under
// torque; a leg inside the stance range grips the ground whenever its foot
// would slide backwards, pushing the body forward. Observation: body
// velocity, leg angles, leg angular velocities (body x is hidden). Dense
// reward: forward velocity minus a small control cost. Sparse success:
// x > goal_distance.
struct PlanarRunnerParams {
  double body_mass = 1.0;
  double leg_length = 0.5;
  double joint_gain = 40.0;
  double joint_damping = 2.0;
  double joint_limit = 0.8;
  double stance_angle = 0.5;
  double grip = 20.0;
  double drag = 1.0;
  double max_speed = 5.0;
  double max_joint_speed = 15.0;
  double control_cost = 0.05;
  double goal_distance = 5.0;
  double init_noise = 0.05;
  double dt = 0.02;
  int horizon = 500;
};

// Single pendulum swing-up from hanging, angle 0 = upright. Observation:
// cos, sin, angular velocity. Semi-implicit Euler. Dense reward:
// -(theta^2 + 0.1 theta_dot^2 + 0.001 u^2). Sparse success: cos > success_cos.
struct PendulumParams {
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double torque_max = 2.0;
  double max_speed = 8.0;
  double success_cos = 0.9;
  double init_noise = 0.05;
  double dt = 0.05;
  int substeps = 1;
  int horizon = 200;
  double solved_threshold = -400.0;
};

// Known names: cartpole-swingup, double-pendulum-swingup, planar-runner,
// pendulum-swingup, each optionally prefixed with "sparse-". Overrides
// replace fields of the task's parameter struct by name; unknown keys or
// names throw Error(kConfigParse) / Error(kEnvNotFound).
std::unique_ptr<Env> MakeEnv(std::string_view name,
                             const nlohmann::json& overrides = nlohmann::json::object());
std::vector<std::string> EnvNames();
bool EnvExists(std::string_view name);
// Parameter struct of the named task as JSON, with overrides applied.
nlohmann::json EnvParameters(std::string_view name,
                             const nlohmann::json& overrides = nlohmann::json::object());

}  // namespace paramnoise

#endif  // PARAMNOISE_ENVS_H_
