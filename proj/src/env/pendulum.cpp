#include "moodcrl/env/pendulum.hpp"

#include <algorithm>
#include <cmath>

#include "moodcrl/errors.hpp"

namespace moodcrl::env {

Vector PendulumState::to_vector() const {
  Vector x(4);
  x << p, theta, v, omega;
  return x;
}

PendulumState PendulumState::from_vector(const Vector& x) {
  require(x.size() == 4, "pendulum state must have 4 entries");
  return {x[0], x[1], x[2], x[3]};
}

bool PendulumState::is_finite() const {
  return std::isfinite(p) && std::isfinite(theta) && std::isfinite(v) && std::isfinite(omega);
}

PendulumStep pendulum_step(const PendulumState& state, double force,
                           const PendulumParams& params) {
  if (!state.is_finite() || !std::isfinite(force)) {
    throw NumericError("pendulum_step: non-finite state or force");
  }
  const double f = std::clamp(force, -params.force_limit, params.force_limit);
  const double total_mass = params.cart_mass + params.pole_mass;
  const double pml = params.pole_mass * params.half_length;
  const double sin_t = std::sin(state.theta);
  const double cos_t = std::cos(state.theta);

  const double temp = (f + pml * state.omega * state.omega * sin_t) / total_mass;
  const double theta_acc =
      (params.gravity * sin_t - cos_t * temp) /
      (params.half_length * (4.0 / 3.0 - params.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - pml * theta_acc * cos_t / total_mass;

  PendulumStep out;
  out.next.v = state.v + params.dt * x_acc;
  out.next.p = state.p + params.dt * out.next.v;
  out.next.omega = state.omega + params.dt * theta_acc;
  out.next.theta = state.theta + params.dt * out.next.omega;
  out.done = std::abs(out.next.theta) > params.angle_limit;
  out.reward = out.done ? 0.0 : 1.0;
  return out;
}

double pendulum_energy(const PendulumState& s, const PendulumParams& params) {
  const double m = params.pole_mass;
  const double l = params.half_length;
  const double kinetic = 0.5 * (params.cart_mass + m) * s.v * s.v +
                         m * l * s.v * s.omega * std::cos(s.theta) +
                         0.5 * (4.0 / 3.0) * m * l * l * s.omega * s.omega;
  const double potential = m * params.gravity * l * std::cos(s.theta);
  return kinetic + potential;
}

CartPendulum::CartPendulum(PendulumParams params) : params_(params) {
  require(params_.dt > 0.0 && params_.max_steps > 0, "invalid pendulum parameters");
  spec_.id = "pendulum";
  spec_.state_dim = 4;
  spec_.action_dim = 1;
  spec_.discrete_action = false;
  spec_.max_steps = params_.max_steps;
  // The reward is binary; everything else is continuous.
  spec_.discrete_tuple_dims = {false, false, false, false, false,
                               false, false, false, false, true};
}

Vector CartPendulum::reset(Rng& rng) {
  std::uniform_real_distribution<double> u(-params_.init_noise, params_.init_noise);
  state_.p = u(rng);
  state_.theta = u(rng);
  state_.v = u(rng);
  state_.omega = u(rng);
  steps_ = 0;
  return state_.to_vector();
}

StepResult CartPendulum::step(const Vector& action) {
  require(action.size() == 1, "pendulum action must be a single force");
  const PendulumStep s = pendulum_step(state_, action[0], params_);
  state_ = s.next;
  ++steps_;
  return {state_.to_vector(), s.reward, s.done || steps_ >= params_.max_steps};
}

Vector CartPendulum::bound_action(const Vector& raw) const {
  require(raw.size() == 1, "pendulum action must be a single force");
  return raw.cwiseMax(-params_.force_limit).cwiseMin(params_.force_limit);
}

bool CartPendulum::is_terminal(const Vector& next_state) const {
  return !(std::abs(next_state[1]) <= params_.angle_limit);
}

std::unique_ptr<Environment> CartPendulum::clone() const {
  return std::make_unique<CartPendulum>(*this);
}

}  // namespace moodcrl::env
