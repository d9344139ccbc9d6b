#ifndef MOODCRL_ENV_PENDULUM_HPP_
#define MOODCRL_ENV_PENDULUM_HPP_

#include "moodcrl/env/environment.hpp"

namespace moodcrl::env {

// Cart with a hinged pole, continuous horizontal force on the cart.
struct PendulumParams {
  double cart_mass = 1.0;    // kg
  double pole_mass = 0.1;    // kg
  double half_length = 0.5;  // m
  double gravity = 9.81;     // m/s^2
  double dt = 0.02;          // s
  double force_limit = 3.0;  // N
  double angle_limit = 0.2;  // rad
  int max_steps = 1000;
  double init_noise = 0.01;  // reset draws every component from U(-noise, noise)
};

struct PendulumState {
  double p = 0.0;      // cart position (m)
  double theta = 0.0;  // pole angle from upright (rad)
  double v = 0.0;      // cart velocity (m/s)
  double omega = 0.0;  // pole angular velocity (rad/s)

  Vector to_vector() const;
  static PendulumState from_vector(const Vector& x);
  bool is_finite() const;
};

struct PendulumStep {
  PendulumState next;
  double reward = 0.0;
  bool done = false;
};

// Semi-implicit Euler step of the cart-pole ODE. The force is clipped to
// +-force_limit. reward = 1 while the pole stays within angle_limit, and the
// step that crosses it gets reward 0 and done = true.
PendulumStep pendulum_step(const PendulumState& state, double force,
                           const PendulumParams& params = {});

// Kinetic + potential energy (pole modelled as a uniform rod).
double pendulum_energy(const PendulumState& state, const PendulumParams& params = {});

class CartPendulum final : public Environment {
 public:
  explicit CartPendulum(PendulumParams params = {});

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;
  Vector bound_action(const Vector& raw) const override;
  bool is_terminal(const Vector& next_state) const override;
  std::unique_ptr<Environment> clone() const override;

  const PendulumParams& params() const { return params_; }
  const PendulumState& state() const { return state_; }
  void set_state(const PendulumState& s) { state_ = s; }

 private:
  PendulumParams params_;
  EnvSpec spec_;
  PendulumState state_;
  int steps_ = 0;
};

}  // namespace moodcrl::env

#endif  // MOODCRL_ENV_PENDULUM_HPP_
