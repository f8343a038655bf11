#include "adhdp/plants.hpp"

#include <cmath>

namespace adhdp {

double linear_step(double x, double u) { return 1.25 * x + u; }

double quadratic_reward(double x, double u) { return 0.04 * x * x + 0.01 * u * u; }

CartPoleAccels cartpole_accels(const CartPoleState& s, double force, const CartPoleParams& p) {
  const double sin_t = std::sin(s.theta);
  const double cos_t = std::cos(s.theta);
  const double total_mass = p.m_c + p.m_p;
  const double pole_ml = p.m_p * p.l;

  const double theta_ddot =
      (p.g * sin_t + cos_t * ((-force - pole_ml * s.theta_dot * s.theta_dot * sin_t) / total_mass)) /
      (p.l * (4.0 / 3.0 - p.m_p * cos_t * cos_t / total_mass));
  const double x_ddot =
      (force + pole_ml * (s.theta_dot * s.theta_dot * sin_t - theta_ddot * cos_t)) / total_mass;
  return {theta_ddot, x_ddot};
}

CartPoleState cartpole_step(const CartPoleState& s, double force, const CartPoleParams& p) {
  const CartPoleAccels acc = cartpole_accels(s, force, p);
  return {s.x + p.dt * s.x_dot, s.x_dot + p.dt * acc.x_ddot, s.theta + p.dt * s.theta_dot,
          s.theta_dot + p.dt * acc.theta_ddot};
}

CartPoleFailure cartpole_failure(const CartPoleState& s, const CartPoleParams& p) {
  if (std::abs(s.theta) > p.theta_limit) return CartPoleFailure::Angle;
  if (std::abs(s.x) > p.x_limit) return CartPoleFailure::Position;
  return CartPoleFailure::None;
}

Eigen::Vector4d normalize_state(const CartPoleState& s, const CartPoleParams& p) {
  return {s.theta / p.theta_limit, s.theta_dot / p.theta_dot_scale, s.x / p.x_limit, s.x_dot / p.x_dot_scale};
}

}  // namespace adhdp
