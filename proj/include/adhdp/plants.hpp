#pragma once

#include <numbers>

#include <Eigen/Dense>

namespace adhdp {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;

// ---------------------------------------------------------------------------
// Scalar linear plant x_{k+1} = 1.25 x_k + u_k with quadratic cost.

double linear_step(double x, double u);
double quadratic_reward(double x, double u);

// ---------------------------------------------------------------------------
// Frictionless cart-pole.

struct CartPoleState {
  double x = 0;          // m
  double x_dot = 0;      // m/s
  double theta = 0;      // rad, from vertical
  double theta_dot = 0;  // rad/s

  bool operator==(const CartPoleState&) const = default;
};

struct CartPoleParams {
  double g = 9.8;
  double m_c = 1.0;
  double m_p = 0.1;
  double l = 0.5;  // half-pole length
  double force_mag = 10.0;
  double dt = 0.02;
  double theta_limit = 12.0 * kDegToRad;
  double x_limit = 2.4;
  // Input conditioning scales for the networks.
  double theta_dot_scale = 2.0;
  double x_dot_scale = 2.4;
};

struct CartPoleAccels {
  double theta_ddot;
  double x_ddot;
};

CartPoleAccels cartpole_accels(const CartPoleState& s, double force, const CartPoleParams& p);

/// Explicit Euler with accelerations taken at the pre-step state.
CartPoleState cartpole_step(const CartPoleState& s, double force, const CartPoleParams& p);

enum class CartPoleFailure { None, Angle, Position };

CartPoleFailure cartpole_failure(const CartPoleState& s, const CartPoleParams& p);
inline bool cartpole_failed(const CartPoleState& s, const CartPoleParams& p) {
  return cartpole_failure(s, p) != CartPoleFailure::None;
}

inline double binary_reward(bool failed) { return failed ? -1.0 : 0.0; }

/// Bang-bang: +force_mag when u >= 0, otherwise -force_mag.
inline double force_from_action(double u, double force_mag) { return u >= 0.0 ? force_mag : -force_mag; }

/// (theta / theta_limit, theta_dot / theta_dot_scale, x / x_limit, x_dot / x_dot_scale).
Eigen::Vector4d normalize_state(const CartPoleState& s, const CartPoleParams& p);

}  // namespace adhdp
