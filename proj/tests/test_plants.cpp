#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adhdp/plants.hpp"
#include "adhdp/random.hpp"

using namespace adhdp;

namespace {

// Independent long-double evaluation of the frictionless cart-pole equations.
CartPoleAccels reference_accels(long double theta, long double theta_dot, long double force) {
  const long double g = 9.8L, mc = 1.0L, mp = 0.1L, l = 0.5L, M = mc + mp;
  const long double s = std::sin(theta), c = std::cos(theta);
  const long double tmp = (force + mp * l * theta_dot * theta_dot * s) / M;
  const long double tdd = (g * s - c * tmp) / (l * (4.0L / 3.0L - mp * c * c / M));
  const long double xdd = tmp - mp * l * tdd * c / M;
  return {double(tdd), double(xdd)};
}

}  // namespace

TEST_CASE("linear plant and reward") {
  CHECK(linear_step(1, 0) == 1.25);
  CHECK(linear_step(0, 0) == 0);
  CHECK(linear_step(1, -1.25) == 0);
  CHECK(quadratic_reward(0, 0) == 0);
  CHECK(quadratic_reward(1, 0) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(quadratic_reward(1, 1) == doctest::Approx(0.05).epsilon(1e-15));
}

TEST_CASE("uncontrolled linear plant grows by 1.25 per step") {
  double x = 0.3;
  for (int k = 1; k <= 20; ++k) {
    x = linear_step(x, 0);
    CHECK(x == doctest::Approx(0.3 * std::pow(1.25, k)).epsilon(1e-13));
  }
}

TEST_CASE("cart-pole accelerations at rest") {
  const CartPoleParams p;
  const auto zero = cartpole_accels({}, 0.0, p);
  CHECK(zero.theta_ddot == 0.0);
  CHECK(zero.x_ddot == 0.0);
  const auto push = cartpole_accels({}, 10.0, p);
  CHECK(std::abs(push.theta_ddot - (-14.63415)) < 1e-5);
  CHECK(std::abs(push.x_ddot - 9.75610) < 1e-5);
  const auto ref = reference_accels(0, 0, 10);
  CHECK(push.theta_ddot == doctest::Approx(ref.theta_ddot).epsilon(1e-14));
  CHECK(push.x_ddot == doctest::Approx(ref.x_ddot).epsilon(1e-14));
}

TEST_CASE("cart-pole accelerations match the reference on random states") {
  const CartPoleParams p;
  Xorshift64Star rng(77);
  for (int i = 0; i < 500; ++i) {
    CartPoleState s{rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-0.3, 0.3), rng.uniform(-3, 3)};
    const double F = rng.uniform(-10, 10);
    const auto a = cartpole_accels(s, F, p);
    const auto r = reference_accels(s.theta, s.theta_dot, F);
    CHECK(std::abs(a.theta_ddot - r.theta_ddot) < 1e-12);
    CHECK(std::abs(a.x_ddot - r.x_ddot) < 1e-12);
  }
}

TEST_CASE("cart-pole dynamics are odd under mirroring") {
  const CartPoleParams p;
  Xorshift64Star rng(2024);
  for (int i = 0; i < 1000; ++i) {
    CartPoleState s{rng.uniform(-2.4, 2.4), rng.uniform(-3, 3), rng.uniform(-0.21, 0.21), rng.uniform(-3, 3)};
    const double F = rng.uniform(-10, 10);
    CartPoleState m{s.x, s.x_dot, -s.theta, -s.theta_dot};
    const auto a = cartpole_accels(s, F, p), b = cartpole_accels(m, -F, p);
    CHECK(std::abs(a.theta_ddot + b.theta_ddot) < 1e-12);
    CHECK(std::abs(a.x_ddot + b.x_ddot) < 1e-12);
  }
}

TEST_CASE("small-angle linearisation") {
  const CartPoleParams p;
  const double theta = 1e-5;
  const double expected = p.g * theta / (p.l * (4.0 / 3.0 - p.m_p / (p.m_c + p.m_p)));
  const auto a = cartpole_accels({0, 0, theta, 0}, 0.0, p);
  CHECK(a.theta_ddot == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("cart-pole Euler step") {
  const CartPoleParams p;
  CHECK(cartpole_step({}, 0.0, p) == CartPoleState{});
  const auto n = cartpole_step({}, 10.0, p);
  CHECK(n.x == 0.0);
  CHECK(n.theta == 0.0);
  CHECK(std::abs(n.x_dot - 0.195122) < 1e-6);
  CHECK(std::abs(n.theta_dot - (-0.292683)) < 1e-6);
  // Positions advance with the pre-step velocities.
  const CartPoleState s{0.1, 1.0, 0.05, -0.5};
  const auto acc = cartpole_accels(s, -10.0, p);
  const auto t = cartpole_step(s, -10.0, p);
  CHECK(t.x == 0.1 + 0.02 * 1.0);
  CHECK(t.theta == 0.05 + 0.02 * -0.5);
  CHECK(t.x_dot == 1.0 + 0.02 * acc.x_ddot);
  CHECK(t.theta_dot == -0.5 + 0.02 * acc.theta_ddot);
}

TEST_CASE("failure boundaries") {
  const CartPoleParams p;
  CHECK_FALSE(cartpole_failed({0, 0, 0.2094395, 0}, p));
  CHECK_FALSE(cartpole_failed({0, 0, p.theta_limit, 0}, p));
  CHECK(cartpole_failure({0, 0, 0.2095, 0}, p) == CartPoleFailure::Angle);
  CHECK(cartpole_failure({0, 0, -0.2095, 0}, p) == CartPoleFailure::Angle);
  CHECK(cartpole_failure({2.5, 0, 0, 0}, p) == CartPoleFailure::Position);
  CHECK(cartpole_failure({-2.5, 0, 0, 0}, p) == CartPoleFailure::Position);
  CHECK_FALSE(cartpole_failed({2.4, 0, 0, 0}, p));
  CHECK_FALSE(cartpole_failed({0, 0, 2 * kDegToRad, 0}, p));
  CHECK(std::abs(2 * kDegToRad - 0.0349066) < 1e-7);
}

TEST_CASE("binary reward") {
  CHECK(binary_reward(false) == 0.0);
  CHECK(binary_reward(true) == -1.0);
  // Cost-to-go of a never-failing sequence.
  double J = 0, discount = 1;
  for (int t = 0; t < 600; ++t, discount *= 0.9) J += discount * binary_reward(false);
  CHECK(J == 0.0);
}

TEST_CASE("bang-bang force") {
  CHECK(force_from_action(0.3, 10) == 10);
  CHECK(force_from_action(-0.0001, 10) == -10);
  CHECK(force_from_action(0.0, 10) == 10);
}

TEST_CASE("state normalisation") {
  const CartPoleParams p;
  CHECK(normalize_state({}, p).isZero(0));
  CHECK(normalize_state({0, 0, p.theta_limit, 0}, p)(0) == 1.0);
  CHECK(normalize_state({0, 0, -p.theta_limit, 0}, p)(0) == -1.0);
  const auto v = normalize_state({1.2, 2.4, 0, 1.0}, p);
  CHECK(v(1) == 0.5);
  CHECK(v(2) == 0.5);
  CHECK(v(3) == 1.0);
}
