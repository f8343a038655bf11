#pragma once

#include <cstddef>
#include <vector>

namespace adhdp {

// Scalar plant x' = a x + b u with stage cost q x^2 + r u^2.
struct ScalarLqrProblem {
  double a = 1.25;
  double b = 1.0;
  double q = 0.04;
  double r = 0.01;
};

/// Fixed-point iteration of P = q + a^2 P - (a b P)^2 / (r + b^2 P) from P0 = q.
/// Throws NumericalError when |dP| < tol is not reached within max_iter.
double solve_dare(const ScalarLqrProblem& p, double tol = 1e-12, std::size_t max_iter = 10000);

double dare_residual(double P, const ScalarLqrProblem& p);

/// K = a b P / (r + b^2 P); the control law is u = -K x.
double lqr_gain(double P, const ScalarLqrProblem& p);

struct Rollout {
  std::vector<double> states;    // x_0 .. x_steps
  std::vector<double> controls;  // u_0 .. u_{steps-1}
  double total_cost = 0;         // sum_k q x_k^2 + r u_k^2, k < steps
};

Rollout lqr_rollout(double x0, std::size_t steps, const ScalarLqrProblem& p, double K);

}  // namespace adhdp
