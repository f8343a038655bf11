#include "adhdp/lqr.hpp"

#include <cmath>
#include <sstream>

#include "adhdp/errors.hpp"

namespace adhdp {

namespace {

double riccati_map(double P, const ScalarLqrProblem& p) {
  const double abP = p.a * p.b * P;
  return p.q + p.a * p.a * P - abP * abP / (p.r + p.b * p.b * P);
}

}  // namespace

double solve_dare(const ScalarLqrProblem& p, double tol, std::size_t max_iter) {
  if (!(tol > 0.0)) throw InvalidInputError("solve_dare: tol must be positive");
  if (!(p.r > 0.0) || !(p.q >= 0.0)) throw InvalidInputError("solve_dare: need r > 0 and q >= 0");
  double P = p.q;
  for (std::size_t it = 0; it < max_iter; ++it) {
    const double next = riccati_map(P, p);
    if (!std::isfinite(next)) break;
    if (std::abs(next - P) < tol) return next;
    P = next;
  }
  std::ostringstream msg;
  msg << "solve_dare: no convergence within " << max_iter << " iterations";
  throw NumericalError(msg.str());
}

double dare_residual(double P, const ScalarLqrProblem& p) { return P - riccati_map(P, p); }

double lqr_gain(double P, const ScalarLqrProblem& p) { return p.a * p.b * P / (p.r + p.b * p.b * P); }

Rollout lqr_rollout(double x0, std::size_t steps, const ScalarLqrProblem& p, double K) {
  if (steps == 0) throw InvalidInputError("lqr_rollout: steps must be >= 1");
  Rollout out;
  out.states.reserve(steps + 1);
  out.controls.reserve(steps);
  double x = x0;
  out.states.push_back(x);
  for (std::size_t k = 0; k < steps; ++k) {
    const double u = -K * x;
    out.total_cost += p.q * x * x + p.r * u * u;
    x = p.a * x + p.b * u;
    out.controls.push_back(u);
    out.states.push_back(x);
  }
  return out;
}

}  // namespace adhdp
