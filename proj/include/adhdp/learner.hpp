#pragma once

// Online ADHDP training: temporal-difference critic, action network driven
// toward the ultimate objective, and the closed-form gradient-descent updates
// for all four weight layers.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "adhdp/errors.hpp"
#include "adhdp/neural_core.hpp"
#include "adhdp/stability_gate.hpp"

namespace adhdp {

enum class TrainingMode { Full, Part };

struct LearnerConfig {
  double alpha = 0.9;
  double lc = 0.1;
  double la = 0.1;
  TrainingMode mode = TrainingMode::Full;
  std::size_t internal_iterations_critic = 50;
  std::size_t internal_iterations_action = 50;
  double uc = 0.0;
  double stop_tolerance = 1e-6;
  double max_weight = 1e6;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(lc > 0.0)) throw ConfigError("lc must be positive");
    if (!(la > 0.0)) throw ConfigError("la must be positive");
    if (internal_iterations_critic == 0 || internal_iterations_action == 0)
      throw ConfigError("internal iteration counts must be positive");
    if (!(stop_tolerance >= 0.0)) throw ConfigError("stop_tolerance must be non-negative");
    if (!std::isfinite(uc)) throw ConfigError("uc must be finite");
  }
};

template <typename Scalar>
struct LearnerState {
  TwoLayerNet<Scalar> critic;  // (m + n) -> hidden_c -> 1
  TwoLayerNet<Scalar> action;  // m -> hidden_a -> n
  Scalar j_prev = 0;

  Eigen::Index m() const { return action.in_dim(); }
  Eigen::Index n() const { return action.out_dim(); }

  bool consistent() const {
    return critic.consistent() && action.consistent() && critic.out_dim() == 1 &&
           critic.in_dim() == action.in_dim() + action.out_dim();
  }
};

template <typename Scalar>
LearnerState<Scalar> make_learner(Eigen::Index m, Eigen::Index n, Eigen::Index hidden_c,
                                  Eigen::Index hidden_a, std::uint64_t seed, double scale = 0.5) {
  // Critic and action draw from decorrelated streams of the same seed.
  LearnerState<Scalar> s{init_weights<Scalar>(m + n, hidden_c, 1, Xorshift64Star::splitmix64(seed), scale),
                         init_weights<Scalar>(m, hidden_a, n, Xorshift64Star::splitmix64(seed ^ 0xA5A5A5A5ULL), scale),
                         Scalar(0)};
  return s;
}

// e_c = alpha * J(t) + r(t) - J(t-1)
template <typename Scalar>
Scalar critic_error(Scalar j_now, Scalar reward, Scalar j_prev, Scalar alpha) {
  return alpha * j_now + reward - j_prev;
}

// e_a = J(t) - U_c
template <typename Scalar>
Scalar action_error(Scalar j_now, Scalar uc) {
  return j_now - uc;
}

/// Critic input y = (x, u).
template <typename Scalar>
Vector<Scalar> critic_input(const Vector<Scalar>& x, const Vector<Scalar>& u) {
  Vector<Scalar> y(x.size() + u.size());
  y << x, u;
  return y;
}

/// dJ/du_k = sum_r w_c2[r] * (1 - phi_c[r]^2)/2 * w_c1[r, m + k], the critic's
/// sensitivity to each control input.
template <typename Scalar>
Vector<Scalar> critic_control_gradient(const TwoLayerNet<Scalar>& critic, const ForwardTrace<Scalar>& trace_c,
                                       Eigen::Index m, Eigen::Index n) {
  const Vector<Scalar> back = critic.w2.row(0).transpose().cwiseProduct(transfer_slope(trace_c.phi));
  return critic.w1.middleCols(m, n).transpose() * back;
}

template <typename Scalar>
Matrix<Scalar> update_critic_output(const TwoLayerNet<Scalar>& critic, const ForwardTrace<Scalar>& trace_c,
                                    Scalar e_c, Scalar alpha, Scalar lc) {
  return critic.w2 - (lc * alpha * e_c) * trace_c.phi.transpose();
}

template <typename Scalar>
Matrix<Scalar> update_critic_hidden(const TwoLayerNet<Scalar>& critic, const ForwardTrace<Scalar>& trace_c,
                                    const Vector<Scalar>& y, Scalar e_c, Scalar alpha, Scalar lc) {
  if (y.size() != critic.in_dim()) throw ContractError("update_critic_hidden: y length mismatch");
  const Vector<Scalar> delta = critic.w2.row(0).transpose().cwiseProduct(transfer_slope(trace_c.phi));
  return critic.w1 - (lc * alpha * e_c) * delta * y.transpose();
}

template <typename Scalar>
Matrix<Scalar> update_action_output(const TwoLayerNet<Scalar>& action, const ForwardTrace<Scalar>& trace_a,
                                    const TwoLayerNet<Scalar>& critic, const ForwardTrace<Scalar>& trace_c,
                                    Scalar e_a, Scalar la) {
  const Vector<Scalar> g = critic_control_gradient(critic, trace_c, action.in_dim(), action.out_dim());
  return action.w2 - (la * e_a) * g * trace_a.phi.transpose();
}

template <typename Scalar>
Matrix<Scalar> update_action_hidden(const TwoLayerNet<Scalar>& action, const ForwardTrace<Scalar>& trace_a,
                                    const TwoLayerNet<Scalar>& critic, const ForwardTrace<Scalar>& trace_c,
                                    const Vector<Scalar>& x, Scalar e_a, Scalar la) {
  if (x.size() != action.in_dim()) throw ContractError("update_action_hidden: x length mismatch");
  const Vector<Scalar> g = critic_control_gradient(critic, trace_c, action.in_dim(), action.out_dim());
  const Vector<Scalar> delta = (action.w2.transpose() * g).cwiseProduct(transfer_slope(trace_a.phi));
  return action.w1 - (la * e_a) * delta * x.transpose();
}

template <typename Scalar>
struct StepDiagnostics {
  Scalar e_c = 0;                // last critic error evaluated in the critic loop
  Scalar e_a = 0;                // last action error evaluated in the action loop
  Scalar j_now = 0;              // J(t) with the updated weights
  Vector<Scalar> u;              // action output with the updated weights
  std::size_t critic_iterations = 0;
  std::size_t action_iterations = 0;
  std::optional<GateRecord> gate;
};

namespace detail {

template <typename Scalar>
void check_finite_weights(const LearnerState<Scalar>& s, double max_weight, std::size_t iteration) {
  using std::abs;
  auto bad = [&](const Matrix<Scalar>& w) {
    return !w.allFinite() || (w.size() > 0 && double(w.cwiseAbs().maxCoeff()) > max_weight);
  };
  if (bad(s.critic.w1) || bad(s.critic.w2) || bad(s.action.w1) || bad(s.action.w2))
    throw DivergenceError("weights left the finite envelope", iteration);
}

}  // namespace detail

/// One plant step of ADHDP learning at state x with reinforcement `reward`.
/// The critic loop runs to completion before the action loop; j_prev is
/// refreshed with the updated networks at the end. When `gate` is non-null it
/// is evaluated at every inner iteration and supplies the effective rates.
template <typename Scalar>
StepDiagnostics<Scalar> train_at_step(LearnerState<Scalar>& learner, const Vector<Scalar>& x, Scalar reward,
                                      const LearnerConfig& config, StabilityGate* gate = nullptr) {
  using std::isfinite;
  if (!learner.consistent()) throw ContractError("train_at_step: inconsistent learner shapes");
  if (x.size() != learner.m()) throw ContractError("train_at_step: state length mismatch");

  const Scalar alpha(config.alpha);
  const bool full = config.mode == TrainingMode::Full;
  StepDiagnostics<Scalar> diag;
  std::optional<GateRecord> step_gate;
  if (gate) gate->begin_step();

  auto forward_all = [&](ForwardTrace<Scalar>& ta, Vector<Scalar>& y, ForwardTrace<Scalar>& tc) {
    ta = forward(learner.action, x);
    y = critic_input(x, ta.output);
    tc = forward(learner.critic, y);
  };
  auto effective_rates = [&](const ForwardTrace<Scalar>& ta, const Vector<Scalar>& y,
                             const ForwardTrace<Scalar>& tc) -> GateRecord {
    return gate->evaluate(learner.critic.template cast<double>(), tc.phi.template cast<double>(),
                          learner.action.template cast<double>(), ta.phi.template cast<double>(),
                          x.template cast<double>(), y.template cast<double>(), config.lc, config.la);
  };

  ForwardTrace<Scalar> ta, tc;
  Vector<Scalar> y;
  std::size_t iteration = 0;

  for (std::size_t i = 0; i < config.internal_iterations_critic; ++i, ++iteration) {
    forward_all(ta, y, tc);
    const Scalar e_c = critic_error(tc.output(0), reward, learner.j_prev, alpha);
    if (!isfinite(e_c)) throw DivergenceError("non-finite critic error", iteration);
    diag.e_c = e_c;
    if (double(e_c * e_c) < config.stop_tolerance) break;
    Scalar lc(config.lc);
    if (gate) {
      const GateRecord rec = effective_rates(ta, y, tc);
      lc = Scalar(rec.lc_effective);
      step_gate = step_gate ? merge_step(*step_gate, rec) : rec;
    }
    Matrix<Scalar> w2 = update_critic_output(learner.critic, tc, e_c, alpha, lc);
    if (full) learner.critic.w1 = update_critic_hidden(learner.critic, tc, y, e_c, alpha, lc);
    learner.critic.w2 = std::move(w2);
    ++diag.critic_iterations;
    detail::check_finite_weights(learner, config.max_weight, iteration);
  }

  const Scalar uc(config.uc);
  for (std::size_t i = 0; i < config.internal_iterations_action; ++i, ++iteration) {
    forward_all(ta, y, tc);
    const Scalar e_a = action_error(tc.output(0), uc);
    if (!isfinite(e_a)) throw DivergenceError("non-finite action error", iteration);
    diag.e_a = e_a;
    if (double(e_a * e_a) < config.stop_tolerance) break;
    Scalar la(config.la);
    if (gate) {
      const GateRecord rec = effective_rates(ta, y, tc);
      la = Scalar(rec.la_effective);
      step_gate = step_gate ? merge_step(*step_gate, rec) : rec;
    }
    Matrix<Scalar> w2 = update_action_output(learner.action, ta, learner.critic, tc, e_a, la);
    if (full) learner.action.w1 = update_action_hidden(learner.action, ta, learner.critic, tc, x, e_a, la);
    learner.action.w2 = std::move(w2);
    ++diag.action_iterations;
    detail::check_finite_weights(learner, config.max_weight, iteration);
  }

  forward_all(ta, y, tc);
  if (!isfinite(tc.output(0))) throw DivergenceError("non-finite cost-to-go", iteration);
  learner.j_prev = tc.output(0);
  diag.j_now = tc.output(0);
  diag.u = ta.output;
  if (gate) {
    // A step where both loops stopped immediately still gets a record.
    if (!step_gate) step_gate = effective_rates(ta, y, tc);
    diag.gate = gate->end_step(*step_gate);
  }
  return diag;
}

}  // namespace adhdp
