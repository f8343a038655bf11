#include "adhdp/experiment.hpp"

#include <cmath>
#include <limits>

#include "adhdp/errors.hpp"
#include "adhdp/plants.hpp"
#include "adhdp/random.hpp"

namespace adhdp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CartPoleState cartpole_from_config(const std::vector<double>& s) {
  return {s[1], s[2], s[0] * kDegToRad, s[3] * kDegToRad};
}

std::vector<double> cartpole_columns(const CartPoleState& s) { return {s.x, s.x_dot, s.theta, s.theta_dot}; }

CartPoleFailure failure_of(const CartPoleState& s, const CartPoleParams& p) {
  if (!std::isfinite(s.x) || !std::isfinite(s.theta)) return CartPoleFailure::Angle;
  return cartpole_failure(s, p);
}

FailureCause to_cause(CartPoleFailure f) {
  switch (f) {
    case CartPoleFailure::Angle: return FailureCause::Angle;
    case CartPoleFailure::Position: return FailureCause::Position;
    case CartPoleFailure::None: break;
  }
  return FailureCause::None;
}

Vector<double> scalar_vector(double x) {
  Vector<double> v(1);
  v << x;
  return v;
}

void fill_diagnostics(StepRow& row, const StepDiagnostics<double>& d) {
  row.j_hat = d.j_now;
  row.e_c = d.e_c;
  row.e_a = d.e_a;
  row.lc_bound = d.gate ? d.gate->lc_bound : kNaN;
  row.la_bound = d.gate ? d.gate->la_bound : kNaN;
}

void mark_diverged(StepRow& row) {
  row.j_hat = row.e_c = row.e_a = kNaN;
  row.lc_bound = row.la_bound = kNaN;
}

TrialRecord linear_trial(LearnerState<double>& learner, const ExperimentConfig& cfg, double x0, std::size_t index,
                         StabilityGate* gate, bool* clamp_respected) {
  TrialRecord rec;
  rec.trial_index = index;
  const LearnerConfig lcfg = cfg.learner_config();
  double x = x0;
  if (!(std::abs(x) <= cfg.linear_divergence_bound)) {
    rec.failure_cause = FailureCause::Divergence;
    return rec;
  }
  std::size_t settled_run = 0;
  rec.failure_cause = FailureCause::HorizonReached;
  for (std::size_t t = 0; t < cfg.max_steps_linear; ++t) {
    StepRow row;
    row.t = t;
    row.state = {x};
    row.u = forward(learner.action, scalar_vector(x)).output(0);
    row.applied = row.u;
    const double next = linear_step(x, row.u);
    row.reward = quadratic_reward(x, row.u);
    try {
      const auto diag = train_at_step(learner, scalar_vector(next), row.reward, lcfg, gate);
      fill_diagnostics(row, diag);
      if (clamp_respected && diag.gate) *clamp_respected = *clamp_respected && diag.gate->within_margin;
    } catch (const DivergenceError&) {
      mark_diverged(row);
      rec.rows.push_back(std::move(row));
      rec.failure_cause = FailureCause::Divergence;
      break;
    }
    rec.rows.push_back(std::move(row));
    x = next;
    if (!std::isfinite(x) || std::abs(x) > cfg.linear_divergence_bound) {
      rec.failure_cause = FailureCause::Divergence;
      break;
    }
    settled_run = std::abs(x) < cfg.linear_settle_tolerance ? settled_run + 1 : 0;
    if (settled_run >= cfg.linear_settle_window) {
      // x_{t+1} closes the window; its first state is x_{t+2-window}.
      const std::size_t window_start = t + 2 - cfg.linear_settle_window;
      rec.failure_cause = FailureCause::None;
      rec.succeeded = window_start <= cfg.linear_settle_deadline;
      break;
    }
  }
  rec.steps_survived = rec.rows.size();
  return rec;
}

TrialRecord cartpole_trial(LearnerState<double>& learner, const ExperimentConfig& cfg,
                           const std::vector<double>& init, std::size_t index, StabilityGate* gate,
                           bool* clamp_respected) {
  TrialRecord rec;
  rec.trial_index = index;
  const LearnerConfig lcfg = cfg.learner_config();
  const CartPoleParams& p = cfg.cartpole;
  CartPoleState s = cartpole_from_config(init);
  if (const auto f = failure_of(s, p); f != CartPoleFailure::None) {
    rec.failure_cause = to_cause(f);
    return rec;
  }
  rec.failure_cause = FailureCause::HorizonReached;
  for (std::size_t t = 0; t < cfg.success_steps; ++t) {
    StepRow row;
    row.t = t;
    row.state = cartpole_columns(s);
    row.u = forward(learner.action, Vector<double>(normalize_state(s, p))).output(0);
    row.applied = force_from_action(row.u, p.force_mag);
    const CartPoleState next = cartpole_step(s, row.applied, p);
    const CartPoleFailure f = failure_of(next, p);
    row.reward = binary_reward(f != CartPoleFailure::None);
    try {
      const auto diag = train_at_step(learner, Vector<double>(normalize_state(next, p)), row.reward, lcfg, gate);
      fill_diagnostics(row, diag);
      if (clamp_respected && diag.gate) *clamp_respected = *clamp_respected && diag.gate->within_margin;
    } catch (const DivergenceError&) {
      mark_diverged(row);
      rec.rows.push_back(std::move(row));
      rec.failure_cause = FailureCause::Divergence;
      break;
    }
    rec.rows.push_back(std::move(row));
    s = next;
    if (f != CartPoleFailure::None) {
      rec.failure_cause = to_cause(f);
      break;
    }
  }
  rec.steps_survived = rec.rows.size();
  rec.succeeded = rec.failure_cause == FailureCause::HorizonReached;
  return rec;
}

}  // namespace

std::string to_string(FailureCause cause) {
  switch (cause) {
    case FailureCause::None: return "none";
    case FailureCause::Angle: return "angle";
    case FailureCause::Position: return "position";
    case FailureCause::Divergence: return "divergence";
    case FailureCause::HorizonReached: return "horizon";
  }
  return "none";
}

std::vector<std::string> state_column_names(PlantKind plant) {
  if (plant == PlantKind::Linear) return {"x"};
  return {"x", "x_dot", "theta", "theta_dot"};
}

TrialRecord run_trial(LearnerState<double>& learner, const ExperimentConfig& config,
                      const std::vector<double>& initial_state, std::size_t trial_index, StabilityGate* gate,
                      bool* clamp_respected) {
  if (initial_state.size() != static_cast<std::size_t>(config.state_dim()))
    throw ConfigError("run_trial: initial state has the wrong dimension");
  if (config.plant == PlantKind::Linear)
    return linear_trial(learner, config, initial_state[0], trial_index, gate, clamp_respected);
  return cartpole_trial(learner, config, initial_state, trial_index, gate, clamp_respected);
}

RunRecord run_experiment(const ExperimentConfig& config) {
  config.validate();
  RunRecord run;
  run.seed = config.seed;
  run.plant = config.plant;

  LearnerState<double> learner = make_learner<double>(config.state_dim(), 1, Eigen::Index(config.hidden_c),
                                                      Eigen::Index(config.hidden_a), config.seed,
                                                      config.weight_scale);
  run.initial_learner = learner;

  std::optional<StabilityGate> gate;
  if (config.gate_policy != GatePolicy::Off)
    gate.emplace(config.alpha, config.gammas, config.gate_policy, config.gate_margin);

  // Trial-start perturbations come from their own stream so they never shift
  // the weight initialisation.
  Xorshift64Star perturb_rng(Xorshift64Star::splitmix64(config.seed ^ 0x5EEDF00DULL));

  for (std::size_t k = 0; k < config.trials_per_run; ++k) {
    std::vector<double> init = config.initial_state;
    if (config.init_perturbation > 0.0)
      init[0] += perturb_rng.uniform(-config.init_perturbation, config.init_perturbation);
    run.trials.push_back(run_trial(learner, config, init, k, gate ? &*gate : nullptr, &run.clamp_respected));
    if (run.trials.back().succeeded) {
      run.first_success_trial = k;
      break;
    }
  }
  run.success = !run.trials.empty() && run.trials.back().succeeded;
  if (gate) {
    run.running_min_lc_bound = gate->running_min_lc();
    run.running_min_la_bound = gate->running_min_la();
  }
  run.final_learner = learner;
  run.evaluation = evaluate_policy(learner.action, config, config.initial_state, config.eval_steps);
  return run;
}

TrialRecord evaluate_policy(const TwoLayerNet<double>& action, const ExperimentConfig& config,
                            const std::vector<double>& initial_state, std::size_t steps) {
  TrialRecord rec;
  rec.failure_cause = FailureCause::HorizonReached;
  auto blank_row = [](std::size_t t) {
    StepRow row;
    row.t = t;
    mark_diverged(row);
    return row;
  };

  if (config.plant == PlantKind::Linear) {
    double x = initial_state.at(0);
    for (std::size_t t = 0; t < steps; ++t) {
      StepRow row = blank_row(t);
      row.state = {x};
      row.u = row.applied = forward(action, scalar_vector(x)).output(0);
      row.reward = quadratic_reward(x, row.u);
      rec.rows.push_back(row);
      x = linear_step(x, row.u);
      if (!std::isfinite(x) || std::abs(x) > config.linear_divergence_bound) {
        rec.failure_cause = FailureCause::Divergence;
        break;
      }
    }
  } else {
    const CartPoleParams& p = config.cartpole;
    CartPoleState s = cartpole_from_config(initial_state);
    if (const auto f = failure_of(s, p); f != CartPoleFailure::None) {
      rec.failure_cause = to_cause(f);
      return rec;
    }
    for (std::size_t t = 0; t < steps; ++t) {
      StepRow row = blank_row(t);
      row.state = cartpole_columns(s);
      row.u = forward(action, Vector<double>(normalize_state(s, p))).output(0);
      row.applied = force_from_action(row.u, p.force_mag);
      s = cartpole_step(s, row.applied, p);
      const auto f = failure_of(s, p);
      row.reward = binary_reward(f != CartPoleFailure::None);
      rec.rows.push_back(row);
      if (f != CartPoleFailure::None) {
        rec.failure_cause = to_cause(f);
        break;
      }
    }
  }
  rec.steps_survived = rec.rows.size();
  rec.succeeded = rec.failure_cause == FailureCause::HorizonReached;
  return rec;
}

ControllerComparison compare_controllers(const LinearPolicy& a, const LinearPolicy& b, double x0,
                                         std::size_t horizon) {
  auto rollout = [&](const LinearPolicy& policy, std::vector<double>& states) {
    double x = x0, cost = 0;
    states.assign(1, x);
    for (std::size_t k = 0; k < horizon; ++k) {
      const double u = policy(x);
      cost += quadratic_reward(x, u);
      x = linear_step(x, u);
      states.push_back(x);
    }
    return cost;
  };
  ControllerComparison out;
  out.cost_a = rollout(a, out.states_a);
  out.cost_b = rollout(b, out.states_b);
  out.ratio = out.cost_a / out.cost_b;
  return out;
}

LqrComparison compare_with_lqr(const ExperimentConfig& config, std::size_t horizon) {
  if (config.plant != PlantKind::Linear) throw ConfigError("compare-lqr requires the linear plant");
  LqrComparison out;
  out.run = run_experiment(config);
  const ScalarLqrProblem problem;
  out.P = solve_dare(problem);
  out.K = lqr_gain(out.P, problem);
  const TwoLayerNet<double> action = out.run.final_learner.action;
  const double K = out.K;
  out.costs = compare_controllers([&](double x) { return forward(action, scalar_vector(x)).output(0); },
                                  [K](double x) { return -K * x; }, config.initial_state.at(0), horizon);
  return out;
}

}  // namespace adhdp
