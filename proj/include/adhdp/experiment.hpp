#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adhdp/config.hpp"
#include "adhdp/learner.hpp"
#include "adhdp/lqr.hpp"

namespace adhdp {

enum class FailureCause { None, Angle, Position, Divergence, HorizonReached };

std::string to_string(FailureCause cause);

struct StepRow {
  std::size_t t = 0;
  std::vector<double> state;  // plant state before the step (SI units)
  double u = 0;               // raw action-network output
  double applied = 0;         // force (cart-pole) or control (linear) sent to the plant
  double reward = 0;
  double j_hat = 0;
  double e_c = 0;
  double e_a = 0;
  double lc_bound = 0;  // NaN when the gate is off
  double la_bound = 0;
};

struct TrialRecord {
  std::size_t trial_index = 0;
  std::size_t steps_survived = 0;  // == rows.size()
  FailureCause failure_cause = FailureCause::None;
  bool succeeded = false;
  std::vector<StepRow> rows;
};

struct RunRecord {
  std::uint64_t seed = 0;
  PlantKind plant = PlantKind::Linear;
  std::vector<TrialRecord> trials;
  bool success = false;  // final trial succeeded
  std::optional<std::size_t> first_success_trial;
  double running_min_lc_bound = kInfiniteBound;
  double running_min_la_bound = kInfiniteBound;
  bool clamp_respected = true;  // every gated update used rate <= margin * bound
  LearnerState<double> initial_learner;
  LearnerState<double> final_learner;
  TrialRecord evaluation;  // frozen-weight rollout after training
};

/// Column names for the per-step CSV of the given plant.
std::vector<std::string> state_column_names(PlantKind plant);

/// One trial from `initial_state` (config units); the learner keeps its
/// weights afterwards. Divergence ends the trial instead of propagating.
TrialRecord run_trial(LearnerState<double>& learner, const ExperimentConfig& config,
                      const std::vector<double>& initial_state, std::size_t trial_index, StabilityGate* gate,
                      bool* clamp_respected = nullptr);

/// Seeds both networks, runs up to trials_per_run trials with persistent
/// weights, stopping at the first successful trial, then evaluates the frozen
/// controller for eval_steps from the unperturbed initial state.
RunRecord run_experiment(const ExperimentConfig& config);

/// Rollout of a fixed action network (no learning) from `initial_state`.
TrialRecord evaluate_policy(const TwoLayerNet<double>& action, const ExperimentConfig& config,
                            const std::vector<double>& initial_state, std::size_t steps);

using LinearPolicy = std::function<double(double)>;

struct ControllerComparison {
  double cost_a = 0;
  double cost_b = 0;
  double ratio = 0;  // cost_a / cost_b
  std::vector<double> states_a, states_b;
};

/// Undiscounted sum of 0.04 x^2 + 0.01 u^2 over `horizon` steps for two
/// controllers of the linear plant started at x0.
ControllerComparison compare_controllers(const LinearPolicy& a, const LinearPolicy& b, double x0,
                                         std::size_t horizon);

struct LqrComparison {
  double P = 0;
  double K = 0;
  ControllerComparison costs;  // a = trained ADHDP, b = LQR
  RunRecord run;
};

/// Trains per `config` (linear plant only), then compares the frozen action
/// network with the LQR law from the same x0.
LqrComparison compare_with_lqr(const ExperimentConfig& config, std::size_t horizon = 50);

}  // namespace adhdp
