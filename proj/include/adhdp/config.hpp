#pragma once

// Experiment configuration: a flat `key = value` text format grouped into
// [sections], with every key also settable from the command line.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "adhdp/learner.hpp"
#include "adhdp/plants.hpp"
#include "adhdp/stability_gate.hpp"

namespace adhdp {

enum class PlantKind { Linear, CartPole };

struct ExperimentConfig {
  // [experiment]
  PlantKind plant = PlantKind::Linear;
  std::uint64_t seed = 0;
  std::size_t trials_per_run = 100;
  std::size_t success_steps = 600;
  std::size_t eval_steps = 50;
  std::filesystem::path output_dir = "out";

  // [learner]
  TrainingMode mode = TrainingMode::Full;
  double alpha = 0.9;
  double lc = 0.1;
  double la = 0.1;
  std::size_t hidden_c = 6;
  std::size_t hidden_a = 6;
  std::size_t internal_iterations = 50;
  std::size_t internal_iterations_critic = 0;  // 0: use internal_iterations
  std::size_t internal_iterations_action = 0;  // 0: use internal_iterations
  double stop_tolerance = 1e-6;
  double uc = 0.0;
  double weight_scale = 0.5;

  // [gate]
  GatePolicy gate_policy = GatePolicy::Observe;
  double gate_margin = 0.9;
  GammaParams gammas{};

  // [plant]
  // Linear: {x0}. Cart-pole: {theta [deg], x [m], x_dot [m/s], theta_dot [deg/s]}.
  std::vector<double> initial_state{1.0};
  double init_perturbation = 0.0;  // uniform half-width; degrees on theta for the cart-pole
  std::size_t max_steps_linear = 200;
  double linear_settle_tolerance = 0.01;
  std::size_t linear_settle_window = 10;
  std::size_t linear_settle_deadline = 5;
  double linear_divergence_bound = 5.0;
  CartPoleParams cartpole{};

  LearnerConfig learner_config() const;
  Eigen::Index state_dim() const { return plant == PlantKind::Linear ? 1 : 4; }

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Presets matching the linear and cart-pole setups.
ExperimentConfig linear_preset();
ExperimentConfig cartpole_preset(double initial_angle_deg = 0.85);

/// Names of every recognised key, in file order.
const std::vector<std::string>& config_keys();

/// Sets a single key from its textual value. Throws ConfigError.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses `key = value` lines; `#` starts a comment, `[name]` opens a section.
/// Keys must belong to the section they appear under (or appear before any
/// section header). Starts from the preset named by an optional leading
/// `plant` key.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies overrides on top of `cfg` in order.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::pair<std::string, std::string>>& overrides);

/// Renders a config back to the file format. Parsing the result reproduces
/// every field.
std::string render_config(const ExperimentConfig& cfg);

std::string to_string(PlantKind kind);
std::string to_string(TrainingMode mode);
std::string to_string(GatePolicy policy);

}  // namespace adhdp
