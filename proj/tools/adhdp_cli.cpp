// adhdp: train and evaluate ADHDP controllers on the linear plant and the
// cart-pole from the command line.
//
//   adhdp run --config configs/linear.cfg --seed 7
//   adhdp compare-lqr --config configs/linear.cfg
//   adhdp plot --csv out/evaluation.csv --columns x,u --out x.svg
//   adhdp sweep --config configs/cartpole.cfg --seeds 0..9

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "adhdp/config.hpp"
#include "adhdp/errors.hpp"
#include "adhdp/experiment.hpp"
#include "adhdp/report.hpp"

namespace fs = std::filesystem;
using namespace adhdp;

namespace {

struct ConfigOptions {
  std::string config_path;
  std::map<std::string, std::string> values;  // flag overrides by key
};

// --config plus one --<key> flag per configuration key.
void add_config_options(CLI::App* app, ConfigOptions& opts) {
  app->add_option("--config", opts.config_path, "Configuration file (key = value with [sections])");
  for (const auto& key : config_keys())
    app->add_option_function<std::string>(
        "--" + key, [&opts, key](const std::string& v) { opts.values[key] = v; }, "Override '" + key + "'");
}

ExperimentConfig build_config(const ConfigOptions& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = load_config(opts.config_path);
  } else if (auto it = opts.values.find("plant"); it != opts.values.end()) {
    cfg = parse_config("plant = " + it->second + "\n", "--plant");
  } else {
    cfg = linear_preset();
  }
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& key : config_keys())
    if (auto it = opts.values.find(key); it != opts.values.end()) overrides.emplace_back(key, it->second);
  apply_overrides(cfg, overrides);
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// "0..19", "3", "1,4,9" and mixtures such as "0..3,8".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (s.empty() || pos != s.size() || s[0] == '-') throw ConfigError("invalid seed list '" + text + "'");
    return std::uint64_t(v);
  };
  for (const auto& part : split_list(text)) {
    if (auto dots = part.find(".."); dots != std::string::npos) {
      const auto lo = number(part.substr(0, dots)), hi = number(part.substr(dots + 2));
      if (hi < lo) throw ConfigError("invalid seed range '" + part + "'");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(number(part));
    }
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

std::vector<std::string> plot_columns(PlantKind plant) {
  return plant == PlantKind::Linear ? std::vector<std::string>{"x", "u"} : std::vector<std::string>{"theta", "x"};
}

int cmd_run(const ConfigOptions& opts) {
  const ExperimentConfig cfg = build_config(opts);
  const RunRecord run = run_experiment(cfg);
  const fs::path dir = cfg.output_dir;
  emit_csv(run, dir);
  write_text(dir / "config.cfg", render_config(cfg));
  write_text(dir / "weights_start.txt", serialize_weights(run.initial_learner));
  write_text(dir / "weights_end.txt", serialize_weights(run.final_learner));

  const auto columns = plot_columns(cfg.plant);
  if (!run.trials.empty()) {
    const std::string last = "trial_" + std::to_string(run.trials.back().trial_index);
    emit_plot(dir / (last + ".csv"), columns, dir / (last + ".svg"), "final training trial");
    emit_plot(dir / "evaluation.csv", columns, dir / "evaluation.svg", "frozen controller");
    if (cfg.gate_policy != GatePolicy::Off)
      emit_plot(dir / (last + ".csv"), {"lc_bound", "la_bound"}, dir / "gate_bounds.svg", "learning-rate bounds");
  }

  std::cout << "plant " << to_string(cfg.plant) << ", mode " << to_string(cfg.mode) << ", seed " << cfg.seed << ": "
            << run.trials.size() << " trial(s), " << (run.success ? "success" : "no success");
  if (run.first_success_trial) std::cout << " at trial " << *run.first_success_trial;
  std::cout << ", evaluation " << to_string(run.evaluation.failure_cause) << " after "
            << run.evaluation.steps_survived << " steps\n"
            << "outputs in " << dir.string() << '\n';
  return 0;
}

int cmd_compare(const ConfigOptions& opts, std::size_t horizon) {
  const ExperimentConfig cfg = build_config(opts);
  const LqrComparison cmp = compare_with_lqr(cfg, horizon);
  std::printf("P = %.9g\nK = %.9g\ncost_adhdp = %.9g\ncost_lqr = %.9g\nratio = %.9g\n", cmp.P, cmp.K,
              cmp.costs.cost_a, cmp.costs.cost_b, cmp.costs.ratio);

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "t,x_adhdp,x_lqr\n";
  for (std::size_t t = 0; t < cmp.costs.states_a.size(); ++t)
    csv << t << ',' << format_value(cmp.costs.states_a[t]) << ',' << format_value(cmp.costs.states_b[t]) << '\n';
  write_text(dir / "lqr_comparison.csv", csv.str());
  emit_plot(dir / "lqr_comparison.csv", {"x_adhdp", "x_lqr"}, dir / "lqr_comparison.svg", "ADHDP vs LQR");
  return 0;
}

int cmd_plot(const std::string& csv, const std::string& columns, const std::string& out, const std::string& title) {
  const auto cols = split_list(columns);
  if (cols.empty()) throw ConfigError("--columns needs at least one column name");
  emit_plot(csv, cols, out, title);
  return 0;
}

int cmd_sweep(const ConfigOptions& opts, const std::string& seed_list, double perturbation) {
  ExperimentConfig base = build_config(opts);
  // Probe robustness on the cart-pole unless a perturbation was chosen explicitly.
  if (base.plant == PlantKind::CartPole && base.init_perturbation == 0.0 && !opts.values.count("init_perturbation"))
    base.init_perturbation = perturbation;
  const auto seeds = parse_seeds(seed_list);
  const bool linear = base.plant == PlantKind::Linear;
  const ScalarLqrProblem problem;
  const double K = lqr_gain(solve_dare(problem), problem);

  std::printf("%6s %7s %8s %14s %11s %11s%s\n", "seed", "trials", "success", "first_success", "eval_steps",
              "eval_cause", linear ? "  cost_ratio" : "");
  std::size_t successes = 0;
  for (const auto seed : seeds) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    const RunRecord run = run_experiment(cfg);
    successes += run.success;
    const std::string first = run.first_success_trial ? std::to_string(*run.first_success_trial) : "-";
    std::printf("%6llu %7zu %8s %14s %11zu %11s", static_cast<unsigned long long>(seed), run.trials.size(),
                run.success ? "yes" : "no", first.c_str(), run.evaluation.steps_survived,
                to_string(run.evaluation.failure_cause).c_str());
    if (linear) {
      const auto action = run.final_learner.action;
      const auto cmp = compare_controllers(
          [&](double x) {
            Vector<double> in(1);
            in << x;
            return forward(action, in).output(0);
          },
          [K](double x) { return -K * x; }, cfg.initial_state[0], 50);
      std::printf("  %10s", format_value(cmp.ratio).c_str());
    }
    std::printf("\n");
  }
  std::printf("success rate: %zu/%zu (%.1f%%)\n", successes, seeds.size(),
              100.0 * double(successes) / double(seeds.size()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADHDP controller training and evaluation"};
  app.require_subcommand(1);

  ConfigOptions run_opts, compare_opts, sweep_opts;
  auto* run = app.add_subcommand("run", "Train on one configuration and write CSV, SVG and weight files");
  add_config_options(run, run_opts);

  std::size_t horizon = 50;
  auto* compare = app.add_subcommand("compare-lqr", "Train on the linear plant and compare against LQR");
  add_config_options(compare, compare_opts);
  compare->add_option("--horizon", horizon, "Comparison horizon in steps")->capture_default_str();

  std::string csv, columns, out, title;
  auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  plot->add_option("--csv", csv, "Input CSV")->required();
  plot->add_option("--columns", columns, "Comma-separated column names")->required();
  plot->add_option("--out", out, "Output SVG path")->required();
  plot->add_option("--title", title, "Chart title");

  std::string seeds = "0..19";
  double perturbation = 0.05;
  auto* sweep = app.add_subcommand("sweep", "Run one configuration over many seeds and tabulate success");
  add_config_options(sweep, sweep_opts);
  sweep->add_option("--seeds", seeds, "Seed list, e.g. 0..19 or 1,5,9")->capture_default_str();
  sweep->add_option("--sweep-perturbation", perturbation,
                    "Cart-pole initial-angle perturbation in degrees when none is configured")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "adhdp: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*compare) return cmd_compare(compare_opts, horizon);
    if (*plot) return cmd_plot(csv, columns, out, title);
    if (*sweep) return cmd_sweep(sweep_opts, seeds, perturbation);
  } catch (const std::exception& e) {
    std::cerr << "adhdp: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
