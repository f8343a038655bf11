// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adhdp/experiment.hpp"
#include "adhdp/plants.hpp"
#include "adhdp/report.hpp"
#include "adhdp/stability_gate.hpp"
#include "gradient_check.hpp"

using namespace adhdp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body, double time_limit_s) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > time_limit_s) {
    o.pass = false;
    o.detail += "; over time limit";
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d [%s] %s: %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Sweep-mode cart-pole run: 0.05 degree trial-start perturbation.
RunRecord cartpole_run(double angle, TrainingMode mode, std::uint64_t seed, GatePolicy policy = GatePolicy::Observe) {
  auto cfg = cartpole_preset(angle);
  cfg.mode = mode;
  cfg.seed = seed;
  cfg.init_perturbation = 0.05;
  cfg.gate_policy = policy;
  return run_experiment(cfg);
}

bool left_track(const RunRecord& run) {
  if (run.evaluation.failure_cause == FailureCause::Position) return true;
  for (const auto& t : run.trials)
    if (t.failure_cause == FailureCause::Position) return true;
  return false;
}

double max_abs_theta_deg_last(const TrialRecord& t, std::size_t n) {
  double m = 0;
  for (std::size_t k = t.rows.size() > n ? t.rows.size() - n : 0; k < t.rows.size(); ++k)
    m = std::max(m, std::abs(t.rows[k].state[2]) / kDegToRad);
  return m;
}

// Part-mode runs collected by criterion 5 for criterion 8.
std::vector<RunRecord> part_runs;

Outcome gradient_fidelity() {
  double worst = 0;
  int bad = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rep = testing::check_gradients(1000 + seed);
    worst = std::max(worst, rep.worst());
    bad += rep.worst() >= 1e-6;
  }
  return {bad == 0, fmt("100 nets, worst relative error %.3g over 4 updates", worst)};
}

Outcome dynamics_oracle() {
  const CartPoleParams p;
  const auto a = cartpole_accels({}, 10.0, p);
  const bool hand = std::abs(a.theta_ddot + 14.63415) < 1e-5 && std::abs(a.x_ddot - 9.75610) < 1e-5;
  Xorshift64Star rng(31337);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const CartPoleState s{rng.uniform(-2.4, 2.4), rng.uniform(-3, 3), rng.uniform(-0.21, 0.21), rng.uniform(-3, 3)};
    const double F = rng.uniform(-10, 10);
    const auto f = cartpole_accels(s, F, p), g = cartpole_accels({s.x, s.x_dot, -s.theta, -s.theta_dot}, -F, p);
    worst = std::max({worst, std::abs(f.theta_ddot + g.theta_ddot), std::abs(f.x_ddot + g.x_ddot)});
  }
  return {hand && worst < 1e-12,
          fmt("theta_ddot %.6f, x_ddot %.6f, worst symmetry defect %.3g", a.theta_ddot, a.x_ddot, worst)};
}

struct LinearSweep {
  int settled = 0;
  int close = 0;
  std::vector<double> ratios;
};

LinearSweep linear_sweep() {
  static std::optional<LinearSweep> cache;
  if (cache) return *cache;
  LinearSweep out;
  const ScalarLqrProblem prob;
  const double K = lqr_gain(solve_dare(prob), prob);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cfg = linear_preset();
    cfg.seed = seed;
    const auto run = run_experiment(cfg);
    bool settled = false;
    for (std::size_t t = 0; t <= 10 && t < run.evaluation.rows.size(); ++t)
      settled = settled || std::abs(run.evaluation.rows[t].state[0]) < 0.05;
    out.settled += settled;
    const auto action = run.final_learner.action;
    const auto cmp = compare_controllers(
        [&](double x) {
          Vector<double> in(1);
          in << x;
          return forward(action, in).output(0);
        },
        [K](double x) { return -K * x; }, 1.0, 50);
    out.ratios.push_back(cmp.ratio);
    out.close += cmp.ratio >= 1.0 && cmp.ratio <= 1.1;
  }
  cache = out;
  return out;
}

Outcome linear_experiment() {
  const auto s = linear_sweep();
  return {s.settled >= 16, fmt("%d/20 seeds reach |x| < 0.05 within 10 steps (need 16)", s.settled)};
}

Outcome lqr_closeness() {
  const auto s = linear_sweep();
  const ScalarLqrProblem prob;
  const double P = solve_dare(prob), K = lqr_gain(P, prob);
  const bool oracle = std::abs(P - 0.0531522) < 1e-4 && std::abs(K - 1.05207) < 1e-4;
  return {s.close >= 10 && oracle,
          fmt("%d/20 seeds with cost ratio in [1, 1.1] (need 10); P = %.7f, K = %.5f", s.close, P, K)};
}

Outcome cartpole_reproduction() {
  int full085 = 0, part085 = 0, full2 = 0, part2_success = 0, part2_left = 0;
  double best_osc = INFINITY;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f085 = cartpole_run(0.85, TrainingMode::Full, seed);
    const auto p085 = cartpole_run(0.85, TrainingMode::Part, seed);
    const auto f2 = cartpole_run(2.0, TrainingMode::Full, seed);
    const auto p2 = cartpole_run(2.0, TrainingMode::Part, seed);
    full085 += f085.success;
    part085 += p085.success;
    full2 += f2.success;
    part2_success += p2.success;
    part2_left += left_track(p2);
    for (const auto* r : {&f085, &f2})
      if (r->success) best_osc = std::min(best_osc, max_abs_theta_deg_last(r->trials.back(), 100));
    part_runs.push_back(p085);
    part_runs.push_back(p2);
  }
  const bool pass = full085 > 0 && part085 > 0 && full2 > 0 && part2_left > 0 && best_osc <= 0.4;
  return {pass, fmt("successes of 10: full@0.85 %d, part@0.85 %d, full@2 %d, part@2 %d; part@2 cart left track "
                    "in %d seeds; tightest final-100-step |theta| of a successful full run %.3f deg",
                    full085, part085, full2, part2_success, part2_left, best_osc)};
}

Outcome gate_checks() {
  const bool reject = !validate_gammas(0.9, {4, 2, 6}).empty() && validate_gammas(0.9, {5, 2, 6}).empty() &&
                      std::abs(4 / 0.81 - 4.93827) < 1e-5;
  // Bounds against the formulas written out with explicit loops.
  Xorshift64Star rng(4242);
  double worst = 0;
  StabilityGate gate(0.9, {}, GatePolicy::Observe, 0.9);
  for (int i = 0; i < 1000; ++i) {
    const int m = 1 + int(rng.next_u64() % 4), hc = 1 + int(rng.next_u64() % 6), ha = 1 + int(rng.next_u64() % 6);
    auto s = make_learner<double>(m, 1, hc, ha, rng.next_u64(), 1.0);
    Vector<double> x(m), phi_c(hc), phi_a(ha), y(m + 1);
    for (int k = 0; k < m; ++k) x(k) = y(k) = rng.uniform(-1, 1);
    y(m) = rng.uniform(-1, 1);
    for (int k = 0; k < hc; ++k) phi_c(k) = rng.uniform(-0.99, 0.99);
    for (int k = 0; k < ha; ++k) phi_a(k) = rng.uniform(-0.99, 0.99);
    const auto rec = gate.gate_step(s.critic, phi_c, s.action, phi_a, x, y, 0.1, 0.1);

    double pc = 0, asq = 0, ysq = 0, pa = 0, xsq = 0, wc_sq = 0, wcd_sq = 0;
    for (int k = 0; k < hc; ++k) {
      pc += phi_c(k) * phi_c(k);
      const double ak = 0.5 * (1 - phi_c(k) * phi_c(k)) * s.critic.w2(0, k);
      asq += ak * ak;
    }
    for (int k = 0; k <= m; ++k) ysq += y(k) * y(k);
    for (int k = 0; k < ha; ++k) pa += phi_a(k) * phi_a(k);
    for (int k = 0; k < m; ++k) xsq += x(k) * x(k);
    double wc = 0;  // w_c2 C, a scalar for n = 1
    for (int k = 0; k < hc; ++k) wc += s.critic.w2(0, k) * 0.5 * (1 - phi_c(k) * phi_c(k)) * s.critic.w1(k, m);
    wc_sq = wc * wc;
    for (int k = 0; k < ha; ++k) {
      const double v = wc * 0.5 * (1 - phi_a(k) * phi_a(k)) * s.action.w2(0, k);
      wcd_sq += v * v;
    }
    const double lc = (2 - 0.9) / (0.81 * 2 * (pc + asq * ysq / 2));
    const double la = (6 - 5) / (6 * wc_sq * pa + 5 * wcd_sq * xsq);
    worst = std::max({worst, std::abs(rec.lc_bound - lc) / lc, std::abs(rec.la_bound - la) / la});
  }
  bool clamped = true;
  std::size_t rows = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    for (auto mode : {TrainingMode::Full, TrainingMode::Part}) {
      const auto run = cartpole_run(0.85, mode, seed, GatePolicy::Clamp);
      clamped = clamped && run.clamp_respected;
      for (const auto& t : run.trials) rows += t.rows.size();
    }
  return {reject && worst < 1e-12 && clamped,
          fmt("gamma1 = 4 rejected, (5, 2, 6) accepted; worst relative bound error %.3g over 1000 inputs; "
              "clamp respected over 10 full cart-pole runs (%zu steps)",
              worst, rows)};
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string("\"") + ADHDP_CLI + "\" " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "adhdp_acceptance_det";
  fs::remove_all(root);
  const fs::path configs = fs::path(ADHDP_SOURCE_DIR) / "configs";
  std::size_t compared = 0, differing = 0;
  for (const auto& [name, extra] : std::vector<std::pair<std::string, std::string>>{
           {"linear.cfg", "--seed 3"}, {"cartpole.cfg", "--seed 1 --mode part --initial_state 2,0,0,0"}}) {
    for (const char* rep : {"a", "b"}) {
      const fs::path out = root / (name + "_" + rep);
      if (run_cli("run --config " + (configs / name).string() + " " + extra + " --output_dir " + out.string()) != 0)
        return {false, "cli run failed for " + name};
    }
    for (const auto& e : fs::directory_iterator(root / (name + "_a"))) {
      const auto ext = e.path().extension();
      if (ext != ".csv" && ext != ".svg") continue;
      ++compared;
      differing += slurp(e.path()) != slurp(root / (name + "_b") / e.path().filename());
    }
  }
  return {compared > 0 && differing == 0, fmt("%zu CSV/SVG files compared, %zu differ", compared, differing)};
}

Outcome part_freezing() {
  std::size_t bad = 0;
  for (const auto& run : part_runs)
    bad += serialize_hidden_weights(run.initial_learner) != serialize_hidden_weights(run.final_learner);
  auto cfg = linear_preset();
  cfg.mode = TrainingMode::Part;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cfg.seed = seed;
    const auto run = run_experiment(cfg);
    bad += serialize_hidden_weights(run.initial_learner) != serialize_hidden_weights(run.final_learner);
  }
  return {!part_runs.empty() && bad == 0, fmt("%zu part-mode runs, %zu with changed hidden weights",
                                               part_runs.size() + 10, bad)};
}

}  // namespace

int main() {
  report(1, "gradient fidelity", gradient_fidelity, 10);
  report(2, "cart-pole dynamics oracle", dynamics_oracle, 10);
  report(3, "linear experiment", linear_experiment, 60);
  report(4, "LQR closeness", lqr_closeness, 60);
  report(5, "cart-pole reproduction", cartpole_reproduction, 600);
  report(6, "stability gate", gate_checks, 600);
  report(7, "determinism", determinism, 600);
  report(8, "AdpPart freezing", part_freezing, 600);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}
