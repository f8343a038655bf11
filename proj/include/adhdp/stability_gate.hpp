#pragma once

// Runtime learning-rate bounds guaranteeing uniform ultimate boundedness of
// the weight estimation errors. The quantities C(t), a(t), D(t) are built from
// the current activations; the bounds are evaluated per inner iteration and
// folded into running minima over a run.

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adhdp/errors.hpp"
#include "adhdp/neural_core.hpp"

namespace adhdp {

struct GammaParams {
  double gamma1 = 5.0;
  double gamma2 = 2.0;
  double gamma3 = 6.0;
};

struct GammaViolation {
  std::string inequality;  // e.g. "gamma1 > 4/alpha^2"
  double margin;           // lhs - rhs, <= 0 when violated
};

enum class GatePolicy { Off, Observe, Clamp };

struct GateNorms {
  double phi_c_sq = 0;
  double phi_a_sq = 0;
  double a_sq = 0;
  double y_sq = 0;
  double x_sq = 0;
  double wc2_c_sq = 0;     // ||w_c2 C||^2
  double wc2_c_dt_sq = 0;  // ||w_c2 C D^T||^2
};

struct GateRecord {
  double lc_bound = std::numeric_limits<double>::infinity();
  double la_bound = std::numeric_limits<double>::infinity();
  bool lc_ok = true;
  bool la_ok = true;
  double lc_effective = 0;
  double la_effective = 0;
  // Under Clamp: every effective rate was <= margin * bound.
  bool within_margin = true;
  GateNorms norms;
  double running_min_lc = std::numeric_limits<double>::infinity();
  double running_min_la = std::numeric_limits<double>::infinity();
};

inline constexpr double kInfiniteBound = std::numeric_limits<double>::infinity();

std::vector<GammaViolation> validate_gammas(double alpha, const GammaParams& gammas);

// C_ij = (1 - phi_c[i]^2)/2 * w_c1[i, m + j]; N_hc x n.
Matrix<double> compute_C(const TwoLayerNet<double>& critic, const Vector<double>& phi_c, Eigen::Index m,
                         Eigen::Index n);
// a_i = (1 - phi_c[i]^2)/2 * w_c2[i].
Vector<double> compute_a(const TwoLayerNet<double>& critic, const Vector<double>& phi_c);
// D_ij = (1 - phi_a[i]^2)/2 * w_a2[j, i]; N_ha x n.
Matrix<double> compute_D(const TwoLayerNet<double>& action, const Vector<double>& phi_a);

/// (gamma2 - alpha) / (alpha^2 gamma2 (||phi_c||^2 + ||a||^2 ||y||^2 / gamma2)).
double critic_rate_bound_from_norms(double phi_c_sq, double a_sq_y_sq, double alpha, double gamma2);
double critic_rate_bound(const Vector<double>& phi_c, const Vector<double>& a, const Vector<double>& y,
                         double alpha, double gamma2);

/// (gamma3 - gamma1) / (gamma3 ||w_c2 C||^2 ||phi_a||^2 + gamma1 ||w_c2 C D^T||^2 ||x||^2).
double action_rate_bound_from_norms(double wc2_c_sq_phi_a_sq, double wc2_c_dt_sq_x_sq, double gamma1,
                                    double gamma3);
double action_rate_bound(const Matrix<double>& w_c2, const Matrix<double>& C, const Matrix<double>& D,
                         const Vector<double>& phi_a, const Vector<double>& x, double gamma1, double gamma3);

/// Folds two evaluations from the same plant step: tightest bounds win.
GateRecord merge_step(const GateRecord& a, const GateRecord& b);

class StabilityGate {
public:
  /// Throws ConstraintViolationError when the gammas are inadmissible for alpha.
  StabilityGate(double alpha, GammaParams gammas, GatePolicy policy, double margin);

  void begin_step() {}

  /// Evaluates both bounds at the current traces and decides the effective
  /// rates. Under Observe the configured rates pass through; under Clamp each
  /// becomes min(rate, margin * bound).
  GateRecord gate_step(const TwoLayerNet<double>& critic, const Vector<double>& phi_c,
                       const TwoLayerNet<double>& action, const Vector<double>& phi_a, const Vector<double>& x,
                       const Vector<double>& y, double lc, double la);

  // Alias used by the learner's inner loops.
  GateRecord evaluate(const TwoLayerNet<double>& critic, const Vector<double>& phi_c,
                      const TwoLayerNet<double>& action, const Vector<double>& phi_a, const Vector<double>& x,
                      const Vector<double>& y, double lc, double la) {
    return gate_step(critic, phi_c, action, phi_a, x, y, lc, la);
  }

  GateRecord end_step(GateRecord rec) const {
    rec.running_min_lc = running_min_lc_;
    rec.running_min_la = running_min_la_;
    return rec;
  }

  double running_min_lc() const { return running_min_lc_; }
  double running_min_la() const { return running_min_la_; }
  GatePolicy policy() const { return policy_; }
  double margin() const { return margin_; }

private:
  double alpha_;
  GammaParams gammas_;
  GatePolicy policy_;
  double margin_;
  double running_min_lc_ = kInfiniteBound;
  double running_min_la_ = kInfiniteBound;
};

}  // namespace adhdp
