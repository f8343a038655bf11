#include "adhdp/stability_gate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adhdp {

std::vector<GammaViolation> validate_gammas(double alpha, const GammaParams& g) {
  std::vector<GammaViolation> out;
  const double g1_floor = 4.0 / (alpha * alpha);
  if (!(g.gamma1 > g1_floor)) out.push_back({"gamma1 > 4/alpha^2", g.gamma1 - g1_floor});
  if (!(g.gamma2 > alpha)) out.push_back({"gamma2 > alpha", g.gamma2 - alpha});
  if (!(g.gamma3 > g.gamma1)) out.push_back({"gamma3 > gamma1", g.gamma3 - g.gamma1});
  return out;
}

Matrix<double> compute_C(const TwoLayerNet<double>& critic, const Vector<double>& phi_c, Eigen::Index m,
                         Eigen::Index n) {
  if (phi_c.size() != critic.hidden_dim() || critic.in_dim() != m + n)
    throw ContractError("compute_C: shape mismatch");
  return transfer_slope(phi_c).asDiagonal() * critic.w1.middleCols(m, n);
}

Vector<double> compute_a(const TwoLayerNet<double>& critic, const Vector<double>& phi_c) {
  if (phi_c.size() != critic.hidden_dim() || critic.out_dim() != 1) throw ContractError("compute_a: shape mismatch");
  return transfer_slope(phi_c).cwiseProduct(critic.w2.row(0).transpose());
}

Matrix<double> compute_D(const TwoLayerNet<double>& action, const Vector<double>& phi_a) {
  if (phi_a.size() != action.hidden_dim()) throw ContractError("compute_D: shape mismatch");
  return transfer_slope(phi_a).asDiagonal() * action.w2.transpose();
}

double critic_rate_bound_from_norms(double phi_c_sq, double a_sq_y_sq, double alpha, double gamma2) {
  if (!(gamma2 > alpha)) {
    std::ostringstream msg;
    msg << "critic_rate_bound: requires gamma2 > alpha (gamma2=" << gamma2 << ", alpha=" << alpha << ")";
    throw ConstraintViolationError(msg.str());
  }
  const double denom = alpha * alpha * gamma2 * (phi_c_sq + a_sq_y_sq / gamma2);
  if (denom == 0.0) return kInfiniteBound;
  return (gamma2 - alpha) / denom;
}

double critic_rate_bound(const Vector<double>& phi_c, const Vector<double>& a, const Vector<double>& y,
                         double alpha, double gamma2) {
  return critic_rate_bound_from_norms(phi_c.squaredNorm(), a.squaredNorm() * y.squaredNorm(), alpha, gamma2);
}

double action_rate_bound_from_norms(double wc2_c_sq_phi_a_sq, double wc2_c_dt_sq_x_sq, double gamma1,
                                    double gamma3) {
  if (!(gamma3 > gamma1)) {
    std::ostringstream msg;
    msg << "action_rate_bound: requires gamma3 > gamma1 (gamma3=" << gamma3 << ", gamma1=" << gamma1 << ")";
    throw ConstraintViolationError(msg.str());
  }
  const double denom = gamma3 * wc2_c_sq_phi_a_sq + gamma1 * wc2_c_dt_sq_x_sq;
  if (denom == 0.0) return kInfiniteBound;
  return (gamma3 - gamma1) / denom;
}

double action_rate_bound(const Matrix<double>& w_c2, const Matrix<double>& C, const Matrix<double>& D,
                         const Vector<double>& phi_a, const Vector<double>& x, double gamma1, double gamma3) {
  // With a single critic output w_c2 is a row, so (w_c2)^T C and w_c2 C share
  // the same Euclidean norm.
  const Matrix<double> wc = w_c2 * C;
  const Matrix<double> wcd = wc * D.transpose();
  return action_rate_bound_from_norms(wc.squaredNorm() * phi_a.squaredNorm(), wcd.squaredNorm() * x.squaredNorm(),
                                      gamma1, gamma3);
}

GateRecord merge_step(const GateRecord& a, const GateRecord& b) {
  GateRecord out = b;
  out.lc_bound = std::min(a.lc_bound, b.lc_bound);
  out.la_bound = std::min(a.la_bound, b.la_bound);
  out.lc_ok = a.lc_ok && b.lc_ok;
  out.la_ok = a.la_ok && b.la_ok;
  out.lc_effective = std::min(a.lc_effective, b.lc_effective);
  out.la_effective = std::min(a.la_effective, b.la_effective);
  out.within_margin = a.within_margin && b.within_margin;
  return out;
}

StabilityGate::StabilityGate(double alpha, GammaParams gammas, GatePolicy policy, double margin)
    : alpha_(alpha), gammas_(gammas), policy_(policy), margin_(margin) {
  if (!(margin > 0.0 && margin <= 1.0)) throw ConfigError("gate margin must lie in (0, 1]");
  const auto violations = validate_gammas(alpha, gammas);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "inadmissible gammas:";
    for (const auto& v : violations) msg << " [" << v.inequality << ", margin " << v.margin << "]";
    throw ConstraintViolationError(msg.str());
  }
}

GateRecord StabilityGate::gate_step(const TwoLayerNet<double>& critic, const Vector<double>& phi_c,
                                    const TwoLayerNet<double>& action, const Vector<double>& phi_a,
                                    const Vector<double>& x, const Vector<double>& y, double lc, double la) {
  const Eigen::Index m = action.in_dim();
  const Eigen::Index n = action.out_dim();
  const Matrix<double> C = compute_C(critic, phi_c, m, n);
  const Vector<double> a = compute_a(critic, phi_c);
  const Matrix<double> D = compute_D(action, phi_a);
  const Matrix<double> wc = critic.w2 * C;
  const Matrix<double> wcd = wc * D.transpose();

  GateRecord rec;
  rec.norms = {phi_c.squaredNorm(), phi_a.squaredNorm(), a.squaredNorm(), y.squaredNorm(),
               x.squaredNorm(),     wc.squaredNorm(),    wcd.squaredNorm()};
  rec.lc_bound = critic_rate_bound_from_norms(rec.norms.phi_c_sq, rec.norms.a_sq * rec.norms.y_sq, alpha_,
                                              gammas_.gamma2);
  rec.la_bound = action_rate_bound_from_norms(rec.norms.wc2_c_sq * rec.norms.phi_a_sq,
                                              rec.norms.wc2_c_dt_sq * rec.norms.x_sq, gammas_.gamma1,
                                              gammas_.gamma3);
  rec.lc_ok = lc < rec.lc_bound;
  rec.la_ok = la < rec.la_bound;
  if (policy_ == GatePolicy::Clamp) {
    rec.lc_effective = std::min(lc, margin_ * rec.lc_bound);
    rec.la_effective = std::min(la, margin_ * rec.la_bound);
    rec.within_margin = rec.lc_effective <= margin_ * rec.lc_bound && rec.la_effective <= margin_ * rec.la_bound;
  } else {
    rec.lc_effective = lc;
    rec.la_effective = la;
  }
  running_min_lc_ = std::min(running_min_lc_, rec.lc_bound);
  running_min_la_ = std::min(running_min_la_, rec.la_bound);
  rec.running_min_lc = running_min_lc_;
  rec.running_min_la = running_min_la_;
  return rec;
}

}  // namespace adhdp
