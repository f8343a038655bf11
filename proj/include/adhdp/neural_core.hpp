#pragma once

// One-hidden-layer tanh MLP without biases, as used for both the critic and
// the action network. Everything here is pure and templated on the scalar so
// the finite-difference oracles in the tests can run in extended precision.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "adhdp/errors.hpp"
#include "adhdp/random.hpp"

namespace adhdp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct TwoLayerNet {
  Matrix<Scalar> w1;  // hidden x in
  Matrix<Scalar> w2;  // out x hidden

  Eigen::Index in_dim() const { return w1.cols(); }
  Eigen::Index hidden_dim() const { return w1.rows(); }
  Eigen::Index out_dim() const { return w2.rows(); }

  bool consistent() const { return w1.rows() == w2.cols() && w1.size() > 0 && w2.size() > 0; }
  bool all_finite() const { return w1.allFinite() && w2.allFinite(); }

  template <typename Other>
  TwoLayerNet<Other> cast() const {
    return {w1.template cast<Other>(), w2.template cast<Other>()};
  }

  bool operator==(const TwoLayerNet& other) const = default;
};

template <typename Scalar>
struct ForwardTrace {
  Vector<Scalar> sigma;   // hidden pre-activations
  Vector<Scalar> phi;     // hidden outputs
  Vector<Scalar> output;
};

/// Largest representable magnitude strictly below one; the transfer function
/// saturates here so hidden outputs stay inside the open interval (-1, 1).
template <typename Scalar>
constexpr Scalar saturation_level() {
  return Scalar(1) - std::numeric_limits<Scalar>::epsilon() / Scalar(2);
}

/// phi(s) = (1 - e^{-s}) / (1 + e^{-s}), i.e. tanh(s / 2).
template <typename Scalar>
Scalar tanh_transfer(Scalar sigma) {
  using std::exp;
  using std::isfinite;
  if (!isfinite(sigma)) throw InvalidInputError("tanh_transfer: non-finite input");
  constexpr Scalar sat = saturation_level<Scalar>();
  if (sigma > Scalar(40)) return sat;
  if (sigma < Scalar(-40)) return -sat;
  const Scalar e = exp(-sigma);
  const Scalar phi = (Scalar(1) - e) / (Scalar(1) + e);
  if (phi > sat) return sat;
  if (phi < -sat) return -sat;
  return phi;
}

/// Derivative of the transfer function expressed through its output:
/// d phi / d sigma = (1 - phi^2) / 2.
template <typename Derived>
auto transfer_slope(const Eigen::MatrixBase<Derived>& phi) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(0.5) * (Scalar(1) - phi.array().square())).matrix();
}

template <typename Scalar>
ForwardTrace<Scalar> forward(const TwoLayerNet<Scalar>& net, const Vector<Scalar>& input) {
  if (!net.consistent())
    throw ContractError("forward: inconsistent layer shapes");
  if (input.size() != net.in_dim())
    throw ContractError("forward: input length " + std::to_string(input.size()) +
                        " does not match in_dim " + std::to_string(net.in_dim()));
  ForwardTrace<Scalar> trace;
  trace.sigma = net.w1 * input;
  trace.phi = trace.sigma.unaryExpr([](Scalar s) { return tanh_transfer(s); });
  trace.output = net.w2 * trace.phi;
  return trace;
}

/// Weights drawn independently and uniformly on [-scale, scale], w1 row-major
/// first, then w2 row-major, from a single seeded stream.
template <typename Scalar = double>
TwoLayerNet<Scalar> init_weights(Eigen::Index in_dim, Eigen::Index hidden_dim, Eigen::Index out_dim,
                                 std::uint64_t seed, double scale = 0.5) {
  if (in_dim <= 0 || hidden_dim <= 0 || out_dim <= 0)
    throw ContractError("init_weights: dimensions must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw InvalidInputError("init_weights: scale must be positive and finite");
  Xorshift64Star rng(seed);
  TwoLayerNet<Scalar> net{Matrix<Scalar>(hidden_dim, in_dim), Matrix<Scalar>(out_dim, hidden_dim)};
  for (Eigen::Index i = 0; i < net.w1.rows(); ++i)
    for (Eigen::Index j = 0; j < net.w1.cols(); ++j) net.w1(i, j) = Scalar(rng.uniform(-scale, scale));
  for (Eigen::Index i = 0; i < net.w2.rows(); ++i)
    for (Eigen::Index j = 0; j < net.w2.cols(); ++j) net.w2(i, j) = Scalar(rng.uniform(-scale, scale));
  return net;
}

}  // namespace adhdp
