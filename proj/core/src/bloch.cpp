// SPDX-License-Identifier: Apache-2.0
#include "cqec/bloch.hpp"

#include <cmath>
#include <stdexcept>

namespace cqec {

BlochState bloch_step(const BlochState& s, double gamma, double kappa, double lambda_max,
                      double dt, double dW, const FeedbackOptions& opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("bloch_step: dt must be positive");
  const double sqk = std::sqrt(kappa);
  const double sgn_y = opts.law == FeedbackLaw::smoothed ? smooth_sign(s.y, opts.epsilon)
                                                         : hard_sign(s.y, opts);
  const double fb = lambda_max * sgn_y;
  BlochState out;
  out.x = s.x - 2.0 * kappa * s.x * dt - 2.0 * sqk * s.x * s.z * dW;
  out.y = s.y - 2.0 * gamma * s.y * dt - 2.0 * kappa * s.y * dt - 2.0 * sqk * s.y * s.z * dW -
          2.0 * fb * s.z * dt;
  out.z = s.z - 2.0 * gamma * s.z * dt + 2.0 * sqk * (1.0 - s.z * s.z) * dW +
          2.0 * fb * s.y * dt;
  return out;
}

BlochState bloch_from_density(const DensityMatrix& rho) {
  if (rho.n != 1) throw std::invalid_argument("bloch_from_density: one-qubit states only");
  return {expectation(rho, PauliOp::from_string("X")),
          expectation(rho, PauliOp::from_string("Y")),
          expectation(rho, PauliOp::from_string("Z"))};
}

DensityMatrix density_from_bloch(const BlochState& s) {
  ComplexMatrix m(2, 2);
  m(0, 0) = Complex(0.5 * (1.0 + s.z), 0.0);
  m(1, 1) = Complex(0.5 * (1.0 - s.z), 0.0);
  m(0, 1) = Complex(0.5 * s.x, -0.5 * s.y);
  m(1, 0) = Complex(0.5 * s.x, 0.5 * s.y);
  return DensityMatrix(1, std::move(m));
}

}  // namespace cqec
