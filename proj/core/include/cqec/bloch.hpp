// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cqec/density_matrix.hpp"
#include "cqec/feedback.hpp"

namespace cqec {

/// Bloch-vector coordinates (<X>, <Y>, <Z>) of the one-qubit spin-up model,
/// used as an independent cross-check of the dense engine.
struct BlochState {
  double x = 0.0, y = 0.0, z = 0.0;

  double purity_radius2() const { return x * x + y * y + z * z; }
};

/// One Euler step of the spin-up Bloch equations
///   dX = -2 kappa X dt - 2 sqrt(kappa) X Z dW
///   dY = -2 gamma Y dt - 2 kappa Y dt - 2 sqrt(kappa) Y Z dW
///        - 2 lambda sgn(Y) Z dt
///   dZ = -2 gamma Z dt + 2 sqrt(kappa) (1 - Z^2) dW
///        + 2 lambda sgn(Y) Y dt
/// with the same sgn conventions as the feedback laws.
BlochState bloch_step(const BlochState& s, double gamma, double kappa, double lambda_max,
                      double dt, double dW, const FeedbackOptions& opts = {});

/// (<X>, <Y>, <Z>) of a one-qubit density matrix.
BlochState bloch_from_density(const DensityMatrix& rho);

/// One-qubit density matrix (I + x X + y Y + z Z)/2.
DensityMatrix density_from_bloch(const BlochState& s);

}  // namespace cqec
