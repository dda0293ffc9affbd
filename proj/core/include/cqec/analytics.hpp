// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cqec/density_matrix.hpp"

namespace cqec {

/// Branch probabilities of the bit-flip master equation solution, in
/// x = exp(-2 gamma t):
///   a = (1 + 3x + 3x^2 + x^3)/8,  b = (1 + x - x^2 - x^3)/8,
///   c = (1 - x - x^2 + x^3)/8,   d = (1 - 3x + 3x^2 - x^3)/8.
/// a + 3b + 3c + d = 1 identically.
struct AbcdCoefficients {
  double a, b, c, d;
};
AbcdCoefficients abcd(double gt);

/// F1 = (1 + e^{-2 gt})/2, F3 = F1^3 (= a), F3bar = (2 + 3 e^{-2 gt} - e^{-6 gt})/4 (= a + 3b).
struct BaselineFidelities {
  double f1, f3, f3bar;
};
BaselineFidelities baseline_fidelities(double gt);

/// The analytic solution rho(t) = a rho0 + b sum X_i rho0 X_i
/// + c sum X_i X_j rho0 X_i X_j + d XXX rho0 XXX.
DensityMatrix analytic_bitflip_state(double gt, const DensityMatrix& rho0);

/// F_cw = tr(rho0 rho).
double codeword_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho);

/// F_corr = tr(rho Pi_corr).
double correctable_overlap(const DensityMatrix& rho, const ComplexMatrix& pi_corr);

/// Closed-form baseline curves on a gt grid.
struct BaselineCurves {
  std::vector<double> gt;
  std::vector<double> a, b, c, d;
  std::vector<double> f1, f3, f3bar;
};
BaselineCurves baseline_curves(const std::vector<double>& gt_grid);

/// Earliest time where f - g changes from <= 0 to > 0 and stays positive for
/// `window` consecutive samples (clipped at the series end); linear
/// interpolation between the bracketing samples.  nullopt if no such crossing.
std::optional<double> crossing_time(const std::vector<double>& times,
                                    const std::vector<double>& f,
                                    const std::vector<double>& g, int window = 10);

}  // namespace cqec
