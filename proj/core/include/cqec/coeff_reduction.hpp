// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cqec/sme.hpp"

namespace cqec {

/// Pauli-basis coefficients R_g = tr(rho g) / 2^n for g in the appendix set G,
/// stored in the G ordering of the owning ReducedModel.
struct CoefficientVector {
  std::vector<double> values;
};

/// The reduced controller of the appendix: evolves only {R_g | g in G}.
/// Coupling tables are enumerated once; every coupling target must land inside
/// G (theorem condition 3) or construction aborts with a diagnostic.
class ReducedModel {
 public:
  explicit ReducedModel(const SmeModel& model);

  const std::vector<PauliOp>& G() const { return g_; }
  int index_of(const PauliOp& op) const;  // -1 when absent
  const SmeModel& model() const { return model_; }

  CoefficientVector coefficients_from_state(const DensityMatrix& rho) const;

  /// One Euler step of the coefficient dynamics under the same increments and
  /// applied control as the dense SME:
  ///   - each dissipator D[c] contributes 0 or -2 r R_M per op (commuting /
  ///     anticommuting with M);
  ///   - each innovation H[s_j] dW_j couples R_M to R_{s_j M} (commuting case)
  ///     and subtracts the nonlinear 2 <s_j> R_M, with <s_j> = 2^n R_{s_j}
  ///     read from inside G;
  ///   - each correction term -i lambda_r [F_r, rho] couples R_M to
  ///     R_{M F_r} with the exact +/-2 phase factor when {F_r, M} = 0.
  /// The vector is renormalized so R_identity = 1/2^n.
  CoefficientVector reduced_step(const CoefficientVector& coeffs, double dt, const double* dW,
                                 const FeedbackSignals& signals) const;

  /// Sign inputs of the configured law reconstructed from coefficients
  /// (<g> = 2^n R_g), thresholded exactly like the dense law.
  FeedbackSignals feedback_from_coefficients(const CoefficientVector& coeffs,
                                             double lambda_max) const;

 private:
  SmeModel model_;
  std::vector<PauliOp> g_;
  int dim_scale_ = 0;  // 2^n
  int identity_index_ = 0;
  // Per element: total dissipative damping rate factor (gamma and kappa parts).
  std::vector<double> damp_;
  struct Coupling {
    int partner;
    double coeff;
  };
  // meas_link_[j][i]: optional commuting partner of element i under H[s_j].
  std::vector<std::vector<Coupling>> meas_link_;
  std::vector<int> meas_self_;  // index of s_j itself inside G
  // corr_link_[r][i]: optional anticommuting partner of element i under F_r.
  std::vector<std::vector<Coupling>> corr_link_;
  // sign-input expansions in G indices, mirroring FeedbackContext
  std::vector<std::vector<Coupling>> input_terms_;
  FeedbackContext fb_;
};

/// Convenience wrappers matching the operation contracts.
CoefficientVector coefficients_from_state(const DensityMatrix& rho, const ReducedModel& rm);

/// (2^(n-k))^2, the appendix parameter count; blocks > 1 scales linearly.
long long parameter_count(const StabilizerCode& code, int blocks = 1);

}  // namespace cqec
