// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "cqec/density_matrix.hpp"
#include "cqec/pauli.hpp"
#include "cqec/pauli_action.hpp"
#include "cqec/stabilizer_code.hpp"

namespace cqec {

enum class FeedbackLaw { none, heuristic, optimal_bangbang, general, smoothed };

/// Convention for sgn(0).  `zero` keeps the law inactive at the degenerate
/// point (three-valued sign); `positive` picks +1 there, the arbitrary choice
/// that lets bang-bang control bootstrap from states whose sign inputs vanish
/// identically.
enum class SignZero { zero, positive };

struct FeedbackOptions {
  FeedbackLaw law = FeedbackLaw::none;
  double epsilon = 0.05;   // tanh width, smoothed law only
  double deadband = 0.0;   // |input| < deadband -> output 0
  SignZero sgn0 = SignZero::zero;
};

FeedbackLaw feedback_law_from_string(const std::string& name);
std::string to_string(FeedbackLaw law);

/// Control parameters for one step: lambdas[r] multiplies correction F_r, and
/// sign_inputs[r] is the raw expectation the law thresholded.
struct FeedbackSignals {
  std::vector<double> lambdas;
  std::vector<double> sign_inputs;
};

/// sgn with the configured zero convention and dead-band.
double hard_sign(double x, const FeedbackOptions& opts);

/// tanh(x / epsilon); limits to sgn as epsilon -> 0.
double smooth_sign(double x, double epsilon);

/// Precomputed sign-input observables for a code's feedback laws.  For each
/// correction F_r holds the Pauli expansion of -i [Pi_C, F_r]; the bit-flip
/// specialization rescales to the bare stabilizer-pair sums of the protocol.
class FeedbackContext {
 public:
  FeedbackContext() = default;
  FeedbackContext(const StabilizerCode& code, FeedbackOptions opts);

  const FeedbackOptions& options() const { return opts_; }
  const StabilizerCode& code() const { return code_; }
  std::size_t n_corrections() const { return input_terms_.size(); }

  /// Signals for an arbitrary state under the configured law.
  FeedbackSignals evaluate(const ComplexMatrix& rho, double lambda_max) const;
  /// Same, reusing the caller's buffers (hot path).
  void evaluate_into(const ComplexMatrix& rho, double lambda_max, FeedbackSignals& out) const;

  /// Signals from sign inputs that were computed elsewhere (reduced path).
  FeedbackSignals from_inputs(std::vector<double> inputs, double lambda_max) const;

  /// Sign input r for a state: the configured law's raw expectation argument.
  double sign_input(std::size_t r, const ComplexMatrix& rho) const;

  /// The term expansion (ops and coefficients) of sign input r.
  const std::vector<std::pair<PauliOp, double>>& input_ops(std::size_t r) const {
    return input_terms_[r];
  }

 private:
  StabilizerCode code_;
  FeedbackOptions opts_;
  bool bitflip_pairs_ = false;
  std::vector<std::vector<std::pair<PauliOp, double>>> input_terms_;
  std::vector<std::vector<std::pair<PauliAction, double>>> input_actions_;
  std::vector<PauliAction> measured_actions_;  // heuristic law inputs
};

/// Eq.-29-style law: lambda_1 = (lambda/8)(1-<ZZI>)(1+<IZZ>)(1-<ZIZ>) and
/// cyclic.  Acts trivially on the codespace; outputs lie in [0, lambda_max].
FeedbackSignals heuristic_lambdas(const DensityMatrix& rho_c, double lambda_max);

/// Optimized bang-bang law for the bit-flip code:
/// lambda_1 = lambda sgn<YZI + YIZ>, lambda_2 = lambda sgn<ZYI + IYZ>,
/// lambda_3 = lambda sgn<ZIY + IZY>.
FeedbackSignals optimal_bitflip_lambdas(const DensityMatrix& rho_c, double lambda_max,
                                        const FeedbackOptions& opts = {FeedbackLaw::optimal_bangbang});

/// General-code law lambda_r = lambda sgn<-i[Pi_C, F_r]>.
FeedbackSignals general_lambdas(const StabilizerCode& code, const DensityMatrix& rho_c,
                                double lambda_max,
                                const FeedbackOptions& opts = {FeedbackLaw::general});

/// Instantaneous d/dt tr(rho Pi_C) attributable to the feedback Hamiltonian,
/// sum_r lambda_r <-i[Pi_C, F_r]>.  Bit-flip overload uses the bit-flip code.
double feedback_overlap_rate(const StabilizerCode& code, const DensityMatrix& rho_c,
                             const std::vector<double>& lambdas);
double feedback_overlap_rate(const DensityMatrix& rho_c, const FeedbackSignals& signals);

}  // namespace cqec
