// SPDX-License-Identifier: Apache-2.0
#include "cqec/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqec {

FeedbackLaw feedback_law_from_string(const std::string& name) {
  if (name == "none") return FeedbackLaw::none;
  if (name == "heuristic") return FeedbackLaw::heuristic;
  if (name == "optimal_bangbang") return FeedbackLaw::optimal_bangbang;
  if (name == "general") return FeedbackLaw::general;
  if (name == "smoothed") return FeedbackLaw::smoothed;
  throw std::invalid_argument("unknown feedback law: " + name);
}

std::string to_string(FeedbackLaw law) {
  switch (law) {
    case FeedbackLaw::none: return "none";
    case FeedbackLaw::heuristic: return "heuristic";
    case FeedbackLaw::optimal_bangbang: return "optimal_bangbang";
    case FeedbackLaw::general: return "general";
    case FeedbackLaw::smoothed: return "smoothed";
  }
  return "?";
}

double hard_sign(double x, const FeedbackOptions& opts) {
  if (opts.deadband > 0.0 && std::abs(x) < opts.deadband) return 0.0;
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return opts.sgn0 == SignZero::positive ? 1.0 : 0.0;
}

double smooth_sign(double x, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("smooth_sign: epsilon must be positive");
  return std::tanh(x / epsilon);
}

namespace {

bool is_bitflip_shape(const StabilizerCode& code) {
  const StabilizerCode ref = bitflip_code();
  return code.n == 3 && code.generators == ref.generators &&
         code.corrections == ref.corrections;
}

// Pauli expansion of -i [Pi_C, F_r]; real coefficients for Hermitian F_r.
std::vector<std::pair<PauliOp, double>> commutator_terms(const StabilizerCode& code,
                                                         const PauliOp& correction) {
  std::vector<std::pair<PauliOp, double>> terms;
  const double norm = 1.0 / static_cast<double>(1 << (code.n - code.k));
  for (const auto& s : code.stabilizer_group()) {
    if (commutes(s, correction)) continue;
    // [s, F] = 2 s F for anticommuting Hermitian Paulis.
    const PauliOp p = pauli_mul(s, correction);
    const Complex coeff = Complex(0, -2) * p.phase() * norm;
    if (std::abs(coeff.imag()) > 1e-15) {
      throw std::logic_error("commutator_terms: expansion is not Hermitian");
    }
    terms.emplace_back(p.canonical(), coeff.real());
  }
  return terms;
}

double thresholded(double input, double lambda_max, const FeedbackOptions& opts) {
  if (opts.law == FeedbackLaw::smoothed) {
    if (opts.deadband > 0.0 && std::abs(input) < opts.deadband) return 0.0;
    return lambda_max * smooth_sign(input, opts.epsilon);
  }
  return lambda_max * hard_sign(input, opts);
}

}  // namespace

FeedbackContext::FeedbackContext(const StabilizerCode& code, FeedbackOptions opts)
    : code_(code), opts_(opts) {
  bitflip_pairs_ = (opts.law == FeedbackLaw::optimal_bangbang || opts.law == FeedbackLaw::smoothed) &&
                   is_bitflip_shape(code);
  for (const auto& f : code.corrections) {
    auto terms = commutator_terms(code, f);
    if (bitflip_pairs_) {
      // Rescale to the protocol's bare pair sums <YZI + YIZ> etc.
      for (auto& t : terms) t.second *= 2.0;
    }
    input_terms_.push_back(terms);
    std::vector<std::pair<PauliAction, double>> acts;
    acts.reserve(terms.size());
    for (const auto& [op, c] : terms) acts.emplace_back(PauliAction(op), c);
    input_actions_.push_back(std::move(acts));
  }
  for (const auto& m : code.measured_ops()) measured_actions_.emplace_back(m);
}

double FeedbackContext::sign_input(std::size_t r, const ComplexMatrix& rho) const {
  double acc = 0.0;
  for (const auto& [act, c] : input_actions_[r]) acc += c * act.expect(rho);
  return acc;
}

FeedbackSignals FeedbackContext::from_inputs(std::vector<double> inputs,
                                             double lambda_max) const {
  FeedbackSignals out;
  out.sign_inputs = std::move(inputs);
  out.lambdas.reserve(out.sign_inputs.size());
  for (const double x : out.sign_inputs) out.lambdas.push_back(thresholded(x, lambda_max, opts_));
  return out;
}

FeedbackSignals FeedbackContext::evaluate(const ComplexMatrix& rho, double lambda_max) const {
  FeedbackSignals out;
  evaluate_into(rho, lambda_max, out);
  return out;
}

void FeedbackContext::evaluate_into(const ComplexMatrix& rho, double lambda_max,
                                    FeedbackSignals& out) const {
  const std::size_t r_count = input_actions_.size();
  out.lambdas.resize(r_count);
  out.sign_inputs.resize(r_count);
  if (opts_.law == FeedbackLaw::none) {
    std::fill(out.lambdas.begin(), out.lambdas.end(), 0.0);
    std::fill(out.sign_inputs.begin(), out.sign_inputs.end(), 0.0);
    return;
  }
  if (opts_.law == FeedbackLaw::heuristic) {
    if (measured_actions_.size() != 3 || r_count != 3) {
      throw std::invalid_argument("heuristic law requires the bit-flip configuration");
    }
    const double m0 = measured_actions_[0].expect(rho);  // <ZZI>
    const double m1 = measured_actions_[1].expect(rho);  // <IZZ>
    const double m2 = measured_actions_[2].expect(rho);  // <ZIZ>
    out.sign_inputs[0] = (1 - m0) * (1 + m1) * (1 - m2);
    out.sign_inputs[1] = (1 - m0) * (1 - m1) * (1 + m2);
    out.sign_inputs[2] = (1 + m0) * (1 - m1) * (1 - m2);
    for (std::size_t r = 0; r < 3; ++r) {
      out.lambdas[r] = std::clamp(lambda_max / 8.0 * out.sign_inputs[r], 0.0, lambda_max);
    }
    return;
  }
  for (std::size_t r = 0; r < r_count; ++r) {
    out.sign_inputs[r] = sign_input(r, rho);
    out.lambdas[r] = thresholded(out.sign_inputs[r], lambda_max, opts_);
  }
}

FeedbackSignals heuristic_lambdas(const DensityMatrix& rho_c, double lambda_max) {
  static const FeedbackContext ctx(bitflip_code(), FeedbackOptions{FeedbackLaw::heuristic});
  return ctx.evaluate(rho_c.mat, lambda_max);
}

FeedbackSignals optimal_bitflip_lambdas(const DensityMatrix& rho_c, double lambda_max,
                                        const FeedbackOptions& opts) {
  FeedbackOptions o = opts;
  o.law = opts.law == FeedbackLaw::smoothed ? FeedbackLaw::smoothed : FeedbackLaw::optimal_bangbang;
  const FeedbackContext ctx(bitflip_code(), o);
  return ctx.evaluate(rho_c.mat, lambda_max);
}

FeedbackSignals general_lambdas(const StabilizerCode& code, const DensityMatrix& rho_c,
                                double lambda_max, const FeedbackOptions& opts) {
  if (code.corrections.empty()) {
    throw std::invalid_argument("general_lambdas: code has no corrections");
  }
  FeedbackOptions o = opts;
  o.law = opts.law == FeedbackLaw::smoothed ? FeedbackLaw::smoothed : FeedbackLaw::general;
  const FeedbackContext ctx(code, o);
  return ctx.evaluate(rho_c.mat, lambda_max);
}

double feedback_overlap_rate(const StabilizerCode& code, const DensityMatrix& rho_c,
                             const std::vector<double>& lambdas) {
  if (lambdas.size() != code.corrections.size()) {
    throw std::invalid_argument("feedback_overlap_rate: one lambda per correction required");
  }
  double rate = 0.0;
  for (std::size_t r = 0; r < lambdas.size(); ++r) {
    double input = 0.0;
    for (const auto& [op, c] : commutator_terms(code, code.corrections[r])) {
      input += c * PauliAction(op).expect(rho_c.mat);
    }
    rate += lambdas[r] * input;
  }
  return rate;
}

double feedback_overlap_rate(const DensityMatrix& rho_c, const FeedbackSignals& signals) {
  return feedback_overlap_rate(bitflip_code(), rho_c, signals.lambdas);
}

}  // namespace cqec
