// SPDX-License-Identifier: Apache-2.0
#include "cqec/coeff_reduction.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace cqec {

namespace {
constexpr int kNoPartner = -1;
}

ReducedModel::ReducedModel(const SmeModel& model) : model_(model) {
  model_.validate();
  // Codes violating the theorem hypothesis surface as coupling targets
  // outside G below, with a diagnostic naming the offending operator.
  g_ = build_G(model_.code);
  dim_scale_ = 1 << model_.code.n;

  std::map<PauliOp, int> index;
  for (std::size_t i = 0; i < g_.size(); ++i) index[g_[i]] = static_cast<int>(i);
  auto lookup = [&](const PauliOp& op) {
    const auto it = index.find(op.canonical());
    return it == index.end() ? kNoPartner : it->second;
  };
  identity_index_ = lookup(PauliOp::identity(model_.code.n));
  if (identity_index_ < 0) throw std::logic_error("ReducedModel: identity missing from G");

  const std::size_t sz = g_.size();
  damp_.assign(sz, 0.0);
  for (std::size_t i = 0; i < sz; ++i) {
    for (const auto& c : model_.noise_ops) {
      if (!commutes(c, g_[i])) damp_[i] -= 2.0 * model_.gamma;
    }
    for (const auto& s : model_.measured_ops) {
      if (!commutes(s, g_[i])) damp_[i] -= 2.0 * model_.kappa;
    }
  }

  for (const auto& s : model_.measured_ops) {
    const int self = lookup(s);
    if (self < 0) {
      throw std::invalid_argument("ReducedModel: measured stabilizer " + s.to_string() +
                                  " is outside G; theorem closure violated");
    }
    meas_self_.push_back(self);
    std::vector<Coupling> link(sz, Coupling{kNoPartner, 0.0});
    for (std::size_t i = 0; i < sz; ++i) {
      if (!commutes(s, g_[i])) continue;
      const PauliOp p = pauli_mul(s, g_[i]);
      if (std::abs(p.phase().imag()) > 1e-15) {
        throw std::logic_error("ReducedModel: commuting product should be Hermitian");
      }
      const int partner = lookup(p);
      if (partner < 0) {
        throw std::invalid_argument("ReducedModel: H[" + s.to_string() + "] couples " +
                                    g_[i].to_string() + " to " + p.canonical().to_string() +
                                    " outside G; theorem closure violated");
      }
      link[i] = Coupling{partner, p.phase().real()};
    }
    meas_link_.push_back(std::move(link));
  }

  for (const auto& f : model_.corrections) {
    std::vector<Coupling> link(sz, Coupling{kNoPartner, 0.0});
    for (std::size_t i = 0; i < sz; ++i) {
      if (commutes(f, g_[i])) continue;
      // tr(-i [F, rho] M) = -2i tr(rho M F) for {M, F} = 0.
      const PauliOp p = pauli_mul(g_[i], f);
      const Complex coeff = Complex(0, -2) * p.phase();
      if (std::abs(coeff.imag()) > 1e-15) {
        throw std::logic_error("ReducedModel: anticommuting product should be anti-Hermitian");
      }
      const int partner = lookup(p);
      if (partner < 0) {
        throw std::invalid_argument("ReducedModel: [" + f.to_string() + ", rho] couples " +
                                    g_[i].to_string() + " to " + p.canonical().to_string() +
                                    " outside G; theorem closure violated");
      }
      link[i] = Coupling{partner, coeff.real()};
    }
    corr_link_.push_back(std::move(link));
  }

  fb_ = FeedbackContext(model_.code, model_.feedback);
  for (std::size_t r = 0; r < fb_.n_corrections(); ++r) {
    std::vector<Coupling> terms;
    for (const auto& [op, c] : fb_.input_ops(r)) {
      const int idx = lookup(op);
      if (idx < 0) {
        throw std::invalid_argument("ReducedModel: feedback reads " + op.to_string() +
                                    " outside G; theorem condition 1 violated");
      }
      terms.push_back(Coupling{idx, c});
    }
    input_terms_.push_back(std::move(terms));
  }
}

int ReducedModel::index_of(const PauliOp& op) const {
  const PauliOp canon = op.canonical();
  for (std::size_t i = 0; i < g_.size(); ++i) {
    if (g_[i] == canon) return static_cast<int>(i);
  }
  return kNoPartner;
}

CoefficientVector ReducedModel::coefficients_from_state(const DensityMatrix& rho) const {
  if (rho.n != model_.code.n) {
    throw std::invalid_argument("coefficients_from_state: dimension mismatch");
  }
  CoefficientVector out;
  out.values.resize(g_.size());
  const double norm = 1.0 / static_cast<double>(dim_scale_);
  for (std::size_t i = 0; i < g_.size(); ++i) {
    out.values[i] = PauliAction(g_[i]).expect(rho.mat) * norm;
  }
  return out;
}

CoefficientVector ReducedModel::reduced_step(const CoefficientVector& coeffs, double dt,
                                             const double* dW,
                                             const FeedbackSignals& signals) const {
  if (coeffs.values.size() != g_.size()) {
    throw std::invalid_argument("reduced_step: coefficients not defined on all of G");
  }
  const std::vector<double>& r = coeffs.values;
  std::vector<double> d(r.size(), 0.0);

  for (std::size_t i = 0; i < r.size(); ++i) d[i] += damp_[i] * r[i] * dt;

  const double sqk = std::sqrt(model_.kappa);
  for (std::size_t j = 0; j < meas_link_.size(); ++j) {
    const double expect_s = dim_scale_ * r[static_cast<std::size_t>(meas_self_[j])];
    const double w = sqk * dW[j];
    const auto& link = meas_link_[j];
    for (std::size_t i = 0; i < r.size(); ++i) {
      double h = -2.0 * expect_s * r[i];
      if (link[i].partner != kNoPartner) {
        h += 2.0 * link[i].coeff * r[static_cast<std::size_t>(link[i].partner)];
      }
      d[i] += w * h;
    }
  }

  for (std::size_t rr = 0; rr < corr_link_.size(); ++rr) {
    const double lam = signals.lambdas[rr];
    if (lam == 0.0) continue;
    const auto& link = corr_link_[rr];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (link[i].partner != kNoPartner) {
        d[i] += lam * link[i].coeff * r[static_cast<std::size_t>(link[i].partner)] * dt;
      }
    }
  }

  CoefficientVector out;
  out.values.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.values[i] = r[i] + d[i];
  const double trace = dim_scale_ * out.values[static_cast<std::size_t>(identity_index_)];
  if (!(trace > 0.0)) {
    throw std::runtime_error("reduced_step: non-positive trace, integrator blow-up");
  }
  for (double& v : out.values) v /= trace;
  return out;
}

FeedbackSignals ReducedModel::feedback_from_coefficients(const CoefficientVector& coeffs,
                                                         double lambda_max) const {
  if (coeffs.values.size() != g_.size()) {
    throw std::invalid_argument("feedback_from_coefficients: missing coefficients");
  }
  std::vector<double> inputs(input_terms_.size(), 0.0);
  for (std::size_t r = 0; r < input_terms_.size(); ++r) {
    for (const auto& t : input_terms_[r]) {
      inputs[r] += t.coeff * dim_scale_ * coeffs.values[static_cast<std::size_t>(t.partner)];
    }
  }
  return fb_.from_inputs(std::move(inputs), lambda_max);
}

CoefficientVector coefficients_from_state(const DensityMatrix& rho, const ReducedModel& rm) {
  return rm.coefficients_from_state(rho);
}

long long parameter_count(const StabilizerCode& code, int blocks) {
  const long long per_block = 1ll << (2 * (code.n - code.k));
  return blocks * per_block;
}

}  // namespace cqec
