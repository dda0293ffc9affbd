// SPDX-License-Identifier: Apache-2.0
#include "cqec/sme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "cqec/coeff_reduction.hpp"

namespace cqec {

void SmeModel::validate() const {
  if (gamma < 0 || kappa < 0 || lambda_max < 0) {
    throw std::invalid_argument("SmeModel: rates must be non-negative");
  }
  auto check = [&](const std::vector<PauliOp>& ops, const char* what) {
    for (const auto& op : ops) {
      if (op.n() != code.n) {
        throw std::invalid_argument(std::string("SmeModel: ") + what + " operator " +
                                    op.to_string() + " has wrong qubit count");
      }
    }
  };
  check(noise_ops, "noise");
  check(measured_ops, "measured");
  check(corrections, "correction");
  if (drift_hamiltonian && drift_hamiltonian->rows() != (1 << code.n)) {
    throw std::invalid_argument("SmeModel: drift Hamiltonian has wrong dimension");
  }
}

SmeModel make_bitflip_model(double gamma, double kappa, double lambda_max,
                            FeedbackOptions feedback) {
  SmeModel m;
  m.code = bitflip_code();
  m.gamma = gamma;
  m.kappa = kappa;
  m.lambda_max = lambda_max;
  m.noise_ops = {PauliOp::from_string("XII"), PauliOp::from_string("IXI"),
                 PauliOp::from_string("IIX")};
  m.measured_ops = m.code.measured_ops();
  m.corrections = m.code.corrections;
  m.feedback = feedback;
  m.validate();
  return m;
}

SmeModel make_spin_up_model(double gamma, double kappa, double lambda_max,
                            FeedbackOptions feedback) {
  SmeModel m;
  m.code = spin_up_code();
  m.gamma = gamma;
  m.kappa = kappa;
  m.lambda_max = lambda_max;
  m.noise_ops = {PauliOp::from_string("X")};
  m.measured_ops = {PauliOp::from_string("Z")};
  m.corrections = {PauliOp::from_string("X")};
  m.feedback = feedback;
  m.validate();
  return m;
}

ControllerMode controller_mode_from_string(const std::string& name) {
  if (name == "true-state") return ControllerMode::true_state;
  if (name == "mixed-state") return ControllerMode::mixed_state;
  if (name == "reduced-coefficients") return ControllerMode::reduced_coefficients;
  throw std::invalid_argument("unknown controller mode: " + name);
}

std::string to_string(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::true_state: return "true-state";
    case ControllerMode::mixed_state: return "mixed-state";
    case ControllerMode::reduced_coefficients: return "reduced-coefficients";
  }
  return "?";
}

StepWorkspace::StepWorkspace(const SmeModel& model)
    : model_(model), fb_(model.code, model.feedback) {
  model_.validate();
  const int dim = 1 << model_.code.n;
  for (const auto& op : model_.noise_ops) noise_.emplace_back(op);
  for (const auto& op : model_.measured_ops) meas_.emplace_back(op);
  for (const auto& op : model_.corrections) corr_.emplace_back(op);
  b1_.resize(dim, dim);
  b2_.resize(dim, dim);
  v_.resize(dim, dim);
  acc_.resize(dim, dim);
  exp_m_.resize(meas_.size());
}

FeedbackSignals StepWorkspace::feedback(const ComplexMatrix& rho, double lambda_max) const {
  return fb_.evaluate(rho, lambda_max);
}

void StepWorkspace::accumulate_common(ComplexMatrix& rho, double dt, const double* dW,
                                      const FeedbackSignals& signals, double* dQ, double* drift,
                                      bool milstein) {
  const int d = static_cast<int>(rho.rows());
  const double gdt = model_.gamma * dt;
  const double kdt = model_.kappa * dt;
  const double sqk = std::sqrt(model_.kappa);
  acc_.setZero();
  Complex* acc = acc_.data();
  const Complex* r = rho.data();

  // gamma D[c] rho dt = gamma dt (c rho c^+ - rho), one fused pass per op.
  if (gdt != 0.0) {
    for (const auto& c : noise_) {
      const std::uint32_t x = c.flip();
      for (int j = 0; j < d; ++j) {
        const int jf = static_cast<int>(static_cast<std::uint32_t>(j) ^ x);
        const Complex pj = std::conj(c.phase(jf));
        const Complex* rf = r + jf * d;
        const Complex* rj = r + j * d;
        Complex* a = acc + j * d;
        for (int i = 0; i < d; ++i) {
          const int fi = static_cast<int>(static_cast<std::uint32_t>(i) ^ x);
          a[i] += gdt * (c.phase(fi) * pj * rf[fi] - rj[i]);
        }
      }
    }
  }

  // Per measured op: kappa D[s] rho dt + sqrt(kappa) H[s] rho dW, fused, with
  // H[s] rho = s rho + (s rho)^+ - 2 <s> rho for Hermitian s, rho.
  for (std::size_t m = 0; m < meas_.size(); ++m) {
    const PauliAction& s = meas_[m];
    const double e = s.expect(rho);
    exp_m_[m] = e;
    const double w = sqk * dW[m];
    s.left_mul(rho, b2_);
    const Complex* b2 = b2_.data();
    Complex* v = v_.data();
    const std::uint32_t x = s.flip();
    for (int j = 0; j < d; ++j) {
      const int jf = static_cast<int>(static_cast<std::uint32_t>(j) ^ x);
      const Complex pj = std::conj(s.phase(jf));
      const Complex* rf = r + jf * d;
      const Complex* rj = r + j * d;
      const Complex* b2col = b2 + j * d;
      Complex* a = acc + j * d;
      Complex* vcol = v + j * d;
      for (int i = 0; i < d; ++i) {
        const int fi = static_cast<int>(static_cast<std::uint32_t>(i) ^ x);
        const Complex h = b2col[i] + std::conj(b2[j + i * d]) - 2.0 * e * rj[i];
        a[i] += kdt * (s.phase(fi) * pj * rf[fi] - rj[i]) + w * h;
        if (milstein) vcol[i] = h;
      }
    }
    if (milstein) {
      // (kappa/2) H'[s](rho)[H[s] rho] (dW^2 - dt), the diagonal Milstein term.
      s.left_mul(v_, b1_);
      const Complex* b1 = b1_.data();
      const double tr_sv = b1_.trace().real();
      const double coef = 0.5 * model_.kappa * (dW[m] * dW[m] - dt);
      for (int j = 0; j < d; ++j) {
        const Complex* rj = r + j * d;
        const Complex* vcol = v + j * d;
        Complex* a = acc + j * d;
        for (int i = 0; i < d; ++i) {
          a[i] += coef * (b1[i + j * d] + std::conj(b1[j + i * d]) - 2.0 * tr_sv * rj[i] -
                          2.0 * e * vcol[i]);
        }
      }
    }
    const double drift_m = 2.0 * model_.kappa * e * dt;
    dQ[m] = drift_m + sqk * dW[m];
    if (drift) drift[m] = drift_m;
  }

  // -i lam [F, rho] dt with rho F = (F rho)^+.
  for (std::size_t rr = 0; rr < corr_.size(); ++rr) {
    const double lam = signals.lambdas[rr];
    if (lam == 0.0) continue;
    corr_[rr].left_mul(rho, b2_);
    const Complex* b2 = b2_.data();
    const Complex factor(0.0, -lam * dt);
    for (int j = 0; j < d; ++j) {
      const Complex* b2col = b2 + j * d;
      Complex* a = acc + j * d;
      for (int i = 0; i < d; ++i) {
        a[i] += factor * (b2col[i] - std::conj(b2[j + i * d]));
      }
    }
  }

  if (model_.drift_hamiltonian) {
    const ComplexMatrix& h = *model_.drift_hamiltonian;
    acc_ += Complex(0, -1) * dt * (h * rho - rho * h);
  }

  rho += acc_;
  hermitize_renormalize_in_place(rho);
}

void StepWorkspace::euler_step(ComplexMatrix& rho, double dt, const double* dW,
                               const FeedbackSignals& signals, double* dQ, double* drift) {
  accumulate_common(rho, dt, dW, signals, dQ, drift, false);
}

void StepWorkspace::milstein_step(ComplexMatrix& rho, double dt, const double* dW,
                                  const FeedbackSignals& signals, double* dQ, double* drift) {
  accumulate_common(rho, dt, dW, signals, dQ, drift, true);
}

namespace {

std::pair<DensityMatrix, std::vector<double>> single_step(const SmeModel& model,
                                                          const DensityMatrix& rho, double dt,
                                                          const std::vector<double>& dW,
                                                          bool milstein) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (dW.size() != static_cast<std::size_t>(model.wiener_dim())) {
    throw std::invalid_argument("step: need one Wiener increment per measured operator");
  }
  for (const double w : dW) {
    if (!std::isfinite(w)) throw std::invalid_argument("step: non-finite Wiener increment");
  }
  StepWorkspace ws(model);
  DensityMatrix out = rho;
  std::vector<double> dQ(dW.size());
  const FeedbackSignals signals = ws.feedback(out.mat, model.lambda_max);
  try {
    if (milstein) {
      ws.milstein_step(out.mat, dt, dW.data(), signals, dQ.data());
    } else {
      ws.euler_step(out.mat, dt, dW.data(), signals, dQ.data());
    }
  } catch (const std::runtime_error& e) {
    throw TrajectoryAbort(e.what(), 0);
  }
  return {std::move(out), std::move(dQ)};
}

}  // namespace

std::pair<DensityMatrix, std::vector<double>> euler_step(const SmeModel& model,
                                                         const DensityMatrix& rho, double dt,
                                                         const std::vector<double>& dW) {
  return single_step(model, rho, dt, dW, false);
}

std::pair<DensityMatrix, std::vector<double>> milstein_step(const SmeModel& model,
                                                            const DensityMatrix& rho, double dt,
                                                            const std::vector<double>& dW) {
  return single_step(model, rho, dt, dW, true);
}

TrajectoryRecord run_trajectory(const SmeModel& model, const DensityMatrix& rho0, double dt,
                                double t_final, NoiseStream& stream,
                                const TrajectoryOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("run_trajectory: dt must be positive");
  if (t_final < 0.0) throw std::invalid_argument("run_trajectory: negative t_final");
  const long long n_steps = std::llround(t_final / dt);
  if (n_steps > options.step_budget) {
    throw std::invalid_argument("run_trajectory: step count exceeds budget");
  }
  if (rho0.n != model.code.n) throw std::invalid_argument("run_trajectory: state/model mismatch");

  StepWorkspace ws(model);
  const int m = model.wiener_dim();
  const std::size_t r_count = model.corrections.size();

  const ComplexMatrix pi_c = codespace_projector(model.code);

  // Pi_corr exists only for a pure codeword start; otherwise F_corr is NaN.
  ComplexMatrix pi_corr;
  bool have_pi_corr = false;
  {
    const double purity = (rho0.mat * rho0.mat).trace().real();
    const double in_code = (pi_c * rho0.mat).trace().real();
    if (std::abs(purity - 1.0) < 1e-9 && std::abs(in_code - 1.0) < 1e-9) {
      pi_corr = rho0.mat;
      for (const auto& f : model.code.corrections) {
        const ComplexMatrix fd = to_dense(f);
        pi_corr += fd * rho0.mat * fd.adjoint();
      }
      have_pi_corr = true;
    }
  }

  ComplexMatrix rho = rho0.mat;
  ComplexMatrix rho_ctrl;
  const bool mixed = options.controller == ControllerMode::mixed_state;
  const bool reduced = options.controller == ControllerMode::reduced_coefficients;
  std::unique_ptr<ReducedModel> rm;
  CoefficientVector coeffs;
  if (mixed) {
    rho_ctrl = options.controller_rho0 ? options.controller_rho0->mat
                                       : mixed_codespace_state(model.code).mat;
  } else if (reduced) {
    rm = std::make_unique<ReducedModel>(model);
    const DensityMatrix init =
        options.controller_rho0 ? *options.controller_rho0 : mixed_codespace_state(model.code);
    coeffs = rm->coefficients_from_state(init);
  }

  TrajectoryRecord rec;
  rec.feedback_lambdas.resize(r_count);
  rec.currents.resize(static_cast<std::size_t>(m));
  if (options.store_steps) {
    rec.step_dW.resize(static_cast<std::size_t>(m));
    rec.step_dQ.resize(static_cast<std::size_t>(m));
    rec.step_drift.resize(static_cast<std::size_t>(m));
    rec.step_lambdas.resize(r_count);
    rec.step_sign_inputs.resize(r_count);
  }

  std::vector<double> dW(static_cast<std::size_t>(m));
  std::vector<double> dQ(static_cast<std::size_t>(m));
  std::vector<double> drift(static_cast<std::size_t>(m));
  std::vector<double> dq_ctrl(static_cast<std::size_t>(m));
  FeedbackSignals signals;

  auto sample = [&](long long step, const std::vector<double>& step_dq,
                    const FeedbackSignals* signals) {
    rec.times.push_back(static_cast<double>(step) * dt);
    rec.f_cw.push_back((rho0.mat.cwiseProduct(rho.transpose())).sum().real());
    rec.f_corr.push_back(have_pi_corr ? (pi_corr.cwiseProduct(rho.transpose())).sum().real()
                                      : std::numeric_limits<double>::quiet_NaN());
    rec.f_codespace.push_back((pi_c.cwiseProduct(rho.transpose())).sum().real());
    for (std::size_t r = 0; r < r_count; ++r) {
      rec.feedback_lambdas[r].push_back(signals ? signals->lambdas[r] : 0.0);
    }
    for (int j = 0; j < m; ++j) {
      rec.currents[static_cast<std::size_t>(j)].push_back(step == 0 ? 0.0
                                                                    : step_dq[static_cast<std::size_t>(j)]);
    }
    if (options.store_states) rec.states.push_back(rho);
    if (options.debug_positivity) {
      rec.min_eigenvalue_seen =
          std::min(rec.min_eigenvalue_seen, min_eigenvalue(DensityMatrix(model.code.n, rho)));
    }
  };

  sample(0, dQ, nullptr);

  const FeedbackContext& fb = ws.feedback_context();
  for (long long step = 1; step <= n_steps; ++step) {
    if (mixed) {
      fb.evaluate_into(rho_ctrl, model.lambda_max, signals);
    } else if (reduced) {
      signals = rm->feedback_from_coefficients(coeffs, model.lambda_max);
    } else {
      fb.evaluate_into(rho, model.lambda_max, signals);
    }

    wiener_increments(stream, dt, dW);

    try {
      if (options.use_milstein) {
        ws.milstein_step(rho, dt, dW.data(), signals, dQ.data(), drift.data());
      } else {
        ws.euler_step(rho, dt, dW.data(), signals, dQ.data(), drift.data());
      }
      if (mixed) {
        if (options.use_milstein) {
          ws.milstein_step(rho_ctrl, dt, dW.data(), signals, dq_ctrl.data());
        } else {
          ws.euler_step(rho_ctrl, dt, dW.data(), signals, dq_ctrl.data());
        }
      } else if (reduced) {
        coeffs = rm->reduced_step(coeffs, dt, dW.data(), signals);
      }
    } catch (const std::runtime_error& e) {
      throw TrajectoryAbort(std::string(e.what()) + " at step " + std::to_string(step), step);
    }

    if (options.store_steps) {
      for (int j = 0; j < m; ++j) {
        rec.step_dW[static_cast<std::size_t>(j)].push_back(dW[static_cast<std::size_t>(j)]);
        rec.step_dQ[static_cast<std::size_t>(j)].push_back(dQ[static_cast<std::size_t>(j)]);
        rec.step_drift[static_cast<std::size_t>(j)].push_back(drift[static_cast<std::size_t>(j)]);
      }
      for (std::size_t r = 0; r < r_count; ++r) {
        rec.step_lambdas[r].push_back(signals.lambdas[r]);
        rec.step_sign_inputs[r].push_back(signals.sign_inputs[r]);
      }
    }

    if (step % options.decimation == 0) sample(step, dQ, &signals);
  }

  rec.final_state = DensityMatrix(model.code.n, rho);
  return rec;
}

TrajectoryRecord run_trajectory(const SmeModel& model, const DensityMatrix& rho0, double dt,
                                double t_final, NoiseStream& stream, int decimation,
                                std::optional<DensityMatrix> controller_rho0) {
  TrajectoryOptions opts;
  opts.decimation = decimation;
  if (controller_rho0) {
    opts.controller = ControllerMode::mixed_state;
    opts.controller_rho0 = std::move(controller_rho0);
  }
  return run_trajectory(model, rho0, dt, t_final, stream, opts);
}

}  // namespace cqec
