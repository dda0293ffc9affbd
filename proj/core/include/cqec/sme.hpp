// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cqec/density_matrix.hpp"
#include "cqec/feedback.hpp"
#include "cqec/noise.hpp"
#include "cqec/pauli_action.hpp"
#include "cqec/stabilizer_code.hpp"

namespace cqec {

/// The full drift/diffusion description of one protocol instance:
///   d rho = gamma sum_j D[noise_j] rho dt + kappa sum_i D[meas_i] rho dt
///         + sqrt(kappa) sum_i H[meas_i] rho dW_i - i [F, rho] dt,
/// with F = sum_r lambda_r F_r from the configured feedback law and
///   dQ_i = 2 kappa <meas_i> dt + sqrt(kappa) dW_i.
struct SmeModel {
  StabilizerCode code;
  double gamma = 0.0;
  double kappa = 0.0;
  double lambda_max = 0.0;
  std::vector<PauliOp> noise_ops;
  std::vector<PauliOp> measured_ops;
  std::vector<PauliOp> corrections;
  FeedbackOptions feedback;
  std::optional<ComplexMatrix> drift_hamiltonian;  // physical H, default zero

  int n_qubits() const { return code.n; }
  int wiener_dim() const { return static_cast<int>(measured_ops.size()); }
  void validate() const;
};

/// Bit-flip protocol instance: X noise on each qubit, weak measurement of
/// ZZI, IZZ, ZIZ, corrections XII, IXI, IIX.
SmeModel make_bitflip_model(double gamma, double kappa, double lambda_max,
                            FeedbackOptions feedback);

/// One-qubit spin-up instance: noise X, measurement Z, correction X.
SmeModel make_spin_up_model(double gamma, double kappa, double lambda_max,
                            FeedbackOptions feedback);

/// Thrown when a trajectory's state collapses (non-positive trace).
struct TrajectoryAbort : std::runtime_error {
  TrajectoryAbort(const std::string& what, long long at_step)
      : std::runtime_error(what), step(at_step) {}
  long long step = 0;
};

/// Trajectory-averaged observables on the decimated grid, plus optional
/// full-rate step traces for invariant checks.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> f_cw;          // tr(rho0 rho)
  std::vector<double> f_corr;        // tr(Pi_corr rho); NaN when Pi_corr undefined
  std::vector<double> f_codespace;   // tr(Pi_C rho)
  std::vector<std::vector<double>> feedback_lambdas;  // [R][sample]
  std::vector<std::vector<double>> currents;          // [m][sample]; dQ of the step landing there
  std::vector<ComplexMatrix> states;                  // decimated, opt-in
  // Per-step traces (opt-in): dW, dQ, measurement drift 2 kappa <M_i> dt,
  // applied lambdas and raw sign inputs.
  std::vector<std::vector<double>> step_dW, step_dQ, step_drift;
  std::vector<std::vector<double>> step_lambdas, step_sign_inputs;
  // Smallest eigenvalue seen at any sample, when positivity monitoring is on.
  double min_eigenvalue_seen = 1.0;
  DensityMatrix final_state;
};

enum class ControllerMode { true_state, mixed_state, reduced_coefficients };
ControllerMode controller_mode_from_string(const std::string& name);
std::string to_string(ControllerMode mode);

struct TrajectoryOptions {
  int decimation = 100;
  bool store_states = false;
  bool store_steps = false;
  bool use_milstein = false;
  // Monitors the smallest eigenvalue at every sample (never enforced by
  // projection; that would change the dynamics).
  bool debug_positivity = false;
  ControllerMode controller = ControllerMode::true_state;
  std::optional<DensityMatrix> controller_rho0;  // default rho_e for non-true modes
  long long step_budget = 400'000'000;
};

/// Precomputed step kernel for one model.  All Pauli applications are exact
/// index/phase rewrites of the dense products, so stepping is O(4^n) per term.
class StepWorkspace {
 public:
  explicit StepWorkspace(const SmeModel& model);

  const SmeModel& model() const { return model_; }
  const FeedbackContext& feedback_context() const { return fb_; }

  /// The configured law evaluated on a (controller) state.
  FeedbackSignals feedback(const ComplexMatrix& rho, double lambda_max) const;

  /// One explicit Euler-Maruyama step in place.  dW has wiener_dim entries;
  /// dQ (and optionally the measurement drift term) are written per channel.
  void euler_step(ComplexMatrix& rho, double dt, const double* dW,
                  const FeedbackSignals& signals, double* dQ, double* drift = nullptr);

  /// Euler step plus the diagonal Milstein correction
  /// (kappa/2) H'[M_i](rho)[H[M_i] rho] (dW_i^2 - dt) per measurement channel.
  void milstein_step(ComplexMatrix& rho, double dt, const double* dW,
                     const FeedbackSignals& signals, double* dQ, double* drift = nullptr);

 private:
  void accumulate_common(ComplexMatrix& rho, double dt, const double* dW,
                         const FeedbackSignals& signals, double* dQ, double* drift,
                         bool milstein);

  SmeModel model_;
  FeedbackContext fb_;
  std::vector<PauliAction> noise_, meas_, corr_;
  ComplexMatrix b1_, b2_, v_, acc_;
  std::vector<double> exp_m_;
};

/// Spec-level single-step entry points (fresh workspace, feedback read from
/// rho itself).
std::pair<DensityMatrix, std::vector<double>> euler_step(const SmeModel& model,
                                                         const DensityMatrix& rho, double dt,
                                                         const std::vector<double>& dW);
std::pair<DensityMatrix, std::vector<double>> milstein_step(const SmeModel& model,
                                                            const DensityMatrix& rho, double dt,
                                                            const std::vector<double>& dW);

/// Integrates one trajectory from rho0.  With a mixed-state controller the
/// controller's estimate is co-integrated from controller_rho0 under the same
/// dW sequence and the feedback is computed from the controller state; with
/// the reduced controller the estimate is evolved as appendix Pauli-basis
/// coefficients on the set G.
TrajectoryRecord run_trajectory(const SmeModel& model, const DensityMatrix& rho0, double dt,
                                double t_final, NoiseStream& stream,
                                const TrajectoryOptions& options);
TrajectoryRecord run_trajectory(const SmeModel& model, const DensityMatrix& rho0, double dt,
                                double t_final, NoiseStream& stream, int decimation,
                                std::optional<DensityMatrix> controller_rho0 = std::nullopt);

}  // namespace cqec
