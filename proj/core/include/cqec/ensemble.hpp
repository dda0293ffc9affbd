// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cqec/sme.hpp"

namespace cqec {

/// One ensemble run.  dt and t_final are in gamma-units (dimensionless
/// gamma*dt and gamma*t); kappa and lambda are absolute rates, so with
/// gamma = 1 they coincide with the scaled strengths kappa/gamma and
/// lambda/gamma.
struct RunConfig {
  std::string code = "bitflip";  // built-in name or path to a code JSON file
  double gamma = 1.0;
  double kappa = 0.0;
  double lambda = 0.0;
  double dt = 1e-5;
  double t_final = 0.3;
  int n_traj = 1000;
  std::uint64_t master_seed = 20260810;
  std::string feedback_law = "optimal_bangbang";
  double epsilon = 0.05;
  double eta = 0.0;
  std::string sign_zero = "zero";  // "zero" | "positive"
  int decimation = 100;
  std::string controller = "true-state";
  std::complex<double> amp0{1.0, 0.0};
  std::complex<double> amp1{0.0, 0.0};
  std::string output_dir = "out";
  std::string name = "run";
  std::vector<double> kappa_over_gamma;   // sweep grid
  std::vector<double> lambda_over_gamma;  // sweep grid
  double probe_time = 0.2;                // gamma-units, F_corr probe (Fig.-5 style)
  int threads = 0;                        // 0 = hardware concurrency
  std::string scheme = "euler";           // "euler" | "milstein"
  int crossing_window = 10;
  long long step_budget = 400'000'000;

  void validate() const;
  SmeModel build_model() const;
  DensityMatrix initial_state() const;
  FeedbackOptions feedback_options() const;
};

std::string config_to_json_text(const RunConfig& config);
/// Accepts either a bare config document or a run manifest ({"config": ...}).
RunConfig config_from_json_text(const std::string& text);
RunConfig config_from_json_file(const std::string& path);

/// Trajectory-averaged series on the decimated gamma*t grid with standard
/// errors, closed-form baselines, and the F_cw/F1 crossing time.
struct EnsembleResult {
  std::vector<double> gt;
  std::vector<double> f_cw_mean, f_cw_sem;
  std::vector<double> f_corr_mean, f_corr_sem;
  std::vector<double> f_codespace_mean, f_codespace_sem;
  std::vector<double> f1, f3, f3bar;
  std::optional<double> tau, tau_sem;  // gamma-units
  double f_corr_at_probe = 0.0, f_corr_at_probe_sem = 0.0;
  double probe_gt = 0.0;
  int n_traj = 0;
  int aborted = 0;
};

/// Thrown when more than 1% of trajectories abort.
struct AbortRateError : std::runtime_error {
  AbortRateError(const std::string& what, int aborted_count)
      : std::runtime_error(what), aborted(aborted_count) {}
  int aborted = 0;
};

/// Runs n_traj independent trajectories (trajectory i draws its noise from
/// (master_seed, i)) in parallel and aggregates in fixed index order, so the
/// result is bit-identical for any worker count.
EnsembleResult run_ensemble(const RunConfig& config);

struct SweepCell {
  double kappa_over_gamma = 0.0;
  double lambda_over_gamma = 0.0;
  std::optional<double> tau, tau_sem;
  double f_corr_probe = 0.0, f_corr_probe_sem = 0.0;
  int aborted = 0;
  std::string status;  // "ok" or the failure reason
};

struct SweepResult {
  std::vector<SweepCell> cells;
  double probe_gt = 0.0;
};

/// One run_ensemble per (kappa/gamma, lambda/gamma) grid point; failed cells
/// are marked and the sweep continues.
SweepResult sweep(const RunConfig& config);

struct OutputPaths {
  std::string csv, manifest, plot_script;
};

/// Writes <name>.csv, <name>.manifest.json and <name>_plot.py under
/// config.output_dir.  Doubles are printed with 17 significant digits so a
/// manifest rerun reproduces the CSV bit for bit.
OutputPaths emit_outputs(const EnsembleResult& result, const RunConfig& config);
OutputPaths emit_sweep_outputs(const SweepResult& result, const RunConfig& config);

}  // namespace cqec
