// SPDX-License-Identifier: Apache-2.0
//
// cqec: continuous quantum error correction simulator CLI.
//
//   cqec run      one trajectory ensemble, CSV + manifest + plot script
//   cqec sweep    grid of (kappa/gamma, lambda/gamma) ensembles
//   cqec validate built-in invariant suite (exit 2 on failure)
//   cqec bloch    one-qubit Bloch trajectory CSV (Fig.-1-style series)
//
// Exit codes: 0 success, 2 validation/config failure, 3 abort-rate failure.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "cqec/analytics.hpp"
#include "cqec/bloch.hpp"
#include "cqec/coeff_reduction.hpp"
#include "cqec/ensemble.hpp"
#include "cqec/version.hpp"

namespace {

using namespace cqec;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitAbortRate = 3;

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc - 1; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" || arg == "-c") return argv[i + 1];
  }
  return {};
}

std::string g_config_path_echo;  // --config is pre-scanned in main; this just registers the flag

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& preset) {
  cmd->add_option("-c,--config", g_config_path_echo, "JSON config or run manifest");
  cmd->add_option("--preset", preset, "parameter preset: desk (default) or paper");
  cmd->add_option("--code", cfg.code, "built-in code name (bitflip, spin_up) or JSON path");
  cmd->add_option("--gamma", cfg.gamma, "decoherence rate");
  cmd->add_option("--kappa", cfg.kappa, "measurement strength");
  cmd->add_option("--lambda", cfg.lambda, "maximum feedback strength");
  cmd->add_option("--dt", cfg.dt, "time step in gamma units");
  cmd->add_option("--t-final", cfg.t_final, "final time in gamma units");
  cmd->add_option("--n-traj", cfg.n_traj, "trajectory count");
  cmd->add_option("--master-seed", cfg.master_seed, "ensemble master seed");
  cmd->add_option("--feedback-law", cfg.feedback_law,
                  "none | heuristic | optimal_bangbang | general | smoothed");
  cmd->add_option("--epsilon", cfg.epsilon, "tanh width for the smoothed law");
  cmd->add_option("--eta", cfg.eta, "sign dead-band");
  cmd->add_option("--sign-zero", cfg.sign_zero, "sgn(0) convention: zero | positive");
  cmd->add_option("--decimation", cfg.decimation, "record every k-th step");
  cmd->add_option("--controller", cfg.controller,
                  "true-state | mixed-state | reduced-coefficients");
  cmd->add_option("--output-dir", cfg.output_dir, "output directory");
  cmd->add_option("--name", cfg.name, "output file stem");
  cmd->add_option("--probe-time", cfg.probe_time, "F_corr probe time in gamma units");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  cmd->add_option("--scheme", cfg.scheme, "euler | milstein");
  cmd->add_option("--crossing-window", cfg.crossing_window,
                  "confirmation samples for crossing detection");
}

void apply_preset(RunConfig& cfg, const std::string& preset) {
  if (preset.empty() || preset == "desk") return;
  if (preset == "paper") {
    cfg.dt = 1e-6;
    cfg.n_traj = 10000;
    return;
  }
  throw CLI::ValidationError("--preset", "unknown preset: " + preset);
}

int cmd_run(const RunConfig& cfg) {
  const EnsembleResult result = run_ensemble(cfg);
  const OutputPaths paths = emit_outputs(result, cfg);
  std::printf("wrote %s\n", paths.csv.c_str());
  std::printf("wrote %s\n", paths.manifest.c_str());
  std::printf("wrote %s\n", paths.plot_script.c_str());
  std::printf("n_traj=%d aborted=%d\n", result.n_traj, result.aborted);
  if (result.tau) {
    std::printf("tau (F_cw crosses F1) = %.6f gamma t\n", *result.tau);
  } else {
    std::printf("tau (F_cw crosses F1): no crossing in window\n");
  }
  std::printf("F_corr(%.3f) = %.6f +/- %.6f\n", result.probe_gt, result.f_corr_at_probe,
              result.f_corr_at_probe_sem);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
  const SweepResult result = sweep(cfg);
  const OutputPaths paths = emit_sweep_outputs(result, cfg);
  std::printf("wrote %s\n", paths.csv.c_str());
  for (const auto& cell : result.cells) {
    std::printf("kappa/gamma=%-8g lambda/gamma=%-8g tau=%-10s F_corr(%.2f)=%.6f [%s]\n",
                cell.kappa_over_gamma, cell.lambda_over_gamma,
                cell.tau ? std::to_string(*cell.tau).c_str() : "none", result.probe_gt,
                cell.f_corr_probe, cell.status.c_str());
  }
  return kExitOk;
}

int cmd_bloch(double gamma, double kappa, double lambda, double dt, double t_final,
              std::uint64_t seed, double y0, double z0, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "cannot write %s\n", out_path.c_str());
    return kExitValidation;
  }
  FeedbackOptions fb{FeedbackLaw::general};
  NoiseStream stream(seed, 0);
  BlochState s{0.0, y0, z0};
  out << "t,x,y,z\n";
  const long long steps = std::llround(t_final / dt);
  out << "0,0," << y0 << ',' << z0 << '\n';
  for (long long i = 1; i <= steps; ++i) {
    const double w = std::sqrt(dt / gamma) * stream.gaussian();
    s = bloch_step(s, gamma, kappa, lambda, dt / gamma, w, fb);
    out << dt * static_cast<double>(i) << ',' << s.x << ',' << s.y << ',' << s.z << '\n';
  }
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

bool check(const char* what, bool ok, int& failures) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what);
  if (!ok) ++failures;
  return ok;
}

int cmd_validate() {
  int failures = 0;

  // Exact Pauli algebra against the dense realization.
  {
    const auto elements = all_phaseless(3);
    std::vector<ComplexMatrix> dense;
    for (const auto& p : elements) dense.push_back(to_dense(p));
    bool ok = true;
    for (std::size_t i = 0; i < elements.size() && ok; ++i) {
      for (std::size_t j = 0; j < elements.size() && ok; ++j) {
        const ComplexMatrix ref = dense[i] * dense[j];
        ok = (to_dense(pauli_mul(elements[i], elements[j])) - ref).cwiseAbs().maxCoeff() == 0.0;
        const ComplexMatrix comm = dense[i] * dense[j] - dense[j] * dense[i];
        ok = ok && (commutes(elements[i], elements[j]) == (comm.cwiseAbs().maxCoeff() == 0.0));
      }
    }
    check("pauli products and commutation match the dense oracle (4096 pairs)", ok, failures);
  }

  // Codespace projector of the bit-flip code.
  {
    const ComplexMatrix pi = codespace_projector(bitflip_code());
    bool ok = std::abs(pi.trace().real() - 2.0) < 1e-12;
    ok = ok && (pi * pi - pi).cwiseAbs().maxCoeff() < 1e-12;
    check("bit-flip codespace projector is idempotent with trace 2", ok, failures);
  }

  // The appendix set G and feedback membership.
  {
    const auto g = build_G(bitflip_code());
    bool ok = g.size() == 28;
    for (const char* s : {"YZI", "YIZ", "ZYI", "IYZ", "ZIY", "IZY"}) {
      ok = ok && std::find(g.begin(), g.end(), PauliOp::from_string(s)) != g.end();
    }
    check("set G has the frozen size 28 and carries the feedback operators", ok, failures);
  }

  // Feedback laws on reference states.
  {
    const DensityMatrix zero = encode_bitflip(1, 0);
    const FeedbackSignals h = heuristic_lambdas(zero, 1.0);
    bool ok = h.lambdas[0] == 0.0 && h.lambdas[1] == 0.0 && h.lambdas[2] == 0.0;
    const FeedbackSignals o = optimal_bitflip_lambdas(zero, 1.0);
    ok = ok && o.lambdas[0] == 0.0;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 20 && ok; ++i) {
      ComplexMatrix a(8, 8);
      for (int c = 0; c < 8; ++c) {
        for (int r = 0; r < 8; ++r) a(r, c) = Complex(gauss(rng), gauss(rng));
      }
      ComplexMatrix m = a * a.adjoint();
      m /= m.trace().real();
      const DensityMatrix rho(3, std::move(m));
      const FeedbackSignals opt = optimal_bitflip_lambdas(rho, 1.0);
      const FeedbackSignals gen = general_lambdas(bitflip_code(), rho, 1.0);
      for (int r = 0; r < 3; ++r) {
        ok = ok && opt.lambdas[static_cast<std::size_t>(r)] ==
                       gen.lambdas[static_cast<std::size_t>(r)];
      }
    }
    check("feedback laws: codespace triviality and general/bit-flip agreement", ok, failures);
  }

  // Closed-form identities.
  {
    bool ok = true;
    for (int i = 0; i <= 200; ++i) {
      const double gt = 0.01 * i;
      const auto co = abcd(gt);
      const auto f = baseline_fidelities(gt);
      ok = ok && std::abs(f.f3 - co.a) < 1e-14;
      ok = ok && std::abs(f.f3bar - (co.a + 3 * co.b)) < 1e-14;
    }
    ok = ok && std::abs(baseline_fidelities(0.2).f3bar - 0.9274414815486789) < 1e-13;
    check("baseline identities F3 = a and F3bar = a + 3b on a 200-point grid", ok, failures);
  }

  // Bit-exact trajectory determinism.
  {
    FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
    fb.sgn0 = SignZero::positive;
    const SmeModel model = make_bitflip_model(1.0, 64.0, 128.0, fb);
    NoiseStream s1(2718, 5), s2(2718, 5);
    const TrajectoryRecord a =
        run_trajectory(model, encode_bitflip(1, 0), 1e-5, 2e-3, s1, 10);
    const TrajectoryRecord b =
        run_trajectory(model, encode_bitflip(1, 0), 1e-5, 2e-3, s2, 10);
    bool ok = (a.final_state.mat - b.final_state.mat).cwiseAbs().maxCoeff() == 0.0;
    for (std::size_t i = 0; i < a.f_cw.size(); ++i) ok = ok && a.f_cw[i] == b.f_cw[i];
    check("trajectories are bit-identical for equal (seed, index)", ok, failures);
  }

  // Reduced controller against the dense state.
  {
    FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
    fb.sgn0 = SignZero::positive;
    const SmeModel model = make_bitflip_model(1.0, 64.0, 128.0, fb);
    const ReducedModel rm(model);
    StepWorkspace ws(model);
    ComplexMatrix rho = encode_bitflip(1, 0).mat;
    CoefficientVector coeffs = rm.coefficients_from_state(encode_bitflip(1, 0));
    NoiseStream stream(31415, 0);
    std::vector<double> dw(3);
    double dq[3];
    double worst = 0.0;
    for (int step = 0; step < 200; ++step) {
      const FeedbackSignals dense_sig = ws.feedback(rho, model.lambda_max);
      const FeedbackSignals red_sig = rm.feedback_from_coefficients(coeffs, model.lambda_max);
      wiener_increments(stream, 1e-5, dw);
      ws.euler_step(rho, 1e-5, dw.data(), dense_sig, dq);
      coeffs = rm.reduced_step(coeffs, 1e-5, dw.data(), red_sig);
      const CoefficientVector ref = rm.coefficients_from_state(DensityMatrix(3, rho));
      for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
        worst = std::max(worst, std::abs(coeffs.values[i] - ref.values[i]));
      }
    }
    check("reduced coefficients track the dense state (200 shared-noise steps)", worst < 1e-8,
          failures);
  }

  std::printf("%s\n", failures == 0 ? "validate: all checks passed" : "validate: FAILURES");
  return failures == 0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous quantum error correction simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig cfg;
  std::string preset;
  try {
    const std::string config_path = find_config_path(argc, argv);
    if (!config_path.empty()) cfg = config_from_json_file(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitValidation;
  }

  CLI::App* run = app.add_subcommand("run", "run one ensemble and emit outputs");
  add_common_options(run, cfg, preset);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a (kappa, lambda) grid");
  add_common_options(sweep_cmd, cfg, preset);
  sweep_cmd->add_option("--kappa-over-gamma", cfg.kappa_over_gamma, "kappa/gamma grid values");
  sweep_cmd->add_option("--lambda-over-gamma", cfg.lambda_over_gamma, "lambda/gamma grid values");

  CLI::App* validate_cmd = app.add_subcommand("validate", "run the invariant suite");
  (void)validate_cmd;

  CLI::App* bloch_cmd = app.add_subcommand("bloch", "dump a one-qubit Bloch trajectory CSV");
  double b_gamma = 1.0, b_kappa = 4.0, b_lambda = 8.0, b_dt = 1e-4, b_tfinal = 1.0;
  double b_y0 = 0.0, b_z0 = 1.0;
  std::uint64_t b_seed = 1;
  std::string b_out = "bloch.csv";
  bloch_cmd->add_option("--gamma", b_gamma);
  bloch_cmd->add_option("--kappa", b_kappa);
  bloch_cmd->add_option("--lambda", b_lambda);
  bloch_cmd->add_option("--dt", b_dt, "time step in gamma units");
  bloch_cmd->add_option("--t-final", b_tfinal, "final time in gamma units");
  bloch_cmd->add_option("--seed", b_seed);
  bloch_cmd->add_option("--y0", b_y0);
  bloch_cmd->add_option("--z0", b_z0);
  bloch_cmd->add_option("-o,--out", b_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      apply_preset(cfg, preset);
      cfg.validate();
      return cmd_run(cfg);
    }
    if (sweep_cmd->parsed()) {
      apply_preset(cfg, preset);
      cfg.validate();
      return cmd_sweep(cfg);
    }
    if (validate_cmd->parsed()) {
      return cmd_validate();
    }
    if (bloch_cmd->parsed()) {
      return cmd_bloch(b_gamma, b_kappa, b_lambda, b_dt, b_tfinal, b_seed, b_y0, b_z0, b_out);
    }
  } catch (const AbortRateError& e) {
    std::fprintf(stderr, "abort-rate failure: %s\n", e.what());
    return kExitAbortRate;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
