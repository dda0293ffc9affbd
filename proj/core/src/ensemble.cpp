// SPDX-License-Identifier: Apache-2.0
#include "cqec/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cqec/analytics.hpp"
#include "cqec/version.hpp"

namespace cqec {

namespace {

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct TrajSeries {
  std::vector<double> f_cw, f_corr, f_codespace;
  bool aborted = false;
};

void mean_sem(const std::vector<const std::vector<double>*>& series, std::size_t sample,
              double& mean, double& sem) {
  const std::size_t n = series.size();
  double sum = 0.0;
  for (const auto* s : series) sum += (*s)[sample];
  mean = sum / static_cast<double>(n);
  if (n < 2) {
    sem = 0.0;
    return;
  }
  double ss = 0.0;
  for (const auto* s : series) {
    const double d = (*s)[sample] - mean;
    ss += d * d;
  }
  sem = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

}  // namespace

void RunConfig::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("RunConfig: gamma must be positive");
  if (kappa < 0.0 || lambda < 0.0) throw std::invalid_argument("RunConfig: rates must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("RunConfig: dt must be positive");
  if (t_final < 0.0) throw std::invalid_argument("RunConfig: t_final must be >= 0");
  if (n_traj < 1) throw std::invalid_argument("RunConfig: n_traj must be >= 1");
  if (decimation < 1) throw std::invalid_argument("RunConfig: decimation must be >= 1");
  const long long steps = std::llround(t_final / dt);
  if (steps > step_budget) throw std::invalid_argument("RunConfig: step count exceeds budget");
  if (scheme != "euler" && scheme != "milstein") {
    throw std::invalid_argument("RunConfig: unknown scheme " + scheme);
  }
  feedback_law_from_string(feedback_law);
  controller_mode_from_string(controller);
  if (sign_zero != "zero" && sign_zero != "positive") {
    throw std::invalid_argument("RunConfig: sign_zero must be \"zero\" or \"positive\"");
  }
}

FeedbackOptions RunConfig::feedback_options() const {
  FeedbackOptions fb;
  fb.law = feedback_law_from_string(feedback_law);
  fb.epsilon = epsilon;
  fb.deadband = eta;
  fb.sgn0 = sign_zero == "positive" ? SignZero::positive : SignZero::zero;
  return fb;
}

SmeModel RunConfig::build_model() const {
  validate();
  if (code == "bitflip") {
    return make_bitflip_model(gamma, kappa, lambda, feedback_options());
  }
  if (code == "spin_up") {
    return make_spin_up_model(gamma, kappa, lambda, feedback_options());
  }
  // A custom code document: X noise per qubit, weak measurement of the
  // code's measured set, the code's corrections as feedback terms.
  const StabilizerCode c = code_from_json_file(code);
  SmeModel m;
  m.code = c;
  m.gamma = gamma;
  m.kappa = kappa;
  m.lambda_max = lambda;
  for (int q = 0; q < c.n; ++q) {
    std::string s(static_cast<std::size_t>(c.n), 'I');
    s[static_cast<std::size_t>(q)] = 'X';
    m.noise_ops.push_back(PauliOp::from_string(s));
  }
  m.measured_ops = c.measured_ops();
  m.corrections = c.corrections;
  m.feedback = feedback_options();
  m.validate();
  return m;
}

DensityMatrix RunConfig::initial_state() const {
  if (code == "bitflip") return encode_bitflip(amp0, amp1);
  if (code == "spin_up") {
    Eigen::VectorXcd psi(2);
    psi << amp0, amp1;
    return DensityMatrix::pure(1, psi);
  }
  // Custom codes start from the mixed codespace state unless the caller
  // drives run_trajectory directly.
  return mixed_codespace_state(code_from_json_file(code));
}

std::string config_to_json_text(const RunConfig& c) {
  nlohmann::json j;
  j["code"] = c.code;
  j["gamma"] = c.gamma;
  j["kappa"] = c.kappa;
  j["lambda"] = c.lambda;
  j["dt"] = c.dt;
  j["t_final"] = c.t_final;
  j["n_traj"] = c.n_traj;
  j["master_seed"] = c.master_seed;
  j["feedback_law"] = c.feedback_law;
  j["epsilon"] = c.epsilon;
  j["eta"] = c.eta;
  j["sign_zero"] = c.sign_zero;
  j["decimation"] = c.decimation;
  j["controller"] = c.controller;
  j["amp0"] = {c.amp0.real(), c.amp0.imag()};
  j["amp1"] = {c.amp1.real(), c.amp1.imag()};
  j["output_dir"] = c.output_dir;
  j["name"] = c.name;
  j["kappa_over_gamma"] = c.kappa_over_gamma;
  j["lambda_over_gamma"] = c.lambda_over_gamma;
  j["probe_time"] = c.probe_time;
  j["threads"] = c.threads;
  j["scheme"] = c.scheme;
  j["crossing_window"] = c.crossing_window;
  return j.dump(2);
}

RunConfig config_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("config")) j = j.at("config");  // manifest rerun
  RunConfig c;
  c.code = j.value("code", c.code);
  c.gamma = j.value("gamma", c.gamma);
  c.kappa = j.value("kappa", c.kappa);
  c.lambda = j.value("lambda", c.lambda);
  c.dt = j.value("dt", c.dt);
  c.t_final = j.value("t_final", c.t_final);
  c.n_traj = j.value("n_traj", c.n_traj);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.feedback_law = j.value("feedback_law", c.feedback_law);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.eta = j.value("eta", c.eta);
  c.sign_zero = j.value("sign_zero", c.sign_zero);
  c.decimation = j.value("decimation", c.decimation);
  c.controller = j.value("controller", c.controller);
  if (j.contains("amp0")) c.amp0 = {j["amp0"][0].get<double>(), j["amp0"][1].get<double>()};
  if (j.contains("amp1")) c.amp1 = {j["amp1"][0].get<double>(), j["amp1"][1].get<double>()};
  c.output_dir = j.value("output_dir", c.output_dir);
  c.name = j.value("name", c.name);
  if (j.contains("kappa_over_gamma")) {
    c.kappa_over_gamma = j["kappa_over_gamma"].get<std::vector<double>>();
  }
  if (j.contains("lambda_over_gamma")) {
    c.lambda_over_gamma = j["lambda_over_gamma"].get<std::vector<double>>();
  }
  c.probe_time = j.value("probe_time", c.probe_time);
  c.threads = j.value("threads", c.threads);
  c.scheme = j.value("scheme", c.scheme);
  c.crossing_window = j.value("crossing_window", c.crossing_window);
  c.validate();
  return c;
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

EnsembleResult run_ensemble(const RunConfig& config) {
  config.validate();
  const SmeModel model = config.build_model();
  const DensityMatrix rho0 = config.initial_state();
  const double dt_abs = config.dt / config.gamma;
  const double t_abs = config.t_final / config.gamma;

  TrajectoryOptions topts;
  topts.decimation = config.decimation;
  topts.controller = controller_mode_from_string(config.controller);
  topts.use_milstein = config.scheme == "milstein";
  topts.step_budget = config.step_budget;

  const int n = config.n_traj;
  std::vector<TrajSeries> series(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) break;
      try {
        NoiseStream stream(config.master_seed, static_cast<std::uint64_t>(i));
        TrajectoryRecord rec = run_trajectory(model, rho0, dt_abs, t_abs, stream, topts);
        TrajSeries& out = series[static_cast<std::size_t>(i)];
        out.f_cw = std::move(rec.f_cw);
        out.f_corr = std::move(rec.f_corr);
        out.f_codespace = std::move(rec.f_codespace);
      } catch (const TrajectoryAbort&) {
        series[static_cast<std::size_t>(i)].aborted = true;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failure = e.what();
        failed.store(true);
      }
    }
  };

  const int n_workers = std::min(effective_threads(config.threads), n);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (failed.load()) throw std::runtime_error("run_ensemble: " + failure);

  EnsembleResult result;
  result.n_traj = n;
  for (const auto& s : series) {
    if (s.aborted) ++result.aborted;
  }
  if (100 * result.aborted > n) {
    throw AbortRateError("run_ensemble: abort rate above 1% (" + std::to_string(result.aborted) +
                             " of " + std::to_string(n) + ")",
                         result.aborted);
  }

  const long long steps = std::llround(t_abs / dt_abs);
  const std::size_t n_samples = static_cast<std::size_t>(steps / config.decimation) + 1;
  result.gt.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    result.gt[i] = config.dt * static_cast<double>(i) * static_cast<double>(config.decimation);
  }

  std::vector<const std::vector<double>*> cw, corr, cs;
  for (const auto& s : series) {
    if (s.aborted) continue;
    cw.push_back(&s.f_cw);
    corr.push_back(&s.f_corr);
    cs.push_back(&s.f_codespace);
  }
  result.f_cw_mean.resize(n_samples);
  result.f_cw_sem.resize(n_samples);
  result.f_corr_mean.resize(n_samples);
  result.f_corr_sem.resize(n_samples);
  result.f_codespace_mean.resize(n_samples);
  result.f_codespace_sem.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    mean_sem(cw, i, result.f_cw_mean[i], result.f_cw_sem[i]);
    mean_sem(corr, i, result.f_corr_mean[i], result.f_corr_sem[i]);
    mean_sem(cs, i, result.f_codespace_mean[i], result.f_codespace_sem[i]);
  }

  const BaselineCurves base = baseline_curves(result.gt);
  result.f1 = base.f1;
  result.f3 = base.f3;
  result.f3bar = base.f3bar;

  result.tau = crossing_time(result.gt, result.f_cw_mean, result.f1, config.crossing_window);

  // Crossing-time uncertainty from batch means.
  const int n_batches = std::min(10, static_cast<int>(cw.size()));
  if (n_batches >= 2) {
    std::vector<double> taus;
    for (int b = 0; b < n_batches; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * cw.size() / static_cast<std::size_t>(n_batches);
      const std::size_t hi =
          static_cast<std::size_t>(b + 1) * cw.size() / static_cast<std::size_t>(n_batches);
      if (hi <= lo) continue;
      std::vector<double> batch_mean(n_samples, 0.0);
      for (std::size_t t = lo; t < hi; ++t) {
        for (std::size_t i = 0; i < n_samples; ++i) batch_mean[i] += (*cw[t])[i];
      }
      for (double& v : batch_mean) v /= static_cast<double>(hi - lo);
      const auto tb = crossing_time(result.gt, batch_mean, result.f1, config.crossing_window);
      if (tb) taus.push_back(*tb);
    }
    if (taus.size() >= 2) {
      double m = 0.0;
      for (const double t : taus) m += t;
      m /= static_cast<double>(taus.size());
      double ss = 0.0;
      for (const double t : taus) ss += (t - m) * (t - m);
      result.tau_sem = std::sqrt(ss / static_cast<double>(taus.size() - 1)) /
                       std::sqrt(static_cast<double>(taus.size()));
    }
  }

  // F_corr at the probe time (nearest grid sample).
  std::size_t probe = 0;
  for (std::size_t i = 1; i < n_samples; ++i) {
    if (std::abs(result.gt[i] - config.probe_time) <
        std::abs(result.gt[probe] - config.probe_time)) {
      probe = i;
    }
  }
  result.probe_gt = result.gt.empty() ? 0.0 : result.gt[probe];
  result.f_corr_at_probe = result.f_corr_mean.empty() ? 0.0 : result.f_corr_mean[probe];
  result.f_corr_at_probe_sem = result.f_corr_sem.empty() ? 0.0 : result.f_corr_sem[probe];
  return result;
}

SweepResult sweep(const RunConfig& config) {
  config.validate();
  if (config.kappa_over_gamma.empty() || config.lambda_over_gamma.empty()) {
    throw std::invalid_argument("sweep: both grids must be non-empty");
  }
  SweepResult out;
  out.probe_gt = config.probe_time;
  for (const double kg : config.kappa_over_gamma) {
    for (const double lg : config.lambda_over_gamma) {
      RunConfig cell = config;
      cell.kappa = kg * config.gamma;
      cell.lambda = lg * config.gamma;
      cell.kappa_over_gamma.clear();
      cell.lambda_over_gamma.clear();
      SweepCell sc;
      sc.kappa_over_gamma = kg;
      sc.lambda_over_gamma = lg;
      try {
        const EnsembleResult r = run_ensemble(cell);
        sc.tau = r.tau;
        sc.tau_sem = r.tau_sem;
        sc.f_corr_probe = r.f_corr_at_probe;
        sc.f_corr_probe_sem = r.f_corr_at_probe_sem;
        sc.aborted = r.aborted;
        sc.status = "ok";
      } catch (const std::exception& e) {
        sc.status = e.what();
      }
      out.cells.push_back(std::move(sc));
    }
  }
  return out;
}

namespace {

void write_plot_script(const std::string& path, const std::string& csv_name) {
  std::ofstream out(path);
  out << "#!/usr/bin/env python3\n"
      << "\"\"\"Overlay of ensemble fidelities and closed-form baselines.\"\"\"\n"
      << "import csv\n"
      << "import sys\n\n"
      << "import matplotlib\n"
      << "matplotlib.use(\"Agg\")\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "path = sys.argv[1] if len(sys.argv) > 1 else \"" << csv_name << "\"\n"
      << "cols = {}\n"
      << "with open(path) as fh:\n"
      << "    for row in csv.DictReader(fh):\n"
      << "        for key, value in row.items():\n"
      << "            cols.setdefault(key, []).append(float(value))\n\n"
      << "t = cols[\"t\"]\n"
      << "fig, ax = plt.subplots(figsize=(7, 5))\n"
      << "ax.plot(t, cols[\"f_cw_mean\"], \"-\", lw=1.0, label=r\"$F_{cw}$\")\n"
      << "ax.plot(t, cols[\"f_corr_mean\"], \"-\", lw=2.2, label=r\"$F_{corr}$\")\n"
      << "ax.plot(t, cols[\"F1\"], \"--\", label=r\"$F_1$\")\n"
      << "ax.plot(t, cols[\"F3\"], \"-.\", label=r\"$F_3$\")\n"
      << "ax.plot(t, cols[\"F3bar\"], \":\", label=r\"$\\bar F_3$\")\n"
      << "ax.set_xlabel(r\"$\\gamma t$\")\n"
      << "ax.set_ylabel(\"fidelity\")\n"
      << "ax.legend(loc=\"lower left\")\n"
      << "ax.set_ylim(min(min(cols[\"f_cw_mean\"]), min(cols[\"F3\"])) - 0.02, 1.005)\n"
      << "out = path.rsplit(\".\", 1)[0] + \".png\"\n"
      << "fig.savefig(out, dpi=160, bbox_inches=\"tight\")\n"
      << "print(out)\n";
}

nlohmann::json results_json(const EnsembleResult& r) {
  nlohmann::json res;
  res["aborted"] = r.aborted;
  res["n_traj"] = r.n_traj;
  if (r.tau) res["tau"] = *r.tau;
  if (r.tau_sem) res["tau_sem"] = *r.tau_sem;
  res["probe_gt"] = r.probe_gt;
  res["f_corr_at_probe"] = r.f_corr_at_probe;
  res["f_corr_at_probe_sem"] = r.f_corr_at_probe_sem;
  return res;
}

}  // namespace

OutputPaths emit_outputs(const EnsembleResult& result, const RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  OutputPaths paths;
  paths.csv = (fs::path(config.output_dir) / (config.name + ".csv")).string();
  paths.manifest = (fs::path(config.output_dir) / (config.name + ".manifest.json")).string();
  paths.plot_script = (fs::path(config.output_dir) / (config.name + "_plot.py")).string();

  {
    std::ofstream csv(paths.csv);
    if (!csv) throw std::runtime_error("emit_outputs: cannot write " + paths.csv);
    csv << "t,f_cw_mean,f_cw_sem,f_corr_mean,f_corr_sem,f_codespace_mean,F1,F3,F3bar\n";
    for (std::size_t i = 0; i < result.gt.size(); ++i) {
      csv << format_double(result.gt[i]) << ',' << format_double(result.f_cw_mean[i]) << ','
          << format_double(result.f_cw_sem[i]) << ',' << format_double(result.f_corr_mean[i])
          << ',' << format_double(result.f_corr_sem[i]) << ','
          << format_double(result.f_codespace_mean[i]) << ',' << format_double(result.f1[i])
          << ',' << format_double(result.f3[i]) << ',' << format_double(result.f3bar[i]) << '\n';
    }
  }
  {
    nlohmann::json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["config"] = nlohmann::json::parse(config_to_json_text(config));
    manifest["results"] = results_json(result);
    manifest["results"]["csv"] = paths.csv;
    std::ofstream mf(paths.manifest);
    if (!mf) throw std::runtime_error("emit_outputs: cannot write " + paths.manifest);
    mf << manifest.dump(2) << '\n';
  }
  write_plot_script(paths.plot_script, paths.csv);
  return paths;
}

OutputPaths emit_sweep_outputs(const SweepResult& result, const RunConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.output_dir);
  OutputPaths paths;
  paths.csv = (fs::path(config.output_dir) / (config.name + "_sweep.csv")).string();
  paths.manifest = (fs::path(config.output_dir) / (config.name + "_sweep.manifest.json")).string();
  paths.plot_script = (fs::path(config.output_dir) / (config.name + "_sweep_plot.py")).string();

  {
    std::ofstream csv(paths.csv);
    if (!csv) throw std::runtime_error("emit_sweep_outputs: cannot write " + paths.csv);
    csv << "kappa_over_gamma,lambda_over_gamma,tau,tau_sem,f_corr_probe,f_corr_probe_sem,"
           "aborted,status\n";
    for (const auto& c : result.cells) {
      csv << format_double(c.kappa_over_gamma) << ',' << format_double(c.lambda_over_gamma) << ','
          << (c.tau ? format_double(*c.tau) : "nan") << ','
          << (c.tau_sem ? format_double(*c.tau_sem) : "nan") << ','
          << format_double(c.f_corr_probe) << ',' << format_double(c.f_corr_probe_sem) << ','
          << c.aborted << ',' << c.status << '\n';
    }
  }
  {
    nlohmann::json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["config"] = nlohmann::json::parse(config_to_json_text(config));
    manifest["results"]["probe_gt"] = result.probe_gt;
    manifest["results"]["csv"] = paths.csv;
    std::ofstream mf(paths.manifest);
    mf << manifest.dump(2) << '\n';
  }
  {
    std::ofstream out(paths.plot_script);
    out << "#!/usr/bin/env python3\n"
        << "\"\"\"tau and F_corr probe surfaces from a sweep CSV.\"\"\"\n"
        << "import csv\n"
        << "import sys\n\n"
        << "import matplotlib\n"
        << "matplotlib.use(\"Agg\")\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "path = sys.argv[1] if len(sys.argv) > 1 else \"" << paths.csv << "\"\n"
        << "rows = [row for row in csv.DictReader(open(path))]\n"
        << "lambdas = sorted({float(r[\"lambda_over_gamma\"]) for r in rows})\n"
        << "fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))\n"
        << "for lg in lambdas:\n"
        << "    sel = [r for r in rows if float(r[\"lambda_over_gamma\"]) == lg]\n"
        << "    sel.sort(key=lambda r: float(r[\"kappa_over_gamma\"]))\n"
        << "    ks = [float(r[\"kappa_over_gamma\"]) for r in sel]\n"
        << "    axes[0].plot(ks, [float(r[\"tau\"]) for r in sel], \"o-\", label=f\"lambda/gamma={lg:g}\")\n"
        << "    axes[1].plot(ks, [float(r[\"f_corr_probe\"]) for r in sel], \"o-\", label=f\"lambda/gamma={lg:g}\")\n"
        << "axes[0].set_xlabel(\"kappa/gamma\"); axes[0].set_ylabel(\"tau (gamma t)\"); axes[0].set_xscale(\"log\", base=2)\n"
        << "axes[1].set_xlabel(\"kappa/gamma\"); axes[1].set_ylabel(\"F_corr at probe\"); axes[1].set_xscale(\"log\", base=2)\n"
        << "axes[0].legend(); axes[1].legend()\n"
        << "out = path.rsplit(\".\", 1)[0] + \".png\"\n"
        << "fig.savefig(out, dpi=160, bbox_inches=\"tight\")\n"
        << "print(out)\n";
  }
  return paths;
}

}  // namespace cqec
