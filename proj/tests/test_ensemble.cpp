// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqec/analytics.hpp"
#include "cqec/ensemble.hpp"

using namespace cqec;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.kappa = 16.0;
  c.lambda = 32.0;
  c.feedback_law = "optimal_bangbang";
  c.sign_zero = "positive";
  c.dt = 5e-5;
  c.t_final = 0.02;
  c.decimation = 20;
  c.n_traj = 4;
  c.master_seed = 1234;
  c.output_dir = (std::filesystem::temp_directory_path() / "cqec_test_out").string();
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config JSON round-trip, manifest shape included") {
  RunConfig c = small_config();
  c.kappa_over_gamma = {16, 64};
  c.lambda_over_gamma = {80, 128};
  c.controller = "mixed-state";
  c.eta = 0.01;
  const RunConfig d = config_from_json_text(config_to_json_text(c));
  CHECK(d.kappa == c.kappa);
  CHECK(d.lambda == c.lambda);
  CHECK(d.n_traj == c.n_traj);
  CHECK(d.master_seed == c.master_seed);
  CHECK(d.feedback_law == c.feedback_law);
  CHECK(d.sign_zero == c.sign_zero);
  CHECK(d.controller == c.controller);
  CHECK(d.kappa_over_gamma == c.kappa_over_gamma);
  CHECK(d.lambda_over_gamma == c.lambda_over_gamma);
  CHECK(d.eta == c.eta);

  const RunConfig m =
      config_from_json_text("{\"config\": " + config_to_json_text(c) + "}");
  CHECK(m.kappa == c.kappa);
}

TEST_CASE("config validation rejects malformed settings") {
  RunConfig c = small_config();
  c.n_traj = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.feedback_law = "bogus";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.sign_zero = "maybe";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.scheme = "rk4";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("ensembles are bit-reproducible and schedule independent") {
  RunConfig c = small_config();
  c.threads = 1;
  const EnsembleResult a = run_ensemble(c);
  c.threads = 2;
  const EnsembleResult b = run_ensemble(c);
  c.threads = 4;
  const EnsembleResult d = run_ensemble(c);

  REQUIRE(a.f_cw_mean.size() == b.f_cw_mean.size());
  for (std::size_t i = 0; i < a.f_cw_mean.size(); ++i) {
    CHECK(a.f_cw_mean[i] == b.f_cw_mean[i]);
    CHECK(a.f_cw_mean[i] == d.f_cw_mean[i]);
    CHECK(a.f_corr_mean[i] == b.f_corr_mean[i]);
    CHECK(a.f_cw_sem[i] == b.f_cw_sem[i]);
  }
}

TEST_CASE("deterministic limit reproduces the closed-form a(t)") {
  RunConfig c;
  c.kappa = 0.0;
  c.lambda = 0.0;
  c.feedback_law = "none";
  c.n_traj = 1;
  c.dt = 1e-4;
  c.t_final = 0.5;
  c.decimation = 100;
  const EnsembleResult r = run_ensemble(c);
  for (std::size_t i = 0; i < r.gt.size(); ++i) {
    CHECK(std::abs(r.f_cw_mean[i] - abcd(r.gt[i]).a) <= 10.0 * c.dt);
  }
}

TEST_CASE("CSV shape, baseline columns and manifest rerun") {
  RunConfig c = small_config();
  c.name = "roundtrip";
  const EnsembleResult r = run_ensemble(c);
  const OutputPaths paths = emit_outputs(r, c);

  const std::string csv = slurp(paths.csv);
  const long long rows = std::count(csv.begin(), csv.end(), '\n');
  const long long steps = std::llround(c.t_final / c.dt);
  CHECK(rows == steps / c.decimation + 1 + 1);  // header + samples

  CHECK(csv.rfind("t,f_cw_mean,f_cw_sem,f_corr_mean,f_corr_sem,f_codespace_mean,F1,F3,F3bar",
                  0) == 0);

  // Baseline columns must match the closed forms at every row.
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    std::stringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 9);
    const auto base = baseline_fidelities(vals[0]);
    CHECK(std::abs(vals[6] - base.f1) < 1e-12);
    CHECK(std::abs(vals[7] - base.f3) < 1e-12);
    CHECK(std::abs(vals[8] - base.f3bar) < 1e-12);
  }

  // Rerunning from the manifest reproduces the CSV byte for byte.
  RunConfig from_manifest = config_from_json_file(paths.manifest);
  from_manifest.name = "roundtrip2";
  const OutputPaths paths2 = emit_outputs(run_ensemble(from_manifest), from_manifest);
  CHECK(slurp(paths2.csv) == csv);
}

TEST_CASE("SEM shrinks like 1/sqrt(n) when doubling the ensemble") {
  RunConfig c;
  c.kappa = 16.0;
  c.lambda = 32.0;
  c.feedback_law = "optimal_bangbang";
  c.sign_zero = "positive";
  c.dt = 2e-5;
  c.t_final = 0.25;
  c.decimation = 500;
  c.probe_time = 0.2;
  c.master_seed = 777;

  c.n_traj = 40;
  const EnsembleResult small = run_ensemble(c);
  c.n_traj = 80;
  const EnsembleResult big = run_ensemble(c);

  std::size_t probe = 0;
  for (std::size_t i = 0; i < small.gt.size(); ++i) {
    if (std::abs(small.gt[i] - 0.2) < 1e-9) probe = i;
  }
  const double ratio = small.f_cw_sem[probe] / big.f_cw_sem[probe];
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.2);
}

TEST_CASE("abort storms fail the run with the dedicated error") {
  RunConfig c;
  c.kappa = 50.0;
  c.lambda = 0.0;
  c.feedback_law = "none";
  c.dt = 5.0;       // hopeless step size: trajectories blow up to NaN
  c.t_final = 500.0;
  c.decimation = 10;
  c.n_traj = 3;
  CHECK_THROWS_AS(run_ensemble(c), AbortRateError);
}

TEST_CASE("the milstein scheme is reachable through the config") {
  RunConfig c = small_config();
  c.scheme = "milstein";
  const EnsembleResult m = run_ensemble(c);
  c.scheme = "euler";
  const EnsembleResult e = run_ensemble(c);
  REQUIRE(m.f_cw_mean.size() == e.f_cw_mean.size());
  // Same noise, different integrator: the correction term must actually bite.
  double diff = 0.0;
  for (std::size_t i = 0; i < m.f_cw_mean.size(); ++i) {
    diff = std::max(diff, std::abs(m.f_cw_mean[i] - e.f_cw_mean[i]));
  }
  CHECK(diff > 0.0);
  CHECK(diff < 1e-2);
}

TEST_CASE("single-cell sweep matches run_ensemble") {
  RunConfig c = small_config();
  c.kappa_over_gamma = {64.0};
  c.lambda_over_gamma = {128.0};
  const SweepResult s = sweep(c);
  REQUIRE(s.cells.size() == 1);
  CHECK(s.cells[0].status == "ok");

  RunConfig direct = small_config();
  direct.kappa = 64.0;
  direct.lambda = 128.0;
  const EnsembleResult r = run_ensemble(direct);
  CHECK(s.cells[0].f_corr_probe == r.f_corr_at_probe);
}

TEST_CASE("sweep requires non-empty grids and marks failing cells") {
  RunConfig c = small_config();
  CHECK_THROWS_AS(sweep(c), std::invalid_argument);

  c.kappa_over_gamma = {50.0};
  c.lambda_over_gamma = {0.0};
  c.feedback_law = "none";
  c.dt = 5.0;
  c.t_final = 500.0;
  c.n_traj = 3;
  const SweepResult s = sweep(c);
  REQUIRE(s.cells.size() == 1);
  CHECK(s.cells[0].status != "ok");
}
