// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "cqec/bloch.hpp"
#include "cqec/feedback.hpp"
#include "cqec/sme.hpp"
#include "test_helpers.hpp"

using namespace cqec;
using test::dense_oracle;

namespace {

DensityMatrix rotated_codeword(double theta) {
  // exp(-i theta XII) |000><000| exp(+i theta XII); XII^2 = I makes the
  // exponential exactly cos(theta) I - i sin(theta) XII.
  const ComplexMatrix u = std::cos(theta) * ComplexMatrix::Identity(8, 8) -
                          Complex(0, 1) * std::sin(theta) * dense_oracle("XII");
  const DensityMatrix zero = encode_bitflip(1, 0);
  DensityMatrix out;
  out.n = 3;
  out.mat = u * zero.mat * u.adjoint();
  return out;
}

}  // namespace

TEST_CASE("heuristic law is trivial on the codespace and maximal on a flip") {
  const double lam = 2.5;
  DensityMatrix classical_mix;
  classical_mix.n = 3;
  classical_mix.mat = 0.25 * encode_bitflip(1, 0).mat + 0.75 * encode_bitflip(0, 1).mat;
  for (const DensityMatrix& rho :
       {encode_bitflip(1, 0), encode_bitflip(0, 1), classical_mix,
        mixed_codespace_state(bitflip_code())}) {
    const FeedbackSignals s = heuristic_lambdas(rho, lam);
    CHECK(s.lambdas[0] == 0.0);
    CHECK(s.lambdas[1] == 0.0);
    CHECK(s.lambdas[2] == 0.0);
  }

  // 1/sqrt(2) amplitudes square to 0.5 + 1 ulp, so the stabilizer
  // expectations miss 1 by ~1e-16 and the products carry squared dust.
  const double r = 1.0 / std::sqrt(2.0);
  const FeedbackSignals cat = heuristic_lambdas(encode_bitflip(r, r), lam);
  for (const double l : cat.lambdas) CHECK(std::abs(l) < 1e-28);

  const ComplexMatrix xii = dense_oracle("XII");
  const DensityMatrix zero = encode_bitflip(1, 0);
  const DensityMatrix flipped(3, xii * zero.mat * xii);
  const FeedbackSignals s = heuristic_lambdas(flipped, lam);
  CHECK(s.lambdas[0] == doctest::Approx(lam).epsilon(1e-14));
  CHECK(s.lambdas[1] == 0.0);
  CHECK(s.lambdas[2] == 0.0);

  const FeedbackSignals m = heuristic_lambdas(DensityMatrix::maximally_mixed(3), lam);
  for (int r = 0; r < 3; ++r) {
    CHECK(m.lambdas[static_cast<std::size_t>(r)] == doctest::Approx(lam / 8).epsilon(1e-14));
  }
}

TEST_CASE("heuristic outputs stay inside [0, lambda_max]") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const FeedbackSignals s = heuristic_lambdas(test::random_density(3, rng), 1.0);
    for (const double l : s.lambdas) {
      CHECK(l >= 0.0);
      CHECK(l <= 1.0);
    }
  }
}

TEST_CASE("optimal law on the codeword and on a rotated codeword") {
  const double lam = 3.0;
  const FeedbackSignals at_zero = optimal_bitflip_lambdas(encode_bitflip(1, 0), lam);
  for (int r = 0; r < 3; ++r) {
    CHECK(at_zero.sign_inputs[static_cast<std::size_t>(r)] == 0.0);
    CHECK(at_zero.lambdas[static_cast<std::size_t>(r)] == 0.0);
  }

  // After exp(-i theta XII), <YZI + YIZ> = -2 sin(2 theta) (dense oracle value),
  // so the law commands the restoring rotation -lambda.
  const double theta = 0.1;
  const FeedbackSignals rot = optimal_bitflip_lambdas(rotated_codeword(theta), lam);
  CHECK(rot.sign_inputs[0] ==
        doctest::Approx(-2.0 * std::sin(2.0 * theta)).epsilon(1e-12));
  CHECK(rot.lambdas[0] == -lam);
  CHECK(rot.lambdas[1] == 0.0);
  CHECK(rot.lambdas[2] == 0.0);
}

TEST_CASE("bang-bang outputs take only the three allowed values") {
  std::mt19937_64 rng(22);
  const double lam = 1.25;
  for (int i = 0; i < 100; ++i) {
    const FeedbackSignals s = optimal_bitflip_lambdas(test::random_density(3, rng), lam);
    for (const double l : s.lambdas) {
      CHECK((l == lam || l == 0.0 || l == -lam));
    }
  }
}

TEST_CASE("general law reproduces the bit-flip law up to input scaling") {
  const StabilizerCode code = bitflip_code();
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = test::random_density(3, rng);
    const FeedbackSignals opt = optimal_bitflip_lambdas(rho, 1.0);
    const FeedbackSignals gen = general_lambdas(code, rho, 1.0);
    for (int r = 0; r < 3; ++r) {
      const auto ri = static_cast<std::size_t>(r);
      CHECK(gen.lambdas[ri] == opt.lambdas[ri]);
      CHECK(gen.sign_inputs[ri] == doctest::Approx(0.5 * opt.sign_inputs[ri]).epsilon(1e-12));
    }
  }
}

TEST_CASE("general law is exactly zero on the mixed codespace state") {
  const FeedbackSignals s = general_lambdas(bitflip_code(), mixed_codespace_state(bitflip_code()), 1.0);
  for (int r = 0; r < 3; ++r) {
    CHECK(s.sign_inputs[static_cast<std::size_t>(r)] == 0.0);
    CHECK(s.lambdas[static_cast<std::size_t>(r)] == 0.0);
  }
}

TEST_CASE("general law on the spin-up code reads sgn<Y>") {
  const StabilizerCode code = spin_up_code();
  const DensityMatrix up = density_from_bloch({0.0, 0.3, 0.5});
  const FeedbackSignals s = general_lambdas(code, up, 2.0);
  CHECK(s.sign_inputs[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.lambdas[0] == 2.0);

  const FeedbackSignals neg = general_lambdas(code, density_from_bloch({0.0, -0.4, 0.1}), 2.0);
  CHECK(neg.lambdas[0] == -2.0);
}

TEST_CASE("feedback_overlap_rate is non-negative under the optimal law") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 50; ++i) {
    const DensityMatrix rho = test::random_density(3, rng);
    const FeedbackSignals s = optimal_bitflip_lambdas(rho, 1.0);
    const double rate = feedback_overlap_rate(rho, s);
    CHECK(rate >= -1e-14);
    // Signed choice makes each term |input|/2.
    double expected = 0.0;
    for (int r = 0; r < 3; ++r) {
      expected += 0.5 * std::abs(s.sign_inputs[static_cast<std::size_t>(r)]);
    }
    CHECK(rate == doctest::Approx(expected).epsilon(1e-10));
  }
  const FeedbackSignals zero{{0, 0, 0}, {0, 0, 0}};
  CHECK(feedback_overlap_rate(encode_bitflip(1, 0), zero) == 0.0);
}

TEST_CASE("feedback_overlap_rate matches a finite difference of tr(rho Pi_C)") {
  // Pure feedback step (gamma = kappa = 0) with fixed bang-bang signals.
  FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
  SmeModel model = make_bitflip_model(0.0, 0.0, 1.0, fb);
  const DensityMatrix rho = rotated_codeword(0.2);
  const ComplexMatrix pi_c = codespace_projector(model.code);

  const double dt = 1e-6;
  const auto [next, dq] = euler_step(model, rho, dt, {0.0, 0.0, 0.0});
  const double f0 = (pi_c * rho.mat).trace().real();
  const double f1 = (pi_c * next.mat).trace().real();
  const double fd = (f1 - f0) / dt;

  const FeedbackSignals s = optimal_bitflip_lambdas(rho, model.lambda_max);
  const double rate = feedback_overlap_rate(rho, s);
  CHECK(std::abs(fd - rate) < 1e-4);
}

TEST_CASE("no bounded signal vector beats the optimal law") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const StabilizerCode code = bitflip_code();
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = test::random_density(3, rng);
    const double best = feedback_overlap_rate(rho, optimal_bitflip_lambdas(rho, 1.0));
    for (int trial = 0; trial < 200; ++trial) {
      const std::vector<double> lambdas{u(rng), u(rng), u(rng)};
      CHECK(best >= feedback_overlap_rate(code, rho, lambdas) - 1e-12);
    }
  }
}

TEST_CASE("smooth_sign basics") {
  CHECK(smooth_sign(0.0, 0.1) == 0.0);
  CHECK(std::abs(smooth_sign(1.0, 0.1) - 1.0) < 5e-9);
  CHECK_THROWS_AS(smooth_sign(1.0, 0.0), std::invalid_argument);
  double prev = -2.0;
  for (double x = -1.0; x <= 1.0; x += 0.05) {
    const double v = smooth_sign(x, 0.2);
    CHECK(v > prev);
    CHECK(v == doctest::Approx(-smooth_sign(-x, 0.2)).epsilon(1e-14));
    prev = v;
  }
}

TEST_CASE("sgn(0) conventions and dead-band") {
  FeedbackOptions zero;
  zero.sgn0 = SignZero::zero;
  CHECK(hard_sign(0.0, zero) == 0.0);
  CHECK(hard_sign(-0.0, zero) == 0.0);

  FeedbackOptions strict;
  strict.sgn0 = SignZero::positive;
  CHECK(hard_sign(0.0, strict) == 1.0);
  CHECK(hard_sign(-0.0, strict) == 1.0);
  CHECK(hard_sign(-1e-300, strict) == -1.0);

  FeedbackOptions band;
  band.deadband = 0.5;
  CHECK(hard_sign(0.3, band) == 0.0);
  CHECK(hard_sign(0.7, band) == 1.0);
}

TEST_CASE("codeword independence of the sign inputs along shared-noise trajectories") {
  FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
  fb.sgn0 = SignZero::positive;
  const SmeModel model = make_bitflip_model(1.0, 64.0, 128.0, fb);
  TrajectoryOptions opts;
  opts.decimation = 10;
  opts.store_steps = true;

  NoiseStream s0(404, 0);
  const TrajectoryRecord zero = run_trajectory(model, encode_bitflip(1, 0), 1e-6, 5e-3, s0, opts);
  NoiseStream s1(404, 0);
  const TrajectoryRecord one = run_trajectory(model, encode_bitflip(0, 1), 1e-6, 5e-3, s1, opts);

  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t t = 0; t < zero.step_sign_inputs[r].size(); ++t) {
      CHECK(std::abs(zero.step_sign_inputs[r][t] - one.step_sign_inputs[r][t]) < 1e-9);
    }
  }
}
