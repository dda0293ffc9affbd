// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "cqec/coeff_reduction.hpp"
#include "test_helpers.hpp"

using namespace cqec;

namespace {

SmeModel protocol_model(double kappa, double lambda) {
  FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
  fb.sgn0 = SignZero::positive;
  return make_bitflip_model(1.0, kappa, lambda, fb);
}

}  // namespace

TEST_CASE("coefficient extraction on reference states") {
  const ReducedModel rm(protocol_model(4.0, 8.0));
  CHECK(rm.G().size() == 28);

  const DensityMatrix rho_e = mixed_codespace_state(bitflip_code());
  const CoefficientVector c = rm.coefficients_from_state(rho_e);

  const int zzi = rm.index_of(PauliOp::from_string("ZZI"));
  const int yzi = rm.index_of(PauliOp::from_string("YZI"));
  const int iii = rm.index_of(PauliOp::from_string("III"));
  REQUIRE(zzi >= 0);
  REQUIRE(yzi >= 0);
  REQUIRE(iii >= 0);
  CHECK(c.values[static_cast<std::size_t>(zzi)] == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(c.values[static_cast<std::size_t>(yzi)] == 0.0);
  CHECK(c.values[static_cast<std::size_t>(iii)] == doctest::Approx(0.125).epsilon(1e-14));

  std::mt19937_64 rng(41);
  const CoefficientVector r = rm.coefficients_from_state(test::random_density(3, rng));
  CHECK(r.values[static_cast<std::size_t>(iii)] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("codeword independence of coefficients on G (condition 2)") {
  const ReducedModel rm(protocol_model(4.0, 8.0));
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;

  std::vector<CoefficientVector> all;
  for (int i = 0; i < 20; ++i) {
    Complex a{g(rng), g(rng)}, b{g(rng), g(rng)};
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    DensityMatrix rho = encode_bitflip(a / norm, b / norm);
    if (i % 3 == 0) {
      // mix two codewords classically as well
      const double p = 0.5 * (1.0 + std::tanh(g(rng)));
      rho.mat = p * encode_bitflip(1, 0).mat + (1 - p) * encode_bitflip(0, 1).mat;
    }
    all.push_back(rm.coefficients_from_state(rho));
  }
  for (std::size_t i = 1; i < all.size(); ++i) {
    for (std::size_t k = 0; k < all[i].values.size(); ++k) {
      CHECK(std::abs(all[i].values[k] - all[0].values[k]) < 1e-12);
    }
  }
}

TEST_CASE("gamma-only reduced evolution damps R_ZZI as exp(-4 gamma t)/8") {
  const SmeModel model = make_bitflip_model(1.0, 0.0, 0.0, {FeedbackLaw::none});
  const ReducedModel rm(model);
  const int zzi = rm.index_of(PauliOp::from_string("ZZI"));

  CoefficientVector c = rm.coefficients_from_state(encode_bitflip(1, 0));
  const double dt = 1e-5;
  const int steps = 1000;
  const double dw[3] = {0, 0, 0};
  const FeedbackSignals no_fb{{0, 0, 0}, {0, 0, 0}};
  for (int s = 0; s < steps; ++s) c = rm.reduced_step(c, dt, dw, no_fb);

  const double expected = std::exp(-4.0 * dt * steps) / 8.0;
  CHECK(std::abs(c.values[static_cast<std::size_t>(zzi)] - expected) < 1e-6);

  // Dense cross-check under the same discretization.
  StepWorkspace ws(model);
  ComplexMatrix rho = encode_bitflip(1, 0).mat;
  double dq[3];
  for (int s = 0; s < steps; ++s) ws.euler_step(rho, dt, dw, no_fb, dq);
  const CoefficientVector dense = rm.coefficients_from_state(DensityMatrix(3, rho));
  CHECK(std::abs(c.values[static_cast<std::size_t>(zzi)] -
                 dense.values[static_cast<std::size_t>(zzi)]) < 1e-12);
}

TEST_CASE("zero rates leave coefficients unchanged") {
  const SmeModel model = make_bitflip_model(0.0, 0.0, 0.0, {FeedbackLaw::none});
  const ReducedModel rm(model);
  const double dw[3] = {0.4, -0.3, 0.1};

  // Exactly normalized state: the update is zero and the renormalization
  // divides by exactly one, so the vector is bit-identical.
  const CoefficientVector c = rm.coefficients_from_state(encode_bitflip(1, 0));
  const CoefficientVector next = rm.reduced_step(c, 1e-4, dw, {{0, 0, 0}, {0, 0, 0}});
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    CHECK(next.values[i] == c.values[i]);
  }

  // A random state only carries trace-normalization dust.
  std::mt19937_64 rng(43);
  const CoefficientVector r = rm.coefficients_from_state(test::random_density(3, rng));
  const CoefficientVector next_r = rm.reduced_step(r, 1e-4, dw, {{0, 0, 0}, {0, 0, 0}});
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    CHECK(std::abs(next_r.values[i] - r.values[i]) <= 1e-15);
  }
}

TEST_CASE("reduced and dense trajectories agree step by step under shared noise") {
  const SmeModel model = protocol_model(64.0, 128.0);
  const ReducedModel rm(model);
  StepWorkspace ws(model);

  const DensityMatrix rho0 = encode_bitflip(1, 0);
  ComplexMatrix rho = rho0.mat;
  CoefficientVector coeffs = rm.coefficients_from_state(rho0);

  NoiseStream stream(515, 0);
  const double dt = 1e-5;
  std::vector<double> dw(3);
  double dq[3];
  double worst_r = 0.0, worst_sig = 0.0;
  for (int step = 0; step < 500; ++step) {
    const FeedbackSignals dense_sig = ws.feedback(rho, model.lambda_max);
    const FeedbackSignals red_sig = rm.feedback_from_coefficients(coeffs, model.lambda_max);
    for (int r = 0; r < 3; ++r) {
      worst_sig = std::max(worst_sig, std::abs(dense_sig.lambdas[static_cast<std::size_t>(r)] -
                                               red_sig.lambdas[static_cast<std::size_t>(r)]));
    }
    wiener_increments(stream, dt, dw);
    ws.euler_step(rho, dt, dw.data(), dense_sig, dq);
    coeffs = rm.reduced_step(coeffs, dt, dw.data(), red_sig);

    const CoefficientVector dense_coeffs = rm.coefficients_from_state(DensityMatrix(3, rho));
    for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
      worst_r = std::max(worst_r, std::abs(coeffs.values[i] - dense_coeffs.values[i]));
    }
  }
  CHECK(worst_r < 1e-8);
  CHECK(worst_sig == 0.0);
}

TEST_CASE("feedback from coefficients equals the dense law on random states") {
  const SmeModel model = protocol_model(4.0, 8.0);
  const ReducedModel rm(model);
  std::mt19937_64 rng(44);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = test::random_density(3, rng);
    const FeedbackSignals dense = optimal_bitflip_lambdas(rho, model.lambda_max,
                                                          model.feedback);
    const FeedbackSignals red =
        rm.feedback_from_coefficients(rm.coefficients_from_state(rho), model.lambda_max);
    for (int r = 0; r < 3; ++r) {
      const auto ri = static_cast<std::size_t>(r);
      CHECK(red.lambdas[ri] == dense.lambdas[ri]);
      CHECK(std::abs(red.sign_inputs[ri] - dense.sign_inputs[ri]) < 1e-12);
    }
  }

  // rho_e gives identically zero inputs (condition 2 zeros).
  const FeedbackSignals at_e = rm.feedback_from_coefficients(
      rm.coefficients_from_state(mixed_codespace_state(bitflip_code())), 1.0);
  for (const double v : at_e.sign_inputs) CHECK(v == 0.0);

  // A hand-built positive R_YZI + R_YIZ commands +lambda_max.
  CoefficientVector crafted = rm.coefficients_from_state(mixed_codespace_state(bitflip_code()));
  crafted.values[static_cast<std::size_t>(rm.index_of(PauliOp::from_string("YZI")))] = 0.01;
  const FeedbackSignals s = rm.feedback_from_coefficients(crafted, 2.0);
  CHECK(s.lambdas[0] == 2.0);
}

TEST_CASE("parameter_count") {
  CHECK(parameter_count(bitflip_code()) == 16);
  StabilizerCode five;
  five.n = 5;
  five.k = 1;
  CHECK(parameter_count(five) == 256);
  CHECK(parameter_count(bitflip_code(), 3) == 48);
}

TEST_CASE("coefficient plumbing rejects malformed inputs") {
  const ReducedModel rm(protocol_model(1.0, 1.0));
  CoefficientVector short_vec;
  short_vec.values = {0.1, 0.2};
  const double dw[3] = {0, 0, 0};
  CHECK_THROWS_AS(rm.reduced_step(short_vec, 1e-5, dw, {{0, 0, 0}, {0, 0, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(rm.feedback_from_coefficients(short_vec, 1.0), std::invalid_argument);
}
