// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "cqec/bloch.hpp"
#include "cqec/coeff_reduction.hpp"
#include "cqec/sme.hpp"

using namespace cqec;

namespace {

SmeModel protocol_model() {
  FeedbackOptions fb{FeedbackLaw::optimal_bangbang};
  fb.sgn0 = SignZero::positive;
  return make_bitflip_model(1.0, 64.0, 128.0, fb);
}

void BM_PauliMul(benchmark::State& state) {
  const PauliOp a = PauliOp::from_string("XZY");
  const PauliOp b = PauliOp::from_string("ZZI");
  for (auto _ : state) {
    benchmark::DoNotOptimize(pauli_mul(a, b));
  }
}
BENCHMARK(BM_PauliMul);

void BM_PauliConjugate(benchmark::State& state) {
  const PauliAction act(PauliOp::from_string("XII"));
  ComplexMatrix rho = encode_bitflip(1, 0).mat;
  ComplexMatrix out(8, 8);
  for (auto _ : state) {
    act.conjugate(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PauliConjugate);

void BM_FeedbackEval(benchmark::State& state) {
  const SmeModel model = protocol_model();
  StepWorkspace ws(model);
  const ComplexMatrix rho = mixed_codespace_state(model.code).mat;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ws.feedback(rho, model.lambda_max));
  }
}
BENCHMARK(BM_FeedbackEval);

void BM_EulerStepBitflip(benchmark::State& state) {
  const SmeModel model = protocol_model();
  StepWorkspace ws(model);
  ComplexMatrix rho = encode_bitflip(1, 0).mat;
  NoiseStream stream(1, 0);
  const double dt = 1e-5;
  std::vector<double> dw(3);
  double dq[3];
  for (auto _ : state) {
    wiener_increments(stream, dt, dw);
    const FeedbackSignals signals = ws.feedback(rho, model.lambda_max);
    ws.euler_step(rho, dt, dw.data(), signals, dq);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_EulerStepBitflip);

void BM_MilsteinStepBitflip(benchmark::State& state) {
  const SmeModel model = protocol_model();
  StepWorkspace ws(model);
  ComplexMatrix rho = encode_bitflip(1, 0).mat;
  NoiseStream stream(1, 0);
  const double dt = 1e-5;
  std::vector<double> dw(3);
  double dq[3];
  for (auto _ : state) {
    wiener_increments(stream, dt, dw);
    const FeedbackSignals signals = ws.feedback(rho, model.lambda_max);
    ws.milstein_step(rho, dt, dw.data(), signals, dq);
    benchmark::DoNotOptimize(rho.data());
  }
}
BENCHMARK(BM_MilsteinStepBitflip);

void BM_ReducedStep(benchmark::State& state) {
  const SmeModel model = protocol_model();
  const ReducedModel rm(model);
  CoefficientVector coeffs = rm.coefficients_from_state(encode_bitflip(1, 0));
  NoiseStream stream(1, 0);
  const double dt = 1e-5;
  std::vector<double> dw(3);
  for (auto _ : state) {
    wiener_increments(stream, dt, dw);
    const FeedbackSignals signals = rm.feedback_from_coefficients(coeffs, model.lambda_max);
    coeffs = rm.reduced_step(coeffs, dt, dw.data(), signals);
    benchmark::DoNotOptimize(coeffs.values.data());
  }
}
BENCHMARK(BM_ReducedStep);

void BM_BlochStep(benchmark::State& state) {
  NoiseStream stream(1, 0);
  BlochState s{0.0, 0.6, -0.8};
  const double dt = 1e-5;
  FeedbackOptions fb;
  for (auto _ : state) {
    s = bloch_step(s, 1.0, 4.0, 8.0, dt, std::sqrt(dt) * stream.gaussian(), fb);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_BlochStep);

}  // namespace

BENCHMARK_MAIN();
