// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "cqec/analytics.hpp"
#include "cqec/feedback.hpp"
#include "cqec/stabilizer_code.hpp"
#include "test_helpers.hpp"

using namespace cqec;
using test::dense_oracle;
using test::max_abs_diff;

namespace {

bool contains(const std::vector<PauliOp>& set, const char* s) {
  return std::find(set.begin(), set.end(), PauliOp::from_string(s)) != set.end();
}

}  // namespace

TEST_CASE("bit-flip codespace projector is (III+ZZI+ZIZ+IZZ)/4") {
  const ComplexMatrix pi = codespace_projector(bitflip_code());
  const ComplexMatrix ref = 0.25 * (dense_oracle("III") + dense_oracle("ZZI") +
                                    dense_oracle("ZIZ") + dense_oracle("IZZ"));
  CHECK(max_abs_diff(pi, ref) < 1e-15);
  CHECK(pi.trace().real() == 2.0);                       // rank 2^k exactly
  CHECK(max_abs_diff(pi * pi, pi) < 1e-12);              // idempotent
  CHECK(max_abs_diff(pi.adjoint(), pi) < 1e-12);         // Hermitian
}

TEST_CASE("trivial and spin-up projectors") {
  CHECK(max_abs_diff(codespace_projector(trivial_code(1)), ComplexMatrix::Identity(2, 2)) == 0.0);
  ComplexMatrix up(2, 2);
  up << 1, 0, 0, 0;
  CHECK(max_abs_diff(codespace_projector(spin_up_code()), up) == 0.0);
}

TEST_CASE("codespace_projector rejects non-commuting generators") {
  StabilizerCode bad;
  bad.n = 3;
  bad.k = 1;
  bad.generators = {PauliOp::from_string("ZZI"), PauliOp::from_string("XII")};
  CHECK_THROWS_AS(codespace_projector(bad), std::invalid_argument);
}

TEST_CASE("encode_bitflip") {
  const DensityMatrix zero = encode_bitflip(1, 0);
  CHECK(zero.mat(0, 0) == Complex(1, 0));
  CHECK(zero.mat.cwiseAbs().sum() == 1.0);

  const DensityMatrix one = encode_bitflip(0, 1);
  CHECK(one.mat(7, 7) == Complex(1, 0));

  const double r = 1.0 / std::sqrt(2.0);
  const DensityMatrix plus = encode_bitflip(r, r);
  CHECK(plus.mat(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plus.mat(0, 7).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plus.mat(7, 0).real() == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(encode_bitflip(1, 1), std::invalid_argument);
}

TEST_CASE("correctable projector spans the single-flip orbit") {
  const DensityMatrix rho0 = encode_bitflip(1, 0);
  const ComplexMatrix pi = correctable_projector(rho0);
  CHECK(pi.trace().real() == doctest::Approx(4.0).epsilon(1e-12));  // rank 4
  CHECK(max_abs_diff(pi * pi, pi) < 1e-12);
  CHECK((pi * rho0.mat).trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  const ComplexMatrix xxi = dense_oracle("XXI");
  const ComplexMatrix doubled = xxi * rho0.mat * xxi;
  CHECK(std::abs((pi * doubled).trace().real()) < 1e-12);

  CHECK_THROWS_AS(correctable_projector(DensityMatrix::pure(
                      3, Eigen::VectorXcd::Unit(8, 1))),  // |001> is not a codeword
                  std::invalid_argument);
}

TEST_CASE("discrete_qec recovers single flips and fixes the codespace") {
  const StabilizerCode code = bitflip_code();
  const DensityMatrix rho0 = encode_bitflip(1, 0);

  const ComplexMatrix xii = dense_oracle("XII");
  const DensityMatrix flipped(3, xii * rho0.mat * xii);
  CHECK(max_abs_diff(discrete_qec(code, flipped).mat, rho0.mat) < 1e-14);

  const double r = 1.0 / std::sqrt(2.0);
  const DensityMatrix cat = encode_bitflip(r, Complex(0, 1) * r);
  CHECK(max_abs_diff(discrete_qec(code, cat).mat, cat.mat) < 1e-14);

  std::mt19937_64 rng(77);
  for (int i = 0; i < 5; ++i) {
    const DensityMatrix rho = test::random_density(3, rng);
    const DensityMatrix rec = discrete_qec(code, rho);
    CHECK(rec.mat.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("discrete_qec on the analytic solution reproduces F3bar") {
  const StabilizerCode code = bitflip_code();
  const DensityMatrix rho0 = encode_bitflip(1, 0);
  for (const double gt : {0.1, 0.2, 0.5}) {
    const DensityMatrix rho_t = analytic_bitflip_state(gt, rho0);
    const DensityMatrix rec = discrete_qec(code, rho_t);
    const double f = (rho0.mat * rec.mat).trace().real();
    const auto base = baseline_fidelities(gt);
    CHECK(std::abs(f - base.f3bar) < 1e-10);
  }
}

TEST_CASE("G set for the bit-flip code") {
  const auto g = build_G(bitflip_code());
  // Frozen by enumeration: the identity plus all 27 weight-two strings.
  CHECK(g.size() == 28);
  for (const char* s : {"YZI", "YIZ", "ZYI", "IYZ", "ZIY", "IZY"}) {
    CHECK(contains(g, s));
  }
  for (const char* s : {"III", "ZZI", "IZZ", "ZIZ"}) {
    CHECK(contains(g, s));
  }
  CHECK_FALSE(contains(g, "XXX"));
  for (const auto& op : g) {
    CHECK((weight(op) == 2 || weight(op) == 0));
  }
}

TEST_CASE("G membership is consistent under stabilizer remultiplication") {
  const StabilizerCode code = bitflip_code();
  const auto group = code.stabilizer_group();
  for (const auto& alpha : all_phaseless(3)) {
    for (const auto& s : group) {
      if (!g_set_admits(alpha, s)) continue;
      for (const auto& sp : group) {
        const PauliOp alpha_prime = pauli_mul(alpha, sp).canonical();
        const PauliOp s_prime = pauli_mul(sp, s).canonical();
        CHECK(g_set_admits(alpha_prime, s_prime));
      }
    }
  }
}

TEST_CASE("every feedback sign-input operator is a member of G (condition 1)") {
  const StabilizerCode code = bitflip_code();
  const auto g = build_G(code);
  for (const FeedbackLaw law : {FeedbackLaw::optimal_bangbang, FeedbackLaw::general}) {
    const FeedbackContext ctx(code, FeedbackOptions{law});
    for (std::size_t r = 0; r < ctx.n_corrections(); ++r) {
      for (const auto& [op, coeff] : ctx.input_ops(r)) {
        CHECK(std::find(g.begin(), g.end(), op.canonical()) != g.end());
      }
    }
  }
}

TEST_CASE("spin-up G is the full one-qubit Pauli set") {
  const auto g = build_G(spin_up_code());
  CHECK(g.size() == 4);
  for (const char* s : {"I", "X", "Y", "Z"}) CHECK(contains(g, s));
}

TEST_CASE("build_G refuses oversized codes") {
  CHECK_THROWS_AS(build_G(trivial_code(5), 4), std::invalid_argument);
}

TEST_CASE("theorem hypothesis check") {
  CHECK(check_theorem_hypothesis(bitflip_code()));

  StabilizerCode spin = spin_up_code();
  spin.logicals = {PauliOp::from_string("X")};
  CHECK_FALSE(check_theorem_hypothesis(spin));  // generator Z has odd weight

  CHECK(check_theorem_hypothesis(trivial_code(2)));
}

TEST_CASE("code JSON round-trip and invariant rejection") {
  const StabilizerCode code = bitflip_code();
  const StabilizerCode parsed = code_from_json_text(code_to_json_text(code));
  CHECK(parsed.n == 3);
  CHECK(parsed.generators == code.generators);
  CHECK(parsed.corrections == code.corrections);
  CHECK(parsed.recovery == code.recovery);

  CHECK_THROWS_AS(code_from_json_text(R"({"n":3,"k":1,"generators":["ZZI","XII"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(code_from_json_text(R"({"n":3,"k":1,"generators":["ZZI","ZZI"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      code_from_json_text(
          R"({"n":3,"k":1,"generators":["ZZI","IZZ"],"extra_measured":["XXX"]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      code_from_json_text(
          R"({"n":3,"k":1,"d":1,"generators":["ZZI","IZZ"],"corrections":["XXI"]})"),
      std::invalid_argument);
}
