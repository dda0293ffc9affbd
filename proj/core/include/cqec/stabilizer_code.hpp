// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqec/density_matrix.hpp"
#include "cqec/pauli.hpp"

namespace cqec {

/// An [[n,k,d]] stabilizer code: generators M_l, optional extra measured
/// stabilizer elements, Hamiltonian corrections F_r and logical representatives
/// from N(S)\S.  The recovery table (when present) maps a syndrome index to the
/// recovery unitary; syndrome bit l is set when generator l reads -1.
struct StabilizerCode {
  std::string name;
  int n = 0, k = 0, d = 0;
  std::vector<PauliOp> generators;
  std::vector<PauliOp> extra_measured;
  std::vector<PauliOp> corrections;
  std::vector<PauliOp> logicals;
  std::vector<PauliOp> recovery;  // size 2^(n-k) when populated

  /// Generators followed by extra measured elements, the weak-measurement set.
  std::vector<PauliOp> measured_ops() const;

  /// Full stabilizer group S(C), all 2^(n-k) products of generators.
  std::vector<PauliOp> stabilizer_group() const;

  /// Throws std::invalid_argument on any violated invariant: non-commuting or
  /// dependent generators, extra_measured outside the group, corrections of
  /// weight > d.
  void validate() const;
};

/// The three-qubit bit-flip code of the protocol: generators {ZZI, IZZ},
/// extra measured ZIZ, corrections {XII, IXI, IIX}, logicals {XXX, ZZZ}.
StabilizerCode bitflip_code();

/// Single-qubit "spin-up code": stabilizer {Z}, correction X, logical X.
StabilizerCode spin_up_code();

/// Trivial code with no generators (whole space is the codespace).
StabilizerCode trivial_code(int n);

/// Loads a code from a JSON document with keys n, k, d and string lists
/// "generators", "extra_measured", "corrections", "logicals", plus an optional
/// "recovery" list indexed by syndrome.
StabilizerCode code_from_json_text(const std::string& text);
StabilizerCode code_from_json_file(const std::string& path);
std::string code_to_json_text(const StabilizerCode& code);

/// Pi_C = 2^-(n-k) prod_l (I + M_l); idempotent, Hermitian, rank 2^k.
ComplexMatrix codespace_projector(const StabilizerCode& code);

/// amp0 |000> + amp1 |111> as a density matrix; amplitudes must be normalized.
DensityMatrix encode_bitflip(Complex amp0, Complex amp1);

/// Pi_corr = rho0 + sum_i X_i rho0 X_i for a pure bit-flip codeword rho0.
ComplexMatrix correctable_projector(const DensityMatrix& rho0);

/// One round of syndrome-averaged discrete QEC: project onto each syndrome
/// subspace of the generators, apply the recovery-table unitary, and sum the
/// unnormalized branches.  Trace preserving.
DensityMatrix discrete_qec(const StabilizerCode& code, const DensityMatrix& rho);

/// Membership predicate of the appendix set G: alpha*s is admitted when
/// [s, alpha] = 0 holds iff |alpha| is even.
bool g_set_admits(const PauliOp& alpha, const PauliOp& s);

/// The set G = {alpha s : alpha in P_n, s in S(C), predicate}, deduplicated,
/// phaseless, in string order.  Refuses n > cap (exponential enumeration).
std::vector<PauliOp> build_G(const StabilizerCode& code, int n_cap = kMaxDenseQubits);

/// True iff every stabilizer element has even weight and every logical
/// representative times every stabilizer element has odd weight.
bool check_theorem_hypothesis(const StabilizerCode& code);

}  // namespace cqec
