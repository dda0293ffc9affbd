// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cqec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Maximum qubit count for which dense 2^n x 2^n realizations are allowed.
inline constexpr int kMaxDenseQubits = 7;

/// An n-qubit Pauli group element in symplectic (bit-string) form.
///
/// Qubit 0 is the leftmost letter of the string notation and the most
/// significant factor of the Kronecker product, so "ZZI" is
/// sigma_z (x) sigma_z (x) I.  The per-qubit factor is decoded from the
/// (x, z) bit pair as (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z, and the global
/// phase is one of {+1, +i, -1, -i}, stored exactly as a power of i.
class PauliOp {
 public:
  PauliOp() = default;
  PauliOp(int n, std::uint32_t x_bits, std::uint32_t z_bits, int phase_pow = 0);

  static PauliOp identity(int n);
  // Parses "ZZI", "-iYZI", "+XII", "iY", ...
  static PauliOp from_string(const std::string& text);

  int n() const { return n_; }
  std::uint32_t x_bits() const { return x_; }
  std::uint32_t z_bits() const { return z_; }
  // Power of i in the global phase, in {0,1,2,3}.
  int phase_pow() const { return phase_; }
  Complex phase() const;

  char letter_at(int qubit) const;  // 'I', 'X', 'Y' or 'Z'
  bool is_identity_string() const { return x_ == 0 && z_ == 0; }

  PauliOp canonical() const { return PauliOp(n_, x_, z_, 0); }
  PauliOp with_phase(int phase_pow) const { return PauliOp(n_, x_, z_, phase_pow); }

  std::string to_string() const;

  bool operator==(const PauliOp& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
  }
  bool operator!=(const PauliOp& o) const { return !(*this == o); }
  // Phase-insensitive ordering on (n, letters); phased ops compare by phase last.
  bool operator<(const PauliOp& o) const;

 private:
  int n_ = 0;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
  int phase_ = 0;
};

/// Exact group product a*b, phase included.
PauliOp pauli_mul(const PauliOp& a, const PauliOp& b);

/// True iff a*b == b*a, via the symplectic inner product (phase-independent).
bool commutes(const PauliOp& a, const PauliOp& b);

/// Number of qubits carrying a non-identity factor.
int weight(const PauliOp& a);

/// Dense 2^n x 2^n realization (Kronecker product times phase).
ComplexMatrix to_dense(const PauliOp& a);

/// All 4^n phaseless Pauli strings on n qubits, in lexicographic string order.
std::vector<PauliOp> all_phaseless(int n);

}  // namespace cqec
