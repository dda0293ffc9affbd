// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <vector>

#include "cqec/pauli.hpp"

namespace cqec {

/// Precomputed action of a Pauli string on computational-basis indices:
/// P|m> = phase(m) |m ^ flip>.  All matrix-level operations below are exact
/// rewrites of the corresponding dense products (one nonzero per row), so
/// they are bit-identical to multiplying by to_dense(P).
class PauliAction {
 public:
  PauliAction() = default;
  explicit PauliAction(const PauliOp& op)
      : n_(op.n()), dim_(1 << op.n()), flip_(op.x_bits()), phase_(static_cast<std::size_t>(dim_)) {
    static const Complex kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int n_y = std::popcount(op.x_bits() & op.z_bits());
    const Complex base = kI[(op.phase_pow() + n_y) % 4];
    for (int m = 0; m < dim_; ++m) {
      const int sign = std::popcount(op.z_bits() & static_cast<std::uint32_t>(m)) % 2 ? -1 : 1;
      phase_[static_cast<std::size_t>(m)] = base * static_cast<double>(sign);
    }
  }

  int dim() const { return dim_; }
  std::uint32_t flip() const { return flip_; }
  Complex phase(int m) const { return phase_[static_cast<std::size_t>(m)]; }

  /// dst = P rho P^dagger.
  void conjugate(const ComplexMatrix& rho, ComplexMatrix& dst) const {
    for (int j = 0; j < dim_; ++j) {
      const int jf = static_cast<int>(static_cast<std::uint32_t>(j) ^ flip_);
      const Complex pj = std::conj(phase_[static_cast<std::size_t>(jf)]);
      for (int i = 0; i < dim_; ++i) {
        const int fi = static_cast<int>(static_cast<std::uint32_t>(i) ^ flip_);
        dst(i, j) = phase_[static_cast<std::size_t>(fi)] * pj * rho(fi, jf);
      }
    }
  }

  /// dst = P rho.
  void left_mul(const ComplexMatrix& rho, ComplexMatrix& dst) const {
    for (int j = 0; j < dim_; ++j) {
      for (int i = 0; i < dim_; ++i) {
        const int fi = static_cast<int>(static_cast<std::uint32_t>(i) ^ flip_);
        dst(i, j) = phase_[static_cast<std::size_t>(fi)] * rho(fi, j);
      }
    }
  }

  /// tr(rho P), complex (imaginary residue is the caller's business).
  Complex trace_with(const ComplexMatrix& rho) const {
    Complex acc{0, 0};
    for (int j = 0; j < dim_; ++j) {
      const int jf = static_cast<int>(static_cast<std::uint32_t>(j) ^ flip_);
      acc += rho(j, jf) * phase_[static_cast<std::size_t>(j)];
    }
    return acc;
  }

  /// Re tr(rho P), the expectation value for Hermitian P and rho.
  double expect(const ComplexMatrix& rho) const { return trace_with(rho).real(); }

 private:
  int n_ = 0;
  int dim_ = 0;
  std::uint32_t flip_ = 0;
  std::vector<Complex> phase_;
};

}  // namespace cqec
