// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cqec/pauli.hpp"

namespace cqec {

struct StabilizerCode;

/// A 2^n x 2^n conditioned density matrix.  Hermiticity and unit trace are
/// maintained by hermitize_renormalize after every integrator step; positivity
/// is only monitored (see min_eigenvalue) because projecting it back would
/// silently change the dynamics.
struct DensityMatrix {
  int n = 0;
  ComplexMatrix mat;

  DensityMatrix() = default;
  DensityMatrix(int n_qubits, ComplexMatrix m);

  int dim() const { return 1 << n; }

  static DensityMatrix pure(int n_qubits, const Eigen::VectorXcd& amplitudes);
  static DensityMatrix maximally_mixed(int n_qubits);
};

/// tr(rho g).  Throws if the imaginary residue exceeds 1e-10 (a Hermitian
/// observable on a valid state must give a real expectation).
double expectation(const DensityMatrix& rho, const PauliOp& g);

/// D[c]rho = c rho c^+ - 1/2 {c^+ c, rho}.
ComplexMatrix lindblad_D(const ComplexMatrix& c, const ComplexMatrix& rho);

/// H[c]rho = c rho + rho c^+ - rho tr(c rho + rho c^+).
ComplexMatrix innovation_H(const ComplexMatrix& c, const ComplexMatrix& rho);

/// (rho + rho^+) / (2 tr), the per-step drift control of the integrator.
/// Throws std::runtime_error when the trace is not positive.
DensityMatrix hermitize_renormalize(const DensityMatrix& rho);
void hermitize_renormalize_in_place(ComplexMatrix& mat);

/// Completely mixed codespace state rho_e = Pi_C / 2^k.
DensityMatrix mixed_codespace_state(const StabilizerCode& code);

/// Smallest eigenvalue, for debug positivity monitoring.
double min_eigenvalue(const DensityMatrix& rho);

}  // namespace cqec
