// SPDX-License-Identifier: Apache-2.0
#include "cqec/density_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "cqec/pauli_action.hpp"
#include "cqec/stabilizer_code.hpp"

namespace cqec {

DensityMatrix::DensityMatrix(int n_qubits, ComplexMatrix m) : n(n_qubits), mat(std::move(m)) {
  if (n < 0 || n > kMaxDenseQubits) {
    throw std::invalid_argument("DensityMatrix: refusing n outside [0, " +
                                std::to_string(kMaxDenseQubits) + "]");
  }
  if (mat.rows() != dim() || mat.cols() != dim()) {
    throw std::invalid_argument("DensityMatrix: matrix is not 2^n x 2^n");
  }
}

DensityMatrix DensityMatrix::pure(int n_qubits, const Eigen::VectorXcd& amplitudes) {
  if (amplitudes.size() != (1 << n_qubits)) {
    throw std::invalid_argument("DensityMatrix::pure: amplitude vector has wrong length");
  }
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("DensityMatrix::pure: state not normalized");
  }
  return DensityMatrix(n_qubits, amplitudes * amplitudes.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const int d = 1 << n_qubits;
  return DensityMatrix(n_qubits, ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

double expectation(const DensityMatrix& rho, const PauliOp& g) {
  if (g.n() != rho.n) throw std::invalid_argument("expectation: dimension mismatch");
  const Complex tr = PauliAction(g).trace_with(rho.mat);
  if (std::abs(tr.imag()) > 1e-10) {
    throw std::runtime_error("expectation: imaginary residue " + std::to_string(tr.imag()) +
                             " signals a corrupted state");
  }
  return tr.real();
}

ComplexMatrix lindblad_D(const ComplexMatrix& c, const ComplexMatrix& rho) {
  if (c.rows() != rho.rows() || c.cols() != rho.cols()) {
    throw std::invalid_argument("lindblad_D: dimension mismatch");
  }
  const ComplexMatrix cdc = c.adjoint() * c;
  return c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
}

ComplexMatrix innovation_H(const ComplexMatrix& c, const ComplexMatrix& rho) {
  if (c.rows() != rho.rows() || c.cols() != rho.cols()) {
    throw std::invalid_argument("innovation_H: dimension mismatch");
  }
  const ComplexMatrix s = c * rho + rho * c.adjoint();
  return s - s.trace() * rho;
}

void hermitize_renormalize_in_place(ComplexMatrix& mat) {
  const int d = static_cast<int>(mat.rows());
  double tr = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i <= j; ++i) {
      const Complex v = 0.5 * (mat(i, j) + std::conj(mat(j, i)));
      mat(i, j) = v;
      mat(j, i) = std::conj(v);
    }
    tr += mat(j, j).real();
  }
  if (!(tr > 0.0)) {
    throw std::runtime_error("hermitize_renormalize: non-positive trace (" + std::to_string(tr) +
                             "), integrator blow-up");
  }
  mat /= tr;
}

DensityMatrix hermitize_renormalize(const DensityMatrix& rho) {
  DensityMatrix out = rho;
  hermitize_renormalize_in_place(out.mat);
  return out;
}

DensityMatrix mixed_codespace_state(const StabilizerCode& code) {
  const ComplexMatrix pi = codespace_projector(code);
  return DensityMatrix(code.n, pi / static_cast<double>(1 << code.k));
}

double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace cqec
