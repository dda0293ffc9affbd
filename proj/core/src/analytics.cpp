// SPDX-License-Identifier: Apache-2.0
#include "cqec/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace cqec {

AbcdCoefficients abcd(double gt) {
  if (gt < 0.0) throw std::invalid_argument("abcd: gt must be non-negative");
  const double x = std::exp(-2.0 * gt);
  const double x2 = x * x, x3 = x2 * x;
  return {(1 + 3 * x + 3 * x2 + x3) / 8.0, (1 + x - x2 - x3) / 8.0,
          (1 - x - x2 + x3) / 8.0, (1 - 3 * x + 3 * x2 - x3) / 8.0};
}

BaselineFidelities baseline_fidelities(double gt) {
  if (gt < 0.0) throw std::invalid_argument("baseline_fidelities: gt must be non-negative");
  const double x = std::exp(-2.0 * gt);
  const double f1 = 0.5 * (1.0 + x);
  const double f3 = f1 * f1 * f1;
  const double f3bar = (2.0 + 3.0 * x - x * x * x) / 4.0;
  // Algebraic identities against the branch probabilities.
  const auto co = abcd(gt);
  if (std::abs(f3 - co.a) > 1e-14 || std::abs(f3bar - (co.a + 3 * co.b)) > 1e-14) {
    throw std::logic_error("baseline_fidelities: closed-form identity violated");
  }
  return {f1, f3, f3bar};
}

DensityMatrix analytic_bitflip_state(double gt, const DensityMatrix& rho0) {
  if (rho0.n != 3) throw std::invalid_argument("analytic_bitflip_state: 3-qubit states only");
  const auto co = abcd(gt);
  ComplexMatrix out = co.a * rho0.mat;
  auto add = [&](const char* s, double w) {
    const ComplexMatrix p = to_dense(PauliOp::from_string(s));
    out += w * p * rho0.mat * p;
  };
  add("XII", co.b);
  add("IXI", co.b);
  add("IIX", co.b);
  add("XXI", co.c);
  add("XIX", co.c);
  add("IXX", co.c);
  add("XXX", co.d);
  return DensityMatrix(3, out);
}

double codeword_fidelity(const DensityMatrix& rho0, const DensityMatrix& rho) {
  if (rho0.n != rho.n) throw std::invalid_argument("codeword_fidelity: dimension mismatch");
  return (rho0.mat * rho.mat).trace().real();
}

double correctable_overlap(const DensityMatrix& rho, const ComplexMatrix& pi_corr) {
  if (pi_corr.rows() != rho.dim()) throw std::invalid_argument("correctable_overlap: dimension mismatch");
  return (rho.mat * pi_corr).trace().real();
}

BaselineCurves baseline_curves(const std::vector<double>& gt_grid) {
  BaselineCurves out;
  out.gt = gt_grid;
  const std::size_t m = gt_grid.size();
  out.a.resize(m); out.b.resize(m); out.c.resize(m); out.d.resize(m);
  out.f1.resize(m); out.f3.resize(m); out.f3bar.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto co = abcd(gt_grid[i]);
    const auto f = baseline_fidelities(gt_grid[i]);
    out.a[i] = co.a; out.b[i] = co.b; out.c[i] = co.c; out.d[i] = co.d;
    out.f1[i] = f.f1; out.f3[i] = f.f3; out.f3bar[i] = f.f3bar;
  }
  return out;
}

std::optional<double> crossing_time(const std::vector<double>& times,
                                    const std::vector<double>& f,
                                    const std::vector<double>& g, int window) {
  if (times.size() != f.size() || times.size() != g.size()) {
    throw std::invalid_argument("crossing_time: series must share the grid");
  }
  const std::size_t m = times.size();
  auto positive_from = [&](std::size_t i) {
    const std::size_t stop = std::min(m, i + static_cast<std::size_t>(window));
    for (std::size_t j = i; j < stop; ++j) {
      if (f[j] - g[j] <= 0.0) return false;
    }
    return true;
  };
  if (m == 0) return std::nullopt;
  if (f[0] - g[0] > 0.0 && positive_from(0)) return times[0];
  for (std::size_t i = 1; i < m; ++i) {
    const double prev = f[i - 1] - g[i - 1];
    const double cur = f[i] - g[i];
    if (prev <= 0.0 && cur > 0.0 && positive_from(i)) {
      const double frac = (cur - prev) > 0.0 ? -prev / (cur - prev) : 0.0;
      return times[i - 1] + frac * (times[i] - times[i - 1]);
    }
  }
  return std::nullopt;
}

}  // namespace cqec
