// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cqec {

/// Reproducible Gaussian stream for one trajectory.  The generator seed is
/// derived from (master_seed, trajectory_index) by a splitmix64 scramble, so
/// streams are independent of scheduling and identical pairs replay the same
/// increment sequence bit for bit.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t trajectory_index() const { return index_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via the Marsaglia polar method (no library distribution,
  /// so the draw sequence is fully pinned by this code).
  double gaussian();

 private:
  std::uint64_t master_seed_ = 0;
  std::uint64_t index_ = 0;
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// m independent Wiener increments: mean 0, variance dt.
std::vector<double> wiener_increments(NoiseStream& stream, int m, double dt);
void wiener_increments(NoiseStream& stream, double dt, std::vector<double>& out);

}  // namespace cqec
