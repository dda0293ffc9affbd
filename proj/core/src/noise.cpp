// SPDX-License-Identifier: Apache-2.0
#include "cqec/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace cqec {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  const std::uint64_t a = splitmix64(s);
  s ^= index * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull;
  const std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9E3779B97F4A7C15ull);
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
    : master_seed_(master_seed), index_(trajectory_index), rng_(derive_seed(master_seed, trajectory_index)) {}

double NoiseStream::uniform() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

std::vector<double> wiener_increments(NoiseStream& stream, int m, double dt) {
  std::vector<double> out(static_cast<std::size_t>(m));
  wiener_increments(stream, dt, out);
  return out;
}

void wiener_increments(NoiseStream& stream, double dt, std::vector<double>& out) {
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increments: dt must be positive");
  const double scale = std::sqrt(dt);
  for (double& w : out) w = scale * stream.gaussian();
}

}  // namespace cqec
