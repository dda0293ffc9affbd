// SPDX-License-Identifier: Apache-2.0
#include "cqec/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace cqec {

namespace {

const Complex kPhaseTable[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_same_n(const PauliOp& a, const PauliOp& b) {
  if (a.n() != b.n()) {
    throw std::invalid_argument("PauliOp dimension mismatch: " + std::to_string(a.n()) +
                                " vs " + std::to_string(b.n()));
  }
}

}  // namespace

PauliOp::PauliOp(int n, std::uint32_t x_bits, std::uint32_t z_bits, int phase_pow)
    : n_(n), x_(x_bits), z_(z_bits), phase_(((phase_pow % 4) + 4) % 4) {
  if (n < 0 || n > 31) throw std::invalid_argument("PauliOp: bad qubit count");
  const std::uint32_t mask = (n == 0) ? 0u : ((n == 32) ? ~0u : ((1u << n) - 1u));
  if ((x_ & ~mask) != 0 || (z_ & ~mask) != 0) {
    throw std::invalid_argument("PauliOp: bit string longer than n");
  }
}

PauliOp PauliOp::identity(int n) { return PauliOp(n, 0, 0, 0); }

PauliOp PauliOp::from_string(const std::string& text) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = (phase + 1) % 4;
    ++pos;
  }
  const std::string letters = text.substr(pos);
  if (letters.empty()) throw std::invalid_argument("PauliOp: empty string");
  const int n = static_cast<int>(letters.size());
  std::uint32_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint32_t bit = 1u << (n - 1 - q);
    switch (letters[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw std::invalid_argument("PauliOp: bad letter in \"" + text + "\"");
    }
  }
  return PauliOp(n, x, z, phase);
}

Complex PauliOp::phase() const { return kPhaseTable[phase_]; }

char PauliOp::letter_at(int qubit) const {
  const std::uint32_t bit = 1u << (n_ - 1 - qubit);
  const bool x = (x_ & bit) != 0, z = (z_ & bit) != 0;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliOp::to_string() const {
  static const char* kPrefix[4] = {"", "i", "-", "-i"};
  std::string out = kPrefix[phase_];
  for (int q = 0; q < n_; ++q) out.push_back(letter_at(q));
  return out;
}

bool PauliOp::operator<(const PauliOp& o) const {
  if (n_ != o.n_) return n_ < o.n_;
  for (int q = 0; q < n_; ++q) {
    const char a = letter_at(q), b = o.letter_at(q);
    if (a != b) return a < b;
  }
  return phase_ < o.phase_;
}

PauliOp pauli_mul(const PauliOp& a, const PauliOp& b) {
  check_same_n(a, b);
  const std::uint32_t x3 = a.x_bits() ^ b.x_bits();
  const std::uint32_t z3 = a.z_bits() ^ b.z_bits();
  // Per-qubit factor convention P(x,z) = i^{xz} X^x Z^z, so
  //   P(x1,z1) P(x2,z2) = i^{x1 z1 + x2 z2 + 2 z1 x2 - x3 z3} P(x3,z3).
  int g = std::popcount(a.x_bits() & a.z_bits()) + std::popcount(b.x_bits() & b.z_bits()) +
          2 * std::popcount(a.z_bits() & b.x_bits()) - std::popcount(x3 & z3);
  g += a.phase_pow() + b.phase_pow();
  return PauliOp(a.n(), x3, z3, g);
}

bool commutes(const PauliOp& a, const PauliOp& b) {
  check_same_n(a, b);
  const int sym = std::popcount(a.x_bits() & b.z_bits()) + std::popcount(a.z_bits() & b.x_bits());
  return (sym % 2) == 0;
}

int weight(const PauliOp& a) { return std::popcount(a.x_bits() | a.z_bits()); }

ComplexMatrix to_dense(const PauliOp& a) {
  if (a.n() > kMaxDenseQubits) {
    throw std::invalid_argument("to_dense: refusing n > " + std::to_string(kMaxDenseQubits));
  }
  const int dim = 1 << a.n();
  const int n_y = std::popcount(a.x_bits() & a.z_bits());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const int sign = std::popcount(a.z_bits() & static_cast<std::uint32_t>(col)) % 2 ? -1 : 1;
    Complex value = kPhaseTable[(a.phase_pow() + n_y) % 4];
    value *= static_cast<double>(sign);
    m(static_cast<int>(static_cast<std::uint32_t>(col) ^ a.x_bits()), col) = value;
  }
  return m;
}

std::vector<PauliOp> all_phaseless(int n) {
  std::vector<PauliOp> out;
  out.reserve(static_cast<std::size_t>(1) << (2 * n));
  // Lexicographic over letters I < X < Y < Z at each position.
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  const char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  while (true) {
    std::string s;
    for (int q = 0; q < n; ++q) s.push_back(kLetters[digits[static_cast<std::size_t>(q)]]);
    out.push_back(PauliOp::from_string(s));
    int q = n - 1;
    while (q >= 0 && digits[static_cast<std::size_t>(q)] == 3) digits[static_cast<std::size_t>(q--)] = 0;
    if (q < 0) break;
    ++digits[static_cast<std::size_t>(q)];
  }
  return out;
}

}  // namespace cqec
