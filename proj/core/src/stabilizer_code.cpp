// SPDX-License-Identifier: Apache-2.0
#include "cqec/stabilizer_code.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cqec {

namespace {

// Row-reduce symplectic (x|z) bit rows over GF(2); returns the rank.
int gf2_rank(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const std::uint64_t mask = 1ull << bit;
    std::size_t pivot = std::size_t(-1);
    for (std::size_t r = static_cast<std::size_t>(rank); r < rows.size(); ++r) {
      if (rows[r] & mask) { pivot = r; break; }
    }
    if (pivot == std::size_t(-1)) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != static_cast<std::size_t>(rank) && (rows[r] & mask)) {
        rows[r] ^= rows[static_cast<std::size_t>(rank)];
      }
    }
    ++rank;
  }
  return rank;
}

std::uint64_t symplectic_row(const PauliOp& p) {
  return (static_cast<std::uint64_t>(p.x_bits()) << 32) | p.z_bits();
}

bool in_span(const std::vector<PauliOp>& basis, const PauliOp& p) {
  std::vector<std::uint64_t> rows;
  rows.reserve(basis.size());
  for (const auto& b : basis) rows.push_back(symplectic_row(b));
  const int r0 = gf2_rank(rows);
  rows.push_back(symplectic_row(p));
  return gf2_rank(rows) == r0;
}

std::vector<PauliOp> parse_list(const nlohmann::json& j, const std::string& key) {
  std::vector<PauliOp> out;
  if (!j.contains(key)) return out;
  for (const auto& s : j.at(key)) out.push_back(PauliOp::from_string(s.get<std::string>()));
  return out;
}

}  // namespace

std::vector<PauliOp> StabilizerCode::measured_ops() const {
  std::vector<PauliOp> out = generators;
  out.insert(out.end(), extra_measured.begin(), extra_measured.end());
  return out;
}

std::vector<PauliOp> StabilizerCode::stabilizer_group() const {
  std::vector<PauliOp> group{PauliOp::identity(n)};
  for (const auto& g : generators) {
    const std::size_t sz = group.size();
    for (std::size_t i = 0; i < sz; ++i) group.push_back(pauli_mul(group[i], g));
  }
  return group;
}

void StabilizerCode::validate() const {
  const std::size_t expected = static_cast<std::size_t>(n - k);
  if (generators.size() != expected) {
    throw std::invalid_argument("StabilizerCode: expected n-k generators");
  }
  for (const auto& g : generators) {
    if (g.n() != n) throw std::invalid_argument("StabilizerCode: generator on wrong qubit count");
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commutes(generators[i], generators[j])) {
        throw std::invalid_argument("StabilizerCode: generators " + generators[i].to_string() +
                                    " and " + generators[j].to_string() + " do not commute");
      }
    }
  }
  std::vector<std::uint64_t> rows;
  for (const auto& g : generators) rows.push_back(symplectic_row(g));
  if (gf2_rank(rows) != static_cast<int>(generators.size())) {
    throw std::invalid_argument("StabilizerCode: generators are not independent");
  }
  for (const auto& e : extra_measured) {
    if (!in_span(generators, e)) {
      throw std::invalid_argument("StabilizerCode: extra measured element " + e.to_string() +
                                  " is not a product of generators");
    }
  }
  for (const auto& f : corrections) {
    if (d > 0 && weight(f) > d) {
      throw std::invalid_argument("StabilizerCode: correction " + f.to_string() +
                                  " has weight above d");
    }
  }
  for (const auto& l : logicals) {
    for (const auto& g : generators) {
      if (!commutes(l, g)) {
        throw std::invalid_argument("StabilizerCode: logical " + l.to_string() +
                                    " does not commute with the stabilizer");
      }
    }
    if (in_span(generators, l)) {
      throw std::invalid_argument("StabilizerCode: logical " + l.to_string() +
                                  " lies inside the stabilizer group");
    }
  }
  if (!recovery.empty() && recovery.size() != (static_cast<std::size_t>(1) << (n - k))) {
    throw std::invalid_argument("StabilizerCode: recovery table must cover all syndromes");
  }
}

StabilizerCode bitflip_code() {
  StabilizerCode c;
  c.name = "bitflip";
  c.n = 3;
  c.k = 1;
  c.d = 3;  // single bit-flip correcting; stored as 3 for bookkeeping
  c.generators = {PauliOp::from_string("ZZI"), PauliOp::from_string("IZZ")};
  c.extra_measured = {PauliOp::from_string("ZIZ")};
  c.corrections = {PauliOp::from_string("XII"), PauliOp::from_string("IXI"),
                   PauliOp::from_string("IIX")};
  c.logicals = {PauliOp::from_string("XXX"), PauliOp::from_string("ZZZ")};
  // Syndrome bit 0 <-> ZZI reads -1, bit 1 <-> IZZ reads -1.
  c.recovery = {PauliOp::from_string("III"), PauliOp::from_string("XII"),
                PauliOp::from_string("IIX"), PauliOp::from_string("IXI")};
  return c;
}

StabilizerCode spin_up_code() {
  StabilizerCode c;
  c.name = "spin_up";
  c.n = 1;
  c.k = 0;
  c.d = 1;
  c.generators = {PauliOp::from_string("Z")};
  c.corrections = {PauliOp::from_string("X")};
  c.logicals = {};
  c.recovery = {PauliOp::from_string("I"), PauliOp::from_string("X")};
  return c;
}

StabilizerCode trivial_code(int n) {
  StabilizerCode c;
  c.name = "trivial";
  c.n = n;
  c.k = n;
  c.d = 1;
  return c;
}

StabilizerCode code_from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  StabilizerCode c;
  c.name = j.value("name", std::string("custom"));
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  c.d = j.value("d", 0);
  c.generators = parse_list(j, "generators");
  c.extra_measured = parse_list(j, "extra_measured");
  c.corrections = parse_list(j, "corrections");
  c.logicals = parse_list(j, "logicals");
  c.recovery = parse_list(j, "recovery");
  c.validate();
  return c;
}

StabilizerCode code_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return code_from_json_text(ss.str());
}

std::string code_to_json_text(const StabilizerCode& code) {
  nlohmann::json j;
  j["name"] = code.name;
  j["n"] = code.n;
  j["k"] = code.k;
  j["d"] = code.d;
  auto dump = [](const std::vector<PauliOp>& v) {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(p.to_string());
    return out;
  };
  j["generators"] = dump(code.generators);
  j["extra_measured"] = dump(code.extra_measured);
  j["corrections"] = dump(code.corrections);
  j["logicals"] = dump(code.logicals);
  j["recovery"] = dump(code.recovery);
  return j.dump(2);
}

ComplexMatrix codespace_projector(const StabilizerCode& code) {
  for (std::size_t i = 0; i < code.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < code.generators.size(); ++j) {
      if (!commutes(code.generators[i], code.generators[j])) {
        throw std::invalid_argument("codespace_projector: non-commuting generators");
      }
    }
  }
  const int dim = 1 << code.n;
  ComplexMatrix pi = ComplexMatrix::Identity(dim, dim);
  for (const auto& m : code.generators) {
    pi = 0.5 * (pi + to_dense(m) * pi);
  }
  return pi;
}

DensityMatrix encode_bitflip(Complex amp0, Complex amp1) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = amp0;  // |000>
  psi(7) = amp1;  // |111>
  return DensityMatrix::pure(3, psi);
}

ComplexMatrix correctable_projector(const DensityMatrix& rho0) {
  if (rho0.n != 3) throw std::invalid_argument("correctable_projector: bit-flip code is 3 qubits");
  const double purity = (rho0.mat * rho0.mat).trace().real();
  const double in_code = (codespace_projector(bitflip_code()) * rho0.mat).trace().real();
  if (std::abs(purity - 1.0) > 1e-9 || std::abs(in_code - 1.0) > 1e-9) {
    throw std::invalid_argument("correctable_projector: rho0 is not a pure codeword");
  }
  ComplexMatrix pi = rho0.mat;
  for (const char* flip : {"XII", "IXI", "IIX"}) {
    const ComplexMatrix f = to_dense(PauliOp::from_string(flip));
    pi += f * rho0.mat * f;
  }
  return pi;
}

DensityMatrix discrete_qec(const StabilizerCode& code, const DensityMatrix& rho) {
  if (code.recovery.empty()) {
    throw std::invalid_argument("discrete_qec: code has no recovery table");
  }
  const int dim = 1 << code.n;
  const int n_syn = 1 << (code.n - code.k);
  std::vector<ComplexMatrix> gen_dense;
  gen_dense.reserve(code.generators.size());
  for (const auto& g : code.generators) gen_dense.push_back(to_dense(g));
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int syn = 0; syn < n_syn; ++syn) {
    ComplexMatrix proj = ComplexMatrix::Identity(dim, dim);
    for (std::size_t l = 0; l < gen_dense.size(); ++l) {
      const double sign = (syn >> l) & 1 ? -1.0 : 1.0;
      proj = 0.5 * (proj + sign * gen_dense[l] * proj);
    }
    const ComplexMatrix r = to_dense(code.recovery[static_cast<std::size_t>(syn)]);
    const ComplexMatrix branch = proj * rho.mat * proj;
    out += r * branch * r.adjoint();
  }
  return DensityMatrix(code.n, out);
}

bool g_set_admits(const PauliOp& alpha, const PauliOp& s) {
  return commutes(s, alpha) == (weight(alpha) % 2 == 0);
}

std::vector<PauliOp> build_G(const StabilizerCode& code, int n_cap) {
  if (code.n > n_cap) {
    throw std::invalid_argument("build_G: enumeration refused for n > " + std::to_string(n_cap));
  }
  code.validate();
  const std::vector<PauliOp> group = code.stabilizer_group();
  std::set<PauliOp> members;
  for (const auto& alpha : all_phaseless(code.n)) {
    for (const auto& s : group) {
      if (g_set_admits(alpha, s)) {
        members.insert(pauli_mul(alpha, s).canonical());
      }
    }
  }
  return {members.begin(), members.end()};
}

bool check_theorem_hypothesis(const StabilizerCode& code) {
  const std::vector<PauliOp> group = code.stabilizer_group();
  for (const auto& s : group) {
    if (weight(s) % 2 != 0) return false;
  }
  for (const auto& l : code.logicals) {
    for (const auto& s : group) {
      if (weight(pauli_mul(l, s)) % 2 != 1) return false;
    }
  }
  return true;
}

}  // namespace cqec
