// Copyright 2026 The trotterdisorder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trotterdisorder/fermion.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "trotterdisorder/errors.hpp"

namespace td {

namespace {

void check_mode(int mode, int n_modes) {
  if (mode < 1 || mode > n_modes) {
    throw UsageError("mode " + std::to_string(mode) + " outside [1, " + std::to_string(n_modes) + "]");
  }
}

}  // namespace

int FermionMonomial::degree() const { return std::popcount(creators) + std::popcount(annihilators); }

bool FermionMonomial::conserves_particle_number() const {
  return std::popcount(creators) == std::popcount(annihilators);
}

std::vector<LadderOp> FermionMonomial::word() const {
  std::vector<LadderOp> w;
  for (int j = 1; j <= 32; ++j)
    if ((creators >> (j - 1)) & 1u) w.push_back({j, true});
  for (int j = 32; j >= 1; --j)
    if ((annihilators >> (j - 1)) & 1u) w.push_back({j, false});
  return w;
}

std::string FermionMonomial::to_string() const {
  if (creators == 0 && annihilators == 0) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto &op : word()) {
    if (!first) os << ' ';
    first = false;
    os << (op.create ? "c+" : "c") << op.mode;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

OperatorSum jordan_wigner(int mode, Ladder kind, int n_modes) {
  check_mode(mode, n_modes);
  const int q = mode - 1;
  OperatorSum op = kind == Ladder::Annihilate ? sigma_minus(n_modes, q) : sigma_plus(n_modes, q);
  for (int k = 0; k < q; ++k) op = pauli_op(n_modes, k, Pauli::Z, -1.0) * op;
  return op;
}

FermionExpression::FermionExpression(int n_modes) : n_modes_(n_modes) {
  if (n_modes < 0 || n_modes > kMaxQubits) throw UsageError("unsupported number of modes");
}

FermionExpression FermionExpression::scalar(int n_modes, Complex value) {
  FermionExpression e(n_modes);
  e.add({}, value);
  e.prune();
  return e;
}

FermionExpression FermionExpression::ladder(int n_modes, int mode, Ladder kind) {
  const LadderOp op{mode, kind == Ladder::Create};
  return from_word(n_modes, std::span<const LadderOp>(&op, 1));
}

FermionExpression FermionExpression::from_word(int n_modes, std::span<const LadderOp> word, Complex coefficient) {
  for (const auto &op : word) check_mode(op.mode, n_modes);
  FermionExpression out = scalar(n_modes, coefficient);
  for (const auto &op : word) out = out.times_ladder(op);
  return out;
}

// Right multiplication of c+_A c_B by a single ladder operator:
//   c+_A c_B c_j   = (-1)^{#(b in B, b < j)} c+_A c_{B+j}
//   c_B c+_j       = (-1)^{|B|} c+_j c_B + [j in B] (-1)^{#(b in B, b < j)} c_{B-j}
//   c+_A c+_j      = (-1)^{#(a in A, a > j)} c+_{A+j}
FermionExpression FermionExpression::times_ladder(const LadderOp &op) const {
  FermionExpression out(n_modes_);
  const std::uint32_t bit = 1u << (op.mode - 1);
  const std::uint32_t below = bit - 1;
  for (const auto &[m, c] : terms_) {
    if (!op.create) {
      if (m.annihilators & bit) continue;
      const double sign = std::popcount(m.annihilators & below) % 2 ? -1.0 : 1.0;
      out.add({m.creators, m.annihilators | bit}, sign * c);
      continue;
    }
    if (m.annihilators & bit) {
      const double sign = std::popcount(m.annihilators & below) % 2 ? -1.0 : 1.0;
      out.add({m.creators, m.annihilators & ~bit}, sign * c);
    }
    if (m.creators & bit) continue;
    const int swaps = std::popcount(m.annihilators) + std::popcount(m.creators & ~(below | bit));
    out.add({m.creators | bit, m.annihilators}, (swaps % 2 ? -1.0 : 1.0) * c);
  }
  out.prune();
  return out;
}

Complex FermionExpression::coefficient(const FermionMonomial &m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

void FermionExpression::add(const FermionMonomial &m, Complex c) { terms_[m] += c; }

void FermionExpression::prune() {
  std::erase_if(terms_, [](const auto &kv) { return std::abs(kv.second) < kPruneTolerance; });
}

FermionExpression &FermionExpression::operator+=(const FermionExpression &other) {
  if (other.n_modes_ != n_modes_) throw UsageError("fermionic expressions on different mode sets");
  for (const auto &[m, c] : other.terms_) add(m, c);
  prune();
  return *this;
}

FermionExpression &FermionExpression::operator-=(const FermionExpression &other) {
  if (other.n_modes_ != n_modes_) throw UsageError("fermionic expressions on different mode sets");
  for (const auto &[m, c] : other.terms_) add(m, -c);
  prune();
  return *this;
}

FermionExpression &FermionExpression::operator*=(Complex s) {
  for (auto &kv : terms_) kv.second *= s;
  prune();
  return *this;
}

FermionExpression operator*(const FermionExpression &a, const FermionExpression &b) {
  if (a.n_modes() != b.n_modes()) throw UsageError("fermionic expressions on different mode sets");
  FermionExpression out(a.n_modes());
  for (const auto &[mb, cb] : b.terms()) {
    FermionExpression partial = a * cb;
    for (const auto &op : mb.word()) partial = partial.times_ladder(op);
    for (const auto &[m, c] : partial.terms()) out.add(m, c);
  }
  out.prune();
  return out;
}

FermionExpression FermionExpression::adjoint() const {
  FermionExpression out(n_modes_);
  for (const auto &[m, c] : terms_) out.add({m.annihilators, m.creators}, std::conj(c));
  return out;
}

bool FermionExpression::approx_equal(const FermionExpression &other, double tol) const {
  if (other.n_modes_ != n_modes_) return false;
  for (const auto &[m, c] : terms_)
    if (std::abs(c - other.coefficient(m)) > tol) return false;
  for (const auto &[m, c] : other.terms_)
    if (!terms_.contains(m) && std::abs(c) > tol) return false;
  return true;
}

OperatorSum FermionExpression::realize() const {
  std::vector<OperatorSum> create;
  std::vector<OperatorSum> annihilate;
  for (int j = 1; j <= n_modes_; ++j) {
    create.push_back(jordan_wigner(j, Ladder::Create, n_modes_));
    annihilate.push_back(jordan_wigner(j, Ladder::Annihilate, n_modes_));
  }
  OperatorSum out(n_modes_);
  for (const auto &[m, c] : terms_) {
    OperatorSum product = OperatorSum::identity(n_modes_, c);
    for (const auto &op : m.word()) {
      product = product * (op.create ? create : annihilate)[static_cast<std::size_t>(op.mode - 1)];
    }
    out += product;
  }
  return out;
}

std::string FermionExpression::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i) " << m.to_string();
  }
  return os.str();
}

// ---------------------------------------------------------------------------

InverseJordanWigner inverse_jordan_wigner(const OperatorSum &op) {
  const int n = op.n_qubits();
  const Complex minus_i{0, -1};

  // Jordan-Wigner string prod_{l<q} (1 - 2 n_l) in fermionic form.
  std::vector<FermionExpression> strings;
  FermionExpression running = FermionExpression::scalar(n, 1.0);
  for (int q = 0; q < n; ++q) {
    strings.push_back(running);
    const LadderOp number[2] = {{q + 1, true}, {q + 1, false}};
    running = running * (FermionExpression::scalar(n, 1.0) - FermionExpression::from_word(n, number, 2.0));
  }

  auto factor = [&](int q, Pauli p) {
    const int mode = q + 1;
    const FermionExpression up = FermionExpression::ladder(n, mode, Ladder::Create);
    const FermionExpression down = FermionExpression::ladder(n, mode, Ladder::Annihilate);
    switch (p) {
      case Pauli::I:
        return FermionExpression::scalar(n, 1.0);
      case Pauli::Z:
        return up * down * Complex(2.0) - FermionExpression::scalar(n, 1.0);
      case Pauli::X:
        return strings[static_cast<std::size_t>(q)] * (up + down);
      case Pauli::Y:
        return strings[static_cast<std::size_t>(q)] * ((up - down) * minus_i);
    }
    return FermionExpression(n);
  };

  InverseJordanWigner result{FermionExpression(n), 0.0};
  for (const auto &[s, c] : op.terms()) {
    FermionExpression e = FermionExpression::scalar(n, c);
    for (int q = 0; q < n; ++q) {
      const Pauli p = s.at(q);
      if (p != Pauli::I) e = e * factor(q, p);
    }
    result.expression += e;
  }
  result.round_trip_residual = result.expression.realize().max_coefficient_difference(op);
  return result;
}

// ---------------------------------------------------------------------------

ModeRelabeling ModeRelabeling::two_site_default() {
  return ModeRelabeling({{{1, Spin::Up}, 1}, {{2, Spin::Up}, 2}, {{2, Spin::Down}, 3}, {{1, Spin::Down}, 4}});
}

ModeRelabeling::ModeRelabeling(std::map<std::pair<int, Spin>, int> map) : map_(std::move(map)) {
  std::set<int> seen;
  for (const auto &[key, mode] : map_) {
    if (mode < 1 || mode > static_cast<int>(map_.size()) || !seen.insert(mode).second) {
      throw UsageError("mode relabeling is not a bijection onto 1..n");
    }
  }
}

int ModeRelabeling::mode(int site, Spin spin) const {
  auto it = map_.find({site, spin});
  if (it == map_.end()) throw UsageError("relabeling has no entry for site " + std::to_string(site));
  return it->second;
}

FermionHamiltonian build_hubbard_spinflip(double U, double t1, double t2, const ModeRelabeling &relabel) {
  FermionHamiltonian h;
  h.n_modes = relabel.n_modes();
  if (U != 0.0) {
    for (int site = 1; site <= 2; ++site)
      h.onsite_pairs.push_back({relabel.mode(site, Spin::Up), relabel.mode(site, Spin::Down), U});
  }
  if (t1 != 0.0) {
    for (Spin s : {Spin::Up, Spin::Down}) h.hoppings.push_back({relabel.mode(1, s), relabel.mode(2, s), t1});
  }
  if (t2 != 0.0) {
    for (int site = 1; site <= 2; ++site)
      h.hoppings.push_back({relabel.mode(site, Spin::Up), relabel.mode(site, Spin::Down), t2});
  }
  return h;
}

OperatorSum realize(const FermionHamiltonian &h) {
  const int n = h.n_modes;
  auto check_pair = [n](int j, int k) {
    check_mode(j, n);
    check_mode(k, n);
    if (j == k) throw UsageError("two-mode term needs distinct modes");
  };
  FermionExpression e(n);
  for (const auto &hop : h.hoppings) {
    check_pair(hop.j, hop.k);
    const LadderOp jk[2] = {{hop.j, true}, {hop.k, false}};
    const LadderOp kj[2] = {{hop.k, true}, {hop.j, false}};
    e += FermionExpression::from_word(n, jk, -hop.amplitude);
    e += FermionExpression::from_word(n, kj, -hop.amplitude);
  }
  for (const auto &v : h.interactions) {
    check_pair(v.j, v.k);
    const LadderOp w[4] = {{v.j, true}, {v.j, false}, {v.k, true}, {v.k, false}};
    e += FermionExpression::from_word(n, w, v.amplitude);
  }
  for (const auto &u : h.onsite_pairs) {
    check_pair(u.mode_up, u.mode_down);
    const LadderOp w[4] = {{u.mode_up, true}, {u.mode_up, false}, {u.mode_down, true}, {u.mode_down, false}};
    e += FermionExpression::from_word(n, w, u.amplitude);
  }
  OperatorSum op = e.realize();
  if (!op.is_hermitian(1e-12)) throw DomainError("realized Hamiltonian is not Hermitian");
  return op;
}

OperatorSum number_operator(std::span<const int> modes, int n_modes) {
  OperatorSum out(n_modes);
  std::set<int> seen;
  for (int mode : modes) {
    check_mode(mode, n_modes);
    if (!seen.insert(mode).second) throw UsageError("mode listed twice in number operator");
    out += excitation(n_modes, mode - 1);
  }
  return out;
}

OperatorSum total_number_operator(int n_modes) {
  OperatorSum out(n_modes);
  for (int q = 0; q < n_modes; ++q) out += excitation(n_modes, q);
  return out;
}

}  // namespace td
