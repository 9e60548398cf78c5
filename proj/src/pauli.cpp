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

#include "trotterdisorder/pauli.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "trotterdisorder/errors.hpp"

namespace td {

namespace {

constexpr std::array<Complex, 4> kPowersOfI = {Complex{1, 0}, Complex{0, 1}, Complex{-1, 0},
                                               Complex{0, -1}};

// Exponent k of i^k in the single-qubit product a*b, indexed [a][b] in I,X,Y,Z
// order.
constexpr int kPhaseTable[4][4] = {
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
};

Pauli from_bits(bool x, bool z) {
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void check_qubit(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) {
    throw UsageError("qubit index " + std::to_string(qubit) + " outside register of " +
                     std::to_string(n_qubits) + " qubits");
  }
}

void check_register(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw UsageError("register size " + std::to_string(n_qubits) + " not in [0, " +
                     std::to_string(kMaxQubits) + "]");
  }
}

// Dense-index bit masks for a string on an n-qubit register (qubit 0 is the
// most significant bit).
struct DenseMasks {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int y_count = 0;
};

DenseMasks dense_masks(const PauliString &s, int n_qubits) {
  DenseMasks m;
  for (int q = 0; q < s.n_qubits(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
    const Pauli p = s.at(q);
    if (p == Pauli::X || p == Pauli::Y) m.flip |= bit;
    if (p == Pauli::Z || p == Pauli::Y) m.sign |= bit;
    if (p == Pauli::Y) ++m.y_count;
  }
  return m;
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I:
      return 'I';
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(int n_qubits) : n_qubits_(n_qubits) { check_register(n_qubits); }

PauliString PauliString::from_labels(std::string_view labels) {
  PauliString s(static_cast<int>(labels.size()));
  for (std::size_t q = 0; q < labels.size(); ++q) {
    switch (labels[q]) {
      case 'I':
        break;
      case 'X':
        s.x_ |= 1u << q;
        break;
      case 'Y':
        s.x_ |= 1u << q;
        s.z_ |= 1u << q;
        break;
      case 'Z':
        s.z_ |= 1u << q;
        break;
      default:
        throw UsageError(std::string("invalid Pauli label '") + labels[q] + "'");
    }
  }
  return s;
}

Pauli PauliString::at(int qubit) const {
  check_qubit(qubit, n_qubits_);
  return from_bits((x_ >> qubit) & 1u, (z_ >> qubit) & 1u);
}

PauliString PauliString::with(int qubit, Pauli p) const {
  check_qubit(qubit, n_qubits_);
  PauliString s = *this;
  const std::uint32_t bit = 1u << qubit;
  s.x_ &= ~bit;
  s.z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) s.x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) s.z_ |= bit;
  return s;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

std::string PauliString::labels() const {
  std::string out(static_cast<std::size_t>(n_qubits_), 'I');
  for (int q = 0; q < n_qubits_; ++q) out[static_cast<std::size_t>(q)] = pauli_char(at(q));
  return out;
}

std::strong_ordering PauliString::operator<=>(const PauliString &other) const {
  if (auto c = n_qubits_ <=> other.n_qubits_; c != 0) return c;
  for (int q = 0; q < n_qubits_; ++q) {
    const auto a = static_cast<int>(at(q));
    const auto b = static_cast<int>(other.at(q));
    if (a != b) return a <=> b;
  }
  return std::strong_ordering::equal;
}

PauliTerm multiply(const PauliTerm &a, const PauliTerm &b) {
  const int n = a.factors.n_qubits();
  if (n != b.factors.n_qubits()) {
    throw UsageError("multiply: register sizes differ (" + std::to_string(n) + " vs " +
                     std::to_string(b.factors.n_qubits()) + ")");
  }
  int phase = 0;
  PauliString out(n);
  for (int q = 0; q < n; ++q) {
    const Pauli pa = a.factors.at(q);
    const Pauli pb = b.factors.at(q);
    phase += kPhaseTable[static_cast<int>(pa)][static_cast<int>(pb)];
    const bool x = ((a.factors.x_mask() ^ b.factors.x_mask()) >> q) & 1u;
    const bool z = ((a.factors.z_mask() ^ b.factors.z_mask()) >> q) & 1u;
    out = out.with(q, from_bits(x, z));
  }
  return {a.coefficient * b.coefficient * kPowersOfI[static_cast<std::size_t>(phase % 4)], out};
}

// ---------------------------------------------------------------------------
// OperatorSum

OperatorSum::OperatorSum(int n_qubits) : n_qubits_(n_qubits) { check_register(n_qubits); }

OperatorSum::OperatorSum(int n_qubits, std::initializer_list<PauliTerm> terms)
    : OperatorSum(n_qubits) {
  for (const auto &t : terms) add(t.factors, t.coefficient);
  prune();
}

OperatorSum OperatorSum::identity(int n_qubits, Complex coefficient) {
  OperatorSum op(n_qubits);
  op.add(PauliString(n_qubits), coefficient);
  op.prune();
  return op;
}

OperatorSum OperatorSum::from_term(const PauliTerm &term) {
  OperatorSum op(term.factors.n_qubits());
  op.add(term.factors, term.coefficient);
  op.prune();
  return op;
}

Complex OperatorSum::coefficient(const PauliString &s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Complex{} : it->second;
}

void OperatorSum::add(const PauliString &s, Complex c) {
  if (s.n_qubits() != n_qubits_) {
    throw UsageError("term on " + std::to_string(s.n_qubits()) + " qubits added to sum on " +
                     std::to_string(n_qubits_));
  }
  terms_[s] += c;
}

void OperatorSum::prune() {
  std::erase_if(terms_, [](const auto &kv) { return std::abs(kv.second) < kPruneTolerance; });
}

OperatorSum &OperatorSum::operator+=(const OperatorSum &other) {
  if (other.n_qubits_ != n_qubits_) throw UsageError("operator sums on different registers");
  for (const auto &[s, c] : other.terms_) add(s, c);
  prune();
  return *this;
}

OperatorSum &OperatorSum::operator-=(const OperatorSum &other) {
  if (other.n_qubits_ != n_qubits_) throw UsageError("operator sums on different registers");
  for (const auto &[s, c] : other.terms_) add(s, -c);
  prune();
  return *this;
}

OperatorSum &OperatorSum::operator*=(Complex scale) {
  for (auto &kv : terms_) kv.second *= scale;
  prune();
  return *this;
}

OperatorSum operator*(const OperatorSum &a, const OperatorSum &b) {
  if (a.n_qubits() != b.n_qubits()) throw UsageError("operator sums on different registers");
  OperatorSum out(a.n_qubits());
  for (const auto &[sa, ca] : a.terms()) {
    for (const auto &[sb, cb] : b.terms()) {
      const PauliTerm p = multiply({ca, sa}, {cb, sb});
      out.add(p.factors, p.coefficient);
    }
  }
  out.prune();
  return out;
}

OperatorSum OperatorSum::operator-() const {
  OperatorSum out = *this;
  for (auto &kv : out.terms_) kv.second = -kv.second;
  return out;
}

OperatorSum OperatorSum::adjoint() const {
  OperatorSum out = *this;
  for (auto &kv : out.terms_) kv.second = std::conj(kv.second);
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  return std::ranges::all_of(terms_, [tol](const auto &kv) { return std::abs(kv.second.imag()) <= tol; });
}

double OperatorSum::max_coefficient_difference(const OperatorSum &other) const {
  if (other.n_qubits_ != n_qubits_) throw UsageError("operator sums on different registers");
  double worst = 0.0;
  for (const auto &[s, c] : terms_) worst = std::max(worst, std::abs(c - other.coefficient(s)));
  for (const auto &[s, c] : other.terms_) {
    if (!terms_.contains(s)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

bool OperatorSum::approx_equal(const OperatorSum &other, double tol) const {
  return other.n_qubits_ == n_qubits_ && max_coefficient_difference(other) <= tol;
}

double OperatorSum::coefficient_norm() const {
  double total = 0.0;
  for (const auto &kv : terms_) total += std::abs(kv.second);
  return total;
}

std::string OperatorSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[s, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)*" << s.labels();
  }
  return os.str();
}

OperatorSum OperatorSum::embedded(int n_qubits) const {
  if (n_qubits < n_qubits_) {
    throw UsageError("cannot embed operator on " + std::to_string(n_qubits_) + " qubits into " +
                     std::to_string(n_qubits));
  }
  if (n_qubits == n_qubits_) return *this;
  OperatorSum out(n_qubits);
  for (const auto &[s, c] : terms_) {
    PauliString t(n_qubits);
    for (int q = 0; q < n_qubits_; ++q) t = t.with(q, s.at(q));
    out.add(t, c);
  }
  return out;
}

OperatorSum commutator(const OperatorSum &a, const OperatorSum &b) { return a * b - b * a; }

OperatorSum anticommutator(const OperatorSum &a, const OperatorSum &b) { return a * b + b * a; }

OperatorSum pauli_op(int n_qubits, int qubit, Pauli p, Complex coefficient) {
  check_qubit(qubit, n_qubits);
  return OperatorSum(n_qubits, {{coefficient, PauliString(n_qubits).with(qubit, p)}});
}

OperatorSum sigma_plus(int n_qubits, int qubit) {
  return pauli_op(n_qubits, qubit, Pauli::X, 0.5) + pauli_op(n_qubits, qubit, Pauli::Y, Complex{0, 0.5});
}

OperatorSum sigma_minus(int n_qubits, int qubit) {
  return pauli_op(n_qubits, qubit, Pauli::X, 0.5) + pauli_op(n_qubits, qubit, Pauli::Y, Complex{0, -0.5});
}

OperatorSum excitation(int n_qubits, int qubit) {
  return OperatorSum::identity(n_qubits, 0.5) + pauli_op(n_qubits, qubit, Pauli::Z, 0.5);
}

// ---------------------------------------------------------------------------
// Dense realization

DenseOperator to_dense(const OperatorSum &op, int n_qubits) {
  check_register(n_qubits);
  if (op.n_qubits() > n_qubits) {
    throw UsageError("operator on " + std::to_string(op.n_qubits()) +
                     " qubits does not fit a register of " + std::to_string(n_qubits));
  }
  if (n_qubits > 12) throw UsageError("dense realization limited to 12 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  DenseOperator out{Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)),
                    n_qubits};
  for (const auto &[s, c] : op.terms()) {
    const DenseMasks m = dense_masks(s, n_qubits);
    const Complex base = c * kPowersOfI[static_cast<std::size_t>(m.y_count % 4)];
    for (std::uint64_t col = 0; col < dim; ++col) {
      const double sign = (std::popcount(col & m.sign) & 1) ? -1.0 : 1.0;
      out.matrix(static_cast<Eigen::Index>(col ^ m.flip), static_cast<Eigen::Index>(col)) += sign * base;
    }
  }
  return out;
}

DenseOperator to_dense(const OperatorSum &op) { return to_dense(op, op.n_qubits()); }

OperatorSum from_dense(const DenseOperator &op) {
  const int n = op.n_qubits;
  check_register(n);
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (static_cast<std::uint64_t>(op.matrix.rows()) != dim || static_cast<std::uint64_t>(op.matrix.cols()) != dim) {
    throw UsageError("dense operator shape does not match its register size");
  }
  OperatorSum out(n);
  const std::uint64_t n_strings = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 0; code < n_strings; ++code) {
    PauliString s(n);
    for (int q = 0; q < n; ++q) s = s.with(q, static_cast<Pauli>((code >> (2 * q)) & 3u));
    const DenseMasks m = dense_masks(s, n);
    // tr(P M) with P(r ^ flip, r) = i^y (-1)^{|r & sign|}; P is Hermitian so
    // the projection coefficient is tr(P M) / 2^n.
    Complex acc{};
    for (std::uint64_t r = 0; r < dim; ++r) {
      const double sign = (std::popcount(r & m.sign) & 1) ? -1.0 : 1.0;
      acc += sign * op.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ m.flip));
    }
    acc *= kPowersOfI[static_cast<std::size_t>(m.y_count % 4)] / static_cast<double>(dim);
    if (std::abs(acc) >= kPruneTolerance) out += OperatorSum(n, {{acc, s}});
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXcd &m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  if (!m.allFinite()) throw InternalError("spectral_norm: non-finite matrix entries");
  return svd.singularValues()(0);
}

Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd &hermitian, double angle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
  if (es.info() != Eigen::Success) throw InternalError("Hermitian eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (Complex{0, angle} * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DenseOperator exp_unitary(const OperatorSum &generator, double angle, int n_qubits) {
  double scale = 1.0;
  for (const auto &kv : generator.terms()) scale = std::max(scale, std::abs(kv.second));
  if (!generator.is_hermitian(1e-12 * scale)) throw DomainError("exp_unitary: generator is not Hermitian");
  const DenseOperator g = to_dense(generator, n_qubits);
  return {exp_hermitian(g.matrix, angle), n_qubits};
}

double phase_invariant_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("phase_invariant_distance: shape mismatch");
  const Complex overlap = (b.adjoint() * a).trace();
  const double theta0 = std::abs(overlap) > 0 ? std::arg(overlap) : 0.0;
  auto dist = [&](double theta) { return spectral_norm(a - std::polar(1.0, theta) * b); };

  // Coarse scan relative to the Frobenius-optimal phase, then golden section.
  constexpr int kScan = 32;
  double best_theta = theta0;
  double best = dist(theta0);
  for (int k = 1; k < kScan; ++k) {
    const double theta = theta0 + 2.0 * std::numbers::pi * k / kScan;
    const double d = dist(theta);
    if (d < best) {
      best = d;
      best_theta = theta;
    }
  }
  const double width = 2.0 * std::numbers::pi / kScan;
  double lo = best_theta - width;
  double hi = best_theta + width;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = dist(x1);
  double f2 = dist(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = dist(x2);
    }
  }
  return std::min({best, f1, f2});
}

// ---------------------------------------------------------------------------
// Clifford conjugation

std::string to_string(CliffordKind kind) {
  switch (kind) {
    case CliffordKind::CZ:
      return "CZ";
    case CliffordKind::CNOT:
      return "CNOT";
    case CliffordKind::ISwap:
      return "iSWAP";
    case CliffordKind::ISwapInverse:
      return "inv_iSWAP";
  }
  return "?";
}

Eigen::Matrix4cd clifford_local_matrix(CliffordKind kind) {
  // Basis order |00>, |01>, |10>, |11> in computational bits; bit 0 is the
  // excited state (n = 1).
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  const Complex i{0, 1};
  switch (kind) {
    case CliffordKind::CZ:
      m.diagonal() << 1, -1, 1, 1;
      break;
    case CliffordKind::CNOT:
      m(1, 0) = 1;
      m(0, 1) = 1;
      m(2, 2) = 1;
      m(3, 3) = 1;
      break;
    case CliffordKind::ISwap:
    case CliffordKind::ISwapInverse: {
      const Complex hop = kind == CliffordKind::ISwap ? i : -i;
      m(0, 0) = 1;
      m(3, 3) = 1;
      m(1, 2) = hop;
      m(2, 1) = hop;
      break;
    }
  }
  return m;
}

namespace {

struct LocalImage {
  Pauli first = Pauli::I;
  Pauli second = Pauli::I;
  double sign = 1.0;
};

using ConjugationTable = std::array<LocalImage, 16>;

Eigen::Matrix2cd single_pauli(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Eigen::Matrix4cd two_pauli(Pauli a, Pauli b) {
  const Eigen::Matrix2cd pa = single_pauli(a);
  const Eigen::Matrix2cd pb = single_pauli(b);
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = pa(r / 2, c / 2) * pb(r % 2, c % 2);
  return out;
}

ConjugationTable build_table(CliffordKind kind) {
  const Eigen::Matrix4cd u = clifford_local_matrix(kind);
  ConjugationTable table{};
  for (int code = 0; code < 16; ++code) {
    const auto pa = static_cast<Pauli>(code / 4);
    const auto pb = static_cast<Pauli>(code % 4);
    const Eigen::Matrix4cd image = u * two_pauli(pa, pb) * u.adjoint();
    bool found = false;
    for (int out = 0; out < 16; ++out) {
      const auto qa = static_cast<Pauli>(out / 4);
      const auto qb = static_cast<Pauli>(out % 4);
      const Complex c = (two_pauli(qa, qb) * image).trace() / 4.0;
      if (std::abs(c) < 1e-12) continue;
      if (found || std::abs(std::abs(c.real()) - 1.0) > 1e-12 || std::abs(c.imag()) > 1e-12) {
        throw InternalError("gate " + to_string(kind) + " is not Clifford");
      }
      table[static_cast<std::size_t>(code)] = {qa, qb, c.real()};
      found = true;
    }
  }
  return table;
}

const ConjugationTable &table_for(CliffordKind kind) {
  static const std::array<ConjugationTable, 4> tables = {
      build_table(CliffordKind::CZ), build_table(CliffordKind::CNOT), build_table(CliffordKind::ISwap),
      build_table(CliffordKind::ISwapInverse)};
  return tables[static_cast<std::size_t>(kind)];
}

}  // namespace

OperatorSum conjugate_by_clifford(const CliffordGate &gate, const OperatorSum &op) {
  const int n = op.n_qubits();
  check_qubit(gate.first, n);
  check_qubit(gate.second, n);
  if (gate.first == gate.second) throw UsageError("Clifford gate needs two distinct qubits");
  if (static_cast<int>(gate.kind) < 0 || static_cast<int>(gate.kind) > 3) {
    throw UsageError("unsupported Clifford gate tag");
  }
  const ConjugationTable &table = table_for(gate.kind);
  OperatorSum out(n);
  for (const auto &[s, c] : op.terms()) {
    const int code = 4 * static_cast<int>(s.at(gate.first)) + static_cast<int>(s.at(gate.second));
    const LocalImage &img = table[static_cast<std::size_t>(code)];
    const PauliString t = s.with(gate.first, img.first).with(gate.second, img.second);
    out += OperatorSum(n, {{c * img.sign, t}});
  }
  return out;
}

OperatorSum hadamard_lemma_series(const OperatorSum &x, const OperatorSum &y, int order) {
  if (order < 0) throw UsageError("hadamard_lemma_series: negative order");
  OperatorSum term = y;
  OperatorSum sum = y;
  for (int k = 1; k <= order; ++k) {
    term = commutator(x, term) * Complex(1.0 / k, 0.0);
    if (term.empty()) break;
    sum += term;
  }
  return sum;
}

}  // namespace td
