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

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace td {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 16;

/// Coefficients with modulus below this are dropped during canonicalization.
inline constexpr double kPruneTolerance = 1e-14;

/** Single-qubit Pauli labels. */
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

/**
 * Tensor product of single-qubit Pauli factors on a register of n qubits.
 *
 * Qubits are indexed from 0. In dense realizations qubit 0 is the most
 * significant tensor factor, so the label string "XZ" is X (x) Z.
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits);

  /// Parses a label string such as "IXYZ" (one character per qubit).
  static PauliString from_labels(std::string_view labels);

  int n_qubits() const { return n_qubits_; }
  Pauli at(int qubit) const;
  PauliString with(int qubit, Pauli p) const;

  std::uint32_t x_mask() const { return x_; }
  std::uint32_t z_mask() const { return z_; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  /// Number of non-identity factors.
  int weight() const;
  std::string labels() const;

  /// Lexicographic on the factor string, I < X < Y < Z, qubit 0 first.
  std::strong_ordering operator<=>(const PauliString &other) const;
  bool operator==(const PauliString &other) const = default;

 private:
  int n_qubits_ = 0;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
};

struct PauliTerm {
  Complex coefficient{1.0, 0.0};
  PauliString factors;
};

/// Exact product a*b including the induced phase (one of +-1, +-i).
PauliTerm multiply(const PauliTerm &a, const PauliTerm &b);

/**
 * Complex-weighted sum of Pauli strings in canonical form: each factor string
 * appears at most once and no coefficient is below kPruneTolerance in modulus.
 */
class OperatorSum {
 public:
  using TermMap = std::map<PauliString, Complex>;

  explicit OperatorSum(int n_qubits = 0);
  OperatorSum(int n_qubits, std::initializer_list<PauliTerm> terms);

  static OperatorSum identity(int n_qubits, Complex coefficient = 1.0);
  static OperatorSum from_term(const PauliTerm &term);

  int n_qubits() const { return n_qubits_; }
  const TermMap &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of a given string (zero if absent).
  Complex coefficient(const PauliString &s) const;

  OperatorSum &operator+=(const OperatorSum &other);
  OperatorSum &operator-=(const OperatorSum &other);
  OperatorSum &operator*=(Complex scale);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum &b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum &b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, Complex s) { return a *= s; }
  friend OperatorSum operator*(Complex s, OperatorSum a) { return a *= s; }
  friend OperatorSum operator*(const OperatorSum &a, const OperatorSum &b);
  OperatorSum operator-() const;

  OperatorSum adjoint() const;
  /// True when the sum equals its adjoint; for Pauli sums this means every
  /// coefficient is real within `tol`.
  bool is_hermitian(double tol = 1e-12) const;

  /// Term-by-term comparison after canonicalization.
  bool approx_equal(const OperatorSum &other, double tol = 1e-12) const;
  /// Largest coefficient modulus of this - other.
  double max_coefficient_difference(const OperatorSum &other) const;

  /// Sum of coefficient moduli; an upper bound on the spectral norm.
  double coefficient_norm() const;

  std::string to_string() const;

  /// Returns the same operator on a register of `n_qubits` >= current size.
  OperatorSum embedded(int n_qubits) const;

 private:
  void add(const PauliString &s, Complex c);
  void prune();

  int n_qubits_;
  TermMap terms_;
};

OperatorSum commutator(const OperatorSum &a, const OperatorSum &b);
OperatorSum anticommutator(const OperatorSum &a, const OperatorSum &b);

// Single-site building blocks on a register of n qubits.
OperatorSum pauli_op(int n_qubits, int qubit, Pauli p, Complex coefficient = 1.0);
/// sigma^+ = (X + iY)/2.
OperatorSum sigma_plus(int n_qubits, int qubit);
/// sigma^- = (X - iY)/2.
OperatorSum sigma_minus(int n_qubits, int qubit);
/// sigma^+ sigma^- = (I + Z)/2, the excitation projector of one qubit.
OperatorSum excitation(int n_qubits, int qubit);

/** Dense 2^n x 2^n realization of an operator. */
struct DenseOperator {
  Eigen::MatrixXcd matrix;
  int n_qubits = 0;
};

DenseOperator to_dense(const OperatorSum &op, int n_qubits);
DenseOperator to_dense(const OperatorSum &op);

/// Pauli decomposition of a dense operator (trace projection onto all 4^n
/// strings); exact up to floating point.
OperatorSum from_dense(const DenseOperator &op);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd &m);
inline double spectral_norm(const DenseOperator &op) { return spectral_norm(op.matrix); }

/// e^{i * angle * generator} by eigendecomposition of the Hermitian dense
/// generator. Throws DomainError if the generator is not Hermitian.
DenseOperator exp_unitary(const OperatorSum &generator, double angle, int n_qubits);

/// e^{i * angle * H} for a dense Hermitian matrix.
Eigen::MatrixXcd exp_hermitian(const Eigen::MatrixXcd &hermitian, double angle);

/// min over theta of ||a - e^{i theta} b|| in spectral norm.
double phase_invariant_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

/** Two-qubit Clifford gates with exact Pauli-sum conjugation. */
enum class CliffordKind { CZ, CNOT, ISwap, ISwapInverse };

struct CliffordGate {
  CliffordKind kind;
  int first;   ///< control qubit (CZ, CNOT) or first iSWAP partner
  int second;  ///< target qubit (CZ, CNOT) or second iSWAP partner
};

std::string to_string(CliffordKind kind);

/**
 * Local 4x4 matrix on (first, second), first being the more significant
 * factor. The excitation |e> of a qubit is the Z = +1 state.
 *
 *   CZ    = exp(i pi n_j (1 - n_k))            diag(1, -1, 1, 1)
 *   CNOT  = n_j X_k + (1 - n_j)
 *   iSWAP = n_j n_k + (1-n_j)(1-n_k) + i (s+_j s-_k + s-_j s+_k)
 */
Eigen::Matrix4cd clifford_local_matrix(CliffordKind kind);

/// U op U^dagger, evaluated exactly in the Pauli-sum representation.
OperatorSum conjugate_by_clifford(const CliffordGate &gate, const OperatorSum &op);

/// Partial sum y + [x,y] + [x,[x,y]]/2! + ... up to nested depth `order`.
OperatorSum hadamard_lemma_series(const OperatorSum &x, const OperatorSum &y, int order);

}  // namespace td
