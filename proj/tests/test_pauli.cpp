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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "trotterdisorder/errors.hpp"
#include "trotterdisorder/pauli.hpp"

using namespace td;
using std::numbers::pi;

namespace {

const Complex I1{0, 1};

// Independent 2x2 matrices for the single-qubit oracle.
Eigen::Matrix2cd mat(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -I1, I1, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Kronecker product of per-qubit 2x2 factors, qubit 0 most significant.
Eigen::MatrixXcd kron_string(const PauliString &s) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < s.n_qubits(); ++q) {
    const Eigen::Matrix2cd f = mat(s.at(q));
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int r = 0; r < out.rows(); ++r)
      for (int c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
    out = next;
  }
  return out;
}

PauliString random_string(std::mt19937_64 &rng, int n) {
  std::uniform_int_distribution<int> d(0, 3);
  PauliString s(n);
  for (int q = 0; q < n; ++q) s = s.with(q, static_cast<Pauli>(d(rng)));
  return s;
}

OperatorSum random_sum(std::mt19937_64 &rng, int n, int terms) {
  std::normal_distribution<double> g;
  OperatorSum op(n);
  for (int i = 0; i < terms; ++i) op += OperatorSum::from_term({Complex(g(rng), g(rng)), random_string(rng, n)});
  return op;
}

Eigen::MatrixXcd dense_gate(const CliffordGate &gate, int n) {
  const int a = gate.first;
  const int b = gate.second;
  switch (gate.kind) {
    case CliffordKind::CZ:
      return exp_unitary(excitation(n, a) * (OperatorSum::identity(n) - excitation(n, b)), pi, n).matrix;
    case CliffordKind::CNOT:
      return exp_unitary(excitation(n, a) * (OperatorSum::identity(n) - pauli_op(n, b, Pauli::X)), pi / 2, n).matrix;
    case CliffordKind::ISwap:
    case CliffordKind::ISwapInverse: {
      const OperatorSum hop = sigma_plus(n, a) * sigma_minus(n, b) + sigma_minus(n, a) * sigma_plus(n, b);
      return exp_unitary(hop, gate.kind == CliffordKind::ISwap ? pi / 2 : -pi / 2, n).matrix;
    }
  }
  return {};
}

}  // namespace

TEST_CASE("pauli products") {
  const PauliTerm x{1.0, PauliString::from_labels("X")};
  const PauliTerm y{1.0, PauliString::from_labels("Y")};
  const PauliTerm z{1.0, PauliString::from_labels("Z")};
  PauliTerm xy = multiply(x, y);
  CHECK(xy.factors == PauliString::from_labels("Z"));
  CHECK(std::abs(xy.coefficient - I1) < 1e-15);
  PauliTerm zz = multiply(z, z);
  CHECK(zz.factors.is_identity());
  CHECK(std::abs(zz.coefficient - 1.0) < 1e-15);

  CHECK_THROWS_AS(multiply(x, {1.0, PauliString::from_labels("XX")}), UsageError);
}

TEST_CASE("phase table against 2x2 matrices") {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const PauliTerm ta{1.0, PauliString(1).with(0, static_cast<Pauli>(a))};
      const PauliTerm tb{1.0, PauliString(1).with(0, static_cast<Pauli>(b))};
      const PauliTerm p = multiply(ta, tb);
      const Eigen::Matrix2cd expect = mat(static_cast<Pauli>(a)) * mat(static_cast<Pauli>(b));
      const Eigen::Matrix2cd got = p.coefficient * mat(p.factors.at(0));
      CHECK((expect - got).norm() < 1e-15);
    }
  }
}

TEST_CASE("ladder product gives the excitation projector") {
  const OperatorSum n = sigma_plus(1, 0) * sigma_minus(1, 0);
  const OperatorSum expect(1, {{0.5, PauliString::from_labels("I")}, {0.5, PauliString::from_labels("Z")}});
  CHECK(n.approx_equal(expect));
  Eigen::Matrix2cd sp = (mat(Pauli::X) + I1 * mat(Pauli::Y)) / 2.0;
  Eigen::Matrix2cd sm = (mat(Pauli::X) - I1 * mat(Pauli::Y)) / 2.0;
  CHECK((to_dense(n).matrix - sp * sm).norm() < 1e-15);
}

TEST_CASE("dense realization") {
  CHECK(to_dense(OperatorSum::identity(2)).matrix.isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  CHECK(to_dense(pauli_op(1, 0, Pauli::Z)).matrix.isApprox(z));

  const OperatorSum hop = sigma_plus(2, 0) * sigma_minus(2, 1) + sigma_minus(2, 0) * sigma_plus(2, 1);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  expect(1, 2) = 1;
  expect(2, 1) = 1;
  CHECK((to_dense(hop).matrix - expect).norm() < 1e-15);

  CHECK_THROWS_AS(to_dense(pauli_op(3, 2, Pauli::X), 2), UsageError);
}

TEST_CASE("dense realization is a ring homomorphism") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const OperatorSum p = random_sum(rng, 3, 5);
    const OperatorSum q = random_sum(rng, 3, 5);
    CHECK((to_dense(p * q).matrix - to_dense(p).matrix * to_dense(q).matrix).norm() < 1e-12);
    CHECK((to_dense(p + q).matrix - to_dense(p).matrix - to_dense(q).matrix).norm() < 1e-12);
    Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(8, 8);
    for (const auto &[s, c] : p.terms()) kron += c * kron_string(s);
    CHECK((to_dense(p).matrix - kron).norm() < 1e-12);
  }
}

TEST_CASE("canonical form") {
  OperatorSum a(2, {{1.0, PauliString::from_labels("XZ")}, {-1.0, PauliString::from_labels("XZ")}});
  CHECK(a.empty());
  OperatorSum b(2, {{1.0, PauliString::from_labels("ZI")}, {2.0, PauliString::from_labels("IX")}});
  CHECK(b.size() == 2);
  CHECK(b.terms().begin()->first == PauliString::from_labels("IX"));
  CHECK(b.is_hermitian());
  CHECK_FALSE((b * Complex(0, 1)).is_hermitian());
  CHECK(from_dense(to_dense(b)).approx_equal(b));
}

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(to_dense(pauli_op(1, 0, Pauli::Z))) == doctest::Approx(1.0));
  CHECK(spectral_norm(to_dense(pauli_op(1, 0, Pauli::X, 3.0))) == doctest::Approx(3.0));
  CHECK(spectral_norm(to_dense(excitation(1, 0))) == doctest::Approx(1.0));
}

TEST_CASE("hermitian exponentials") {
  const DenseOperator u = exp_unitary(pauli_op(1, 0, Pauli::Z), pi / 2, 1);
  CHECK(std::abs(u.matrix(0, 0) - I1) < 1e-14);
  CHECK(std::abs(u.matrix(1, 1) + I1) < 1e-14);

  const OperatorSum hop = sigma_plus(2, 0) * sigma_minus(2, 1) + sigma_minus(2, 0) * sigma_plus(2, 1);
  const DenseOperator iswap = exp_unitary(hop, pi / 2, 2);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  expect(0, 0) = 1;
  expect(3, 3) = 1;
  expect(1, 2) = I1;
  expect(2, 1) = I1;
  CHECK((iswap.matrix - expect).norm() < 1e-14);

  CHECK(exp_unitary(hop, 0.0, 2).matrix.isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  CHECK_THROWS_AS(exp_unitary(sigma_plus(2, 0), 1.0, 2), DomainError);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    OperatorSum g = random_sum(rng, 3, 6);
    g = (g + g.adjoint()) * Complex(0.5);
    const Eigen::MatrixXcd v = exp_unitary(g, 0.7, 3).matrix;
    CHECK(spectral_norm(Eigen::MatrixXcd(v.adjoint() * v - Eigen::MatrixXcd::Identity(8, 8))) <= 1e-12);
  }
}

TEST_CASE("phase invariant distance ignores global phase") {
  const Eigen::MatrixXcd a = exp_unitary(pauli_op(2, 0, Pauli::X) + pauli_op(2, 1, Pauli::Z), 0.3, 2).matrix;
  CHECK(phase_invariant_distance(a, std::exp(Complex(0, 1.234)) * a) < 1e-12);
  CHECK(phase_invariant_distance(a, Eigen::MatrixXcd::Identity(4, 4)) > 0.1);
}

TEST_CASE("clifford conjugation examples") {
  const CliffordGate cnot{CliffordKind::CNOT, 0, 1};
  CHECK(conjugate_by_clifford(cnot, pauli_op(2, 0, Pauli::Z)).approx_equal(pauli_op(2, 0, Pauli::Z)));
  CHECK(conjugate_by_clifford(cnot, pauli_op(2, 1, Pauli::X)).approx_equal(pauli_op(2, 1, Pauli::X)));

  // Target excitation becomes the parity of control and target.
  const OperatorSum diff = excitation(2, 1) - excitation(2, 0);
  CHECK(conjugate_by_clifford(cnot, excitation(2, 1)).approx_equal(diff * diff));

  // CZ attaches a Z string to a hopping across it.
  const OperatorSum hop = sigma_plus(3, 0) * sigma_minus(3, 2);
  const CliffordGate cz{CliffordKind::CZ, 0, 1};
  CHECK(conjugate_by_clifford(cz, hop).approx_equal(hop * pauli_op(3, 1, Pauli::Z)));

  CHECK_THROWS_AS(conjugate_by_clifford({CliffordKind::CZ, 0, 0}, hop), UsageError);
  CHECK_THROWS_AS(conjugate_by_clifford({CliffordKind::CZ, 0, 5}, hop), UsageError);
}

TEST_CASE("clifford conjugation matches dense conjugation") {
  std::mt19937_64 rng(3);
  const int n = 4;
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (CliffordKind kind : {CliffordKind::CZ, CliffordKind::CNOT, CliffordKind::ISwap, CliffordKind::ISwapInverse}) {
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      int a = pick(rng);
      int b = pick(rng);
      while (b == a) b = pick(rng);
      const CliffordGate gate{kind, a, b};
      const OperatorSum op = OperatorSum::from_term({1.0, random_string(rng, n)});
      const Eigen::MatrixXcd u = dense_gate(gate, n);
      const Eigen::MatrixXcd expect = u * to_dense(op).matrix * u.adjoint();
      const Eigen::MatrixXcd got = to_dense(conjugate_by_clifford(gate, op)).matrix;
      if (spectral_norm(Eigen::MatrixXcd(expect - got)) > 1e-12) ++failures;
    }
    CHECK_MESSAGE(failures == 0, to_string(kind));
  }
}

TEST_CASE("local clifford matrices") {
  const Eigen::Matrix4cd cz = clifford_local_matrix(CliffordKind::CZ);
  CHECK(std::abs(cz(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(cz.trace() - 2.0) < 1e-15);
  CHECK((clifford_local_matrix(CliffordKind::ISwap) * clifford_local_matrix(CliffordKind::ISwapInverse))
            .isApprox(Eigen::Matrix4cd::Identity()));
}

TEST_CASE("hadamard lemma series") {
  std::mt19937_64 rng(5);
  const OperatorSum y = random_sum(rng, 2, 4);
  CHECK(hadamard_lemma_series(OperatorSum(2), y, 7).approx_equal(y));
  CHECK(hadamard_lemma_series(random_sum(rng, 2, 3), y, 0).approx_equal(y));

  // e^{x} y e^{-x} with x = i pi G_CZ reproduces CZ conjugation.
  const int n = 2;
  const OperatorSum g = excitation(n, 0) * (OperatorSum::identity(n) - excitation(n, 1));
  const OperatorSum x = g * Complex(0, pi);
  const OperatorSum target_x = pauli_op(n, 1, Pauli::X);
  const Eigen::MatrixXcd exact = to_dense(conjugate_by_clifford({CliffordKind::CZ, 0, 1}, target_x)).matrix;
  double previous = 1e300;
  for (int order = 2; order <= 30; order += 2) {
    const double err = spectral_norm(Eigen::MatrixXcd(to_dense(hadamard_lemma_series(x, target_x, order)).matrix - exact));
    CHECK(err <= std::max(previous, 1e-14));
    previous = err;
  }
  CHECK(previous < 1e-8);
  CHECK_THROWS_AS(hadamard_lemma_series(x, target_x, -1), UsageError);
}
