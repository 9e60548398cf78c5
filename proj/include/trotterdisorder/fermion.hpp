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
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trotterdisorder/pauli.hpp"

namespace td {

// Fermionic modes are numbered 1..n_modes. Mode j lives on qubit j-1 and
//
//   c_j = prod_{k<j} (-Z_k) sigma^-_j
//
// so that c+_j c_j = sigma^+_j sigma^-_j.

enum class Ladder { Annihilate, Create };

OperatorSum jordan_wigner(int mode, Ladder kind, int n_modes);

/// A single ladder operator inside a fermionic word.
struct LadderOp {
  int mode = 1;
  bool create = false;
};

/**
 * Normal-ordered product c+_{a1} ... c+_{ap} c_{bq} ... c_{b1} with
 * a1 < ... < ap and b1 < ... < bq. Bit j-1 of a mask marks mode j. With this
 * ordering the adjoint of (A, B) is (B, A).
 */
struct FermionMonomial {
  std::uint32_t creators = 0;
  std::uint32_t annihilators = 0;

  int degree() const;
  bool conserves_particle_number() const;
  std::vector<LadderOp> word() const;
  std::string to_string() const;

  auto operator<=>(const FermionMonomial &) const = default;
};

/** Linear combination of normal-ordered fermionic monomials. */
class FermionExpression {
 public:
  using TermMap = std::map<FermionMonomial, Complex>;

  explicit FermionExpression(int n_modes = 0);
  static FermionExpression scalar(int n_modes, Complex value);
  static FermionExpression ladder(int n_modes, int mode, Ladder kind);
  /// Normal-orders an arbitrary word using the canonical anticommutators.
  static FermionExpression from_word(int n_modes, std::span<const LadderOp> word, Complex coefficient = 1.0);

  int n_modes() const { return n_modes_; }
  const TermMap &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coefficient(const FermionMonomial &m) const;

  FermionExpression &operator+=(const FermionExpression &other);
  FermionExpression &operator-=(const FermionExpression &other);
  FermionExpression &operator*=(Complex s);
  friend FermionExpression operator+(FermionExpression a, const FermionExpression &b) { return a += b; }
  friend FermionExpression operator-(FermionExpression a, const FermionExpression &b) { return a -= b; }
  friend FermionExpression operator*(FermionExpression a, Complex s) { return a *= s; }
  friend FermionExpression operator*(Complex s, FermionExpression a) { return a *= s; }
  friend FermionExpression operator*(const FermionExpression &a, const FermionExpression &b);

  FermionExpression adjoint() const;
  bool approx_equal(const FermionExpression &other, double tol = 1e-12) const;

  /// Pauli realization through the Jordan-Wigner map.
  OperatorSum realize() const;
  std::string to_string() const;

 private:
  FermionExpression times_ladder(const LadderOp &op) const;
  void add(const FermionMonomial &m, Complex c);
  void prune();

  int n_modes_;
  TermMap terms_;
};

struct InverseJordanWigner {
  FermionExpression expression;
  /// Largest coefficient of realize(expression) - input; zero up to rounding
  /// because every qubit operator has a fermionic preimage.
  double round_trip_residual = 0.0;
};

/// Rewrites a qubit operator as normal-ordered fermionic monomials using
/// sigma^-_j = prod_{k<j}(1 - 2 n_k) c_j and Z_j = 2 n_j - 1.
InverseJordanWigner inverse_jordan_wigner(const OperatorSum &op);

// ---------------------------------------------------------------------------
// Hamiltonians

/// -t (c+_j c_k + c+_k c_j)
struct Hopping {
  int j = 1;
  int k = 2;
  double amplitude = 0.0;
};

/// V n_j n_k
struct DensityInteraction {
  int j = 1;
  int k = 2;
  double amplitude = 0.0;
};

/// U n_up n_down
struct OnsitePair {
  int mode_up = 1;
  int mode_down = 2;
  double amplitude = 0.0;
};

/** Hopping plus density-density Hamiltonian, energies in units of g. */
struct FermionHamiltonian {
  int n_modes = 0;
  std::vector<Hopping> hoppings;
  std::vector<DensityInteraction> interactions;
  std::vector<OnsitePair> onsite_pairs;
};

enum class Spin { Up, Down };

/** Bijective map (site, spin) -> mode index. */
class ModeRelabeling {
 public:
  /// c1 = c_{1 up}, c2 = c_{2 up}, c3 = c_{2 down}, c4 = c_{1 down}.
  static ModeRelabeling two_site_default();
  explicit ModeRelabeling(std::map<std::pair<int, Spin>, int> map);

  int mode(int site, Spin spin) const;
  int n_modes() const { return static_cast<int>(map_.size()); }

 private:
  std::map<std::pair<int, Spin>, int> map_;
};

/// Two-site Hubbard model with on-site U, inter-site hopping t1 and on-site
/// spin flip t2. Zero amplitudes produce no terms.
FermionHamiltonian build_hubbard_spinflip(double U, double t1, double t2,
                                          const ModeRelabeling &relabel = ModeRelabeling::two_site_default());

/// Hermitian Pauli realization; throws DomainError if not Hermitian.
OperatorSum realize(const FermionHamiltonian &h);

/// Sum of sigma^+_j sigma^-_j over the given (1-based) modes.
OperatorSum number_operator(std::span<const int> modes, int n_modes);
OperatorSum total_number_operator(int n_modes);

}  // namespace td
