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

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "trotterdisorder/fermion.hpp"
#include "trotterdisorder/gates.hpp"
#include "trotterdisorder/pauli.hpp"

namespace td {

// First-order disorder from over-rotations.
//
// Over-rotating gate i multiplies the step by e^{i dphi_i A_i} right after
// that gate. Pushing the factor to the end of the step through the
// large-angle gates W_i that follow it gives e^{i dphi_i W_i A_i W_i^dagger}.
// Comparing with e^{-i dH tau/n} yields
//
//   dH = -(n/tau) sum_i dphi_i Ad_{W_i}(A_i).
//
// Small-angle gates are skipped in W_i: commuting through them costs
// O(dphi * g tau/n), which is dropped along with O(dphi^2).

struct Provenance {
  GateLabel label = GateLabel::CZ;
  std::vector<int> support;
  int gate_index = 0;
};

/// dH contribution per radian of over-rotation of one gate.
struct DisorderTemplate {
  Provenance source;
  OperatorSum per_radian;
  /// True if Ad_W had to be evaluated densely (non-Clifford large-angle gate).
  bool dense_fallback = false;
};

/// -(n/tau) dphi A for a gate that directly implements a Hamiltonian term.
OperatorSum derive_case1(const Gate &gate, double delta_phi, double n_over_tau);

/// Templates for every gate of a sequence given in time order.
std::vector<DisorderTemplate> disorder_templates(std::span<const Gate> sequence, double n_over_tau);

/// sum_i dphi_i T_i for a sequence in time order.
OperatorSum derive_case2(std::span<const Gate> sequence, std::span<const double> delta_phi, double n_over_tau);

/** Piecewise-constant disorder dH_m = sum_i dphi_{m,i} T_i over all steps. */
class DisorderTrace {
 public:
  DisorderTrace(std::vector<DisorderTemplate> templates, ErrorRealization realization, double step_time);

  int n_steps() const { return realization_.n_steps(); }
  double step_time() const { return step_time_; }
  const std::vector<DisorderTemplate> &templates() const { return templates_; }
  const ErrorRealization &realization() const { return realization_; }

  OperatorSum delta_h(int m) const;
  Eigen::MatrixXcd dense_delta_h(int m) const;
  /// Per-gate contributions of step m, keyed by template index.
  std::vector<OperatorSum> contributions(int m) const;

  /// Templates with provenance plus the angle table. Per-step operators are
  /// included only for steps listed in `expand_steps`.
  nlohmann::json to_json(std::span<const int> expand_steps = {}) const;

 private:
  std::vector<DisorderTemplate> templates_;
  std::vector<Eigen::MatrixXcd> dense_templates_;
  ErrorRealization realization_;
  double step_time_;
};

DisorderTrace derive_trace(const TrotterProgram &program, const ErrorRealization &realization);

struct DisorderClassification {
  /// Particle-conserving monomials.
  FermionExpression physical_part;
  /// Pauli realization of the monomials that change particle number.
  OperatorSum unphysical_residual;
  int hopping_terms = 0;
  int number_terms = 0;
  int density_terms = 0;
  int other_conserving_terms = 0;
  bool has_constant = false;
};

DisorderClassification classify(const OperatorSum &delta_h);

/// Nested parity operator: S_0 = n_0, S_j = (n_j - S_{j-1})^2 (0-based).
OperatorSum nested_parity(int n_qubits, int j);

}  // namespace td
