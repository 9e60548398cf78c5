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

#include "trotterdisorder/effective.hpp"

#include <bit>
#include <cmath>

#include "trotterdisorder/errors.hpp"

namespace td {

namespace {

OperatorSum conjugate(const Gate &gate, const OperatorSum &op, bool &used_dense) {
  if (auto c = gate.clifford()) return conjugate_by_clifford(*c, op);
  used_dense = true;
  const Eigen::MatrixXcd u = gate.unitary();
  const int n = op.n_qubits();
  return from_dense({u * to_dense(op, n).matrix * u.adjoint(), n});
}

}  // namespace

OperatorSum derive_case1(const Gate &gate, double delta_phi, double n_over_tau) {
  if (!gate.is_hamiltonian_term()) {
    throw UsageError(to_string(gate.label) + " gate does not implement a Hamiltonian term");
  }
  return gate.generator * Complex(-n_over_tau * delta_phi);
}

std::vector<DisorderTemplate> disorder_templates(std::span<const Gate> sequence, double n_over_tau) {
  std::vector<DisorderTemplate> out;
  out.reserve(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Gate &g = sequence[i];
    DisorderTemplate t;
    t.source = {g.label, g.support, static_cast<int>(i)};
    if (!g.noisy) {
      t.per_radian = OperatorSum(g.n_qubits());
      out.push_back(std::move(t));
      continue;
    }
    OperatorSum op = g.generator;
    for (std::size_t j = i + 1; j < sequence.size(); ++j) {
      if (sequence[j].is_hamiltonian_term()) continue;
      op = conjugate(sequence[j], op, t.dense_fallback);
    }
    t.per_radian = op * Complex(-n_over_tau);
    out.push_back(std::move(t));
  }
  return out;
}

OperatorSum derive_case2(std::span<const Gate> sequence, std::span<const double> delta_phi, double n_over_tau) {
  if (delta_phi.size() != sequence.size()) throw UsageError("one angle per gate required");
  if (sequence.empty()) return OperatorSum(0);
  OperatorSum out(sequence.front().n_qubits());
  const auto templates = disorder_templates(sequence, n_over_tau);
  for (std::size_t i = 0; i < templates.size(); ++i) out += templates[i].per_radian * Complex(delta_phi[i]);
  return out;
}

DisorderTrace::DisorderTrace(std::vector<DisorderTemplate> templates, ErrorRealization realization, double step_time)
    : templates_(std::move(templates)), realization_(std::move(realization)), step_time_(step_time) {
  if (static_cast<int>(templates_.size()) != realization_.n_gates()) {
    throw UsageError("trace templates do not match realization");
  }
  for (const auto &t : templates_) {
    if (!t.per_radian.is_hermitian(1e-12)) throw DomainError("disorder template is not Hermitian");
    dense_templates_.push_back(to_dense(t.per_radian, t.per_radian.n_qubits()).matrix);
  }
}

OperatorSum DisorderTrace::delta_h(int m) const {
  OperatorSum out(templates_.empty() ? 0 : templates_.front().per_radian.n_qubits());
  const auto angles = realization_.step(m);
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    if (angles[i] != 0.0) out += templates_[i].per_radian * Complex(angles[i]);
  }
  return out;
}

Eigen::MatrixXcd DisorderTrace::dense_delta_h(int m) const {
  if (templates_.empty()) return Eigen::MatrixXcd();
  const auto angles = realization_.step(m);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dense_templates_.front().rows(), dense_templates_.front().cols());
  for (std::size_t i = 0; i < templates_.size(); ++i) {
    if (angles[i] != 0.0) out += angles[i] * dense_templates_[i];
  }
  return out;
}

std::vector<OperatorSum> DisorderTrace::contributions(int m) const {
  std::vector<OperatorSum> out;
  const auto angles = realization_.step(m);
  for (std::size_t i = 0; i < templates_.size(); ++i) out.push_back(templates_[i].per_radian * Complex(angles[i]));
  return out;
}

nlohmann::json DisorderTrace::to_json(std::span<const int> expand_steps) const {
  nlohmann::json templates = nlohmann::json::array();
  for (const auto &t : templates_) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[s, c] : t.per_radian.terms()) terms.push_back({{"pauli", s.labels()}, {"re", c.real()}, {"im", c.imag()}});
    templates.push_back({{"gate_index", t.source.gate_index},
                         {"label", to_string(t.source.label)},
                         {"support", t.source.support},
                         {"dense_fallback", t.dense_fallback},
                         {"per_radian", terms}});
  }
  nlohmann::json angles = nlohmann::json::array();
  for (int m = 0; m < n_steps(); ++m) {
    const auto row = realization_.step(m);
    angles.push_back(std::vector<double>(row.begin(), row.end()));
  }
  nlohmann::json steps = nlohmann::json::array();
  for (int m : expand_steps) {
    nlohmann::json contributions_json = nlohmann::json::array();
    const auto parts = contributions(m);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].empty()) continue;
      contributions_json.push_back({{"gate_index", static_cast<int>(i)}, {"operator", parts[i].to_string()}});
    }
    steps.push_back({{"step", m}, {"delta_h", delta_h(m).to_string()}, {"contributions", contributions_json}});
  }
  return {{"step_time", step_time_}, {"templates", templates}, {"delta_phi", angles}, {"steps", steps}};
}

DisorderTrace derive_trace(const TrotterProgram &program, const ErrorRealization &realization) {
  if (realization.n_steps() != program.n_steps ||
      realization.n_gates() != static_cast<int>(program.step_gates.size())) {
    throw UsageError("realization does not match program");
  }
  return DisorderTrace(disorder_templates(program.step_gates, 1.0 / program.step_time()), realization,
                       program.step_time());
}

DisorderClassification classify(const OperatorSum &delta_h) {
  const InverseJordanWigner inv = inverse_jordan_wigner(delta_h);
  DisorderClassification out;
  out.physical_part = FermionExpression(delta_h.n_qubits());
  FermionExpression unphysical(delta_h.n_qubits());
  for (const auto &[m, c] : inv.expression.terms()) {
    FermionExpression single(delta_h.n_qubits());
    single += FermionExpression::from_word(delta_h.n_qubits(), m.word(), c);
    if (!m.conserves_particle_number()) {
      unphysical += single;
      continue;
    }
    out.physical_part += single;
    const int order = std::popcount(m.creators);
    if (order == 0) {
      out.has_constant = true;
    } else if (order == 1) {
      (m.creators == m.annihilators ? out.number_terms : out.hopping_terms) += 1;
    } else if (order == 2 && m.creators == m.annihilators) {
      out.density_terms += 1;
    } else {
      out.other_conserving_terms += 1;
    }
  }
  out.unphysical_residual = unphysical.realize();
  return out;
}

OperatorSum nested_parity(int n, int j) {
  if (j < 0 || j >= n) throw UsageError("parity index outside register");
  OperatorSum s = excitation(n, 0);
  for (int k = 1; k <= j; ++k) {
    const OperatorSum d = excitation(n, k) - s;
    s = d * d;
  }
  return s;
}

}  // namespace td
