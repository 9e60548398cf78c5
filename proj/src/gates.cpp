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

#include "trotterdisorder/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "trotterdisorder/errors.hpp"
#include "trotterdisorder/fermion.hpp"

namespace td {

namespace {

using std::numbers::pi;

void check_pair(int n, int a, int b) {
  if (a < 0 || b < 0 || a >= n || b >= n) throw UsageError("gate qubit outside register");
  if (a == b) throw UsageError("two-qubit gate needs distinct qubits");
}

OperatorSum hop(int n, int a, int b) {
  return sigma_plus(n, a) * sigma_minus(n, b) + sigma_minus(n, a) * sigma_plus(n, b);
}

Gate make(GateLabel label, OperatorSum generator, double angle, std::vector<int> support) {
  Gate g;
  g.label = label;
  g.generator = std::move(generator);
  g.nominal_angle = angle;
  g.support = std::move(support);
  g.noisy = g.support.size() > 1;
  return g;
}

// Restriction of an operator to the listed qubits, support[0] most significant.
OperatorSum restrict_to(const OperatorSum &op, const std::vector<int> &support) {
  const int k = static_cast<int>(support.size());
  OperatorSum out(k);
  for (const auto &[s, c] : op.terms()) {
    PauliString local(k);
    int seen = 0;
    for (int i = 0; i < k; ++i) {
      local = local.with(i, s.at(support[static_cast<std::size_t>(i)]));
      if (s.at(support[static_cast<std::size_t>(i)]) != Pauli::I) ++seen;
    }
    if (seen != s.weight()) throw UsageError("gate generator acts outside its declared support");
    out += OperatorSum::from_term({c, local});
  }
  return out;
}

}  // namespace

std::string to_string(GateLabel label) {
  switch (label) {
    case GateLabel::U: return "U";
    case GateLabel::T1: return "t1";
    case GateLabel::T2: return "t2";
    case GateLabel::CZ: return "CZ";
    case GateLabel::CNOT: return "CNOT";
    case GateLabel::ISwap: return "iSWAP";
    case GateLabel::InvISwap: return "inv_iSWAP";
  }
  return "?";
}

bool Gate::is_hamiltonian_term() const {
  return label == GateLabel::U || label == GateLabel::T1 || label == GateLabel::T2;
}

std::optional<CliffordGate> Gate::clifford() const {
  if (support.size() != 2) return std::nullopt;
  const double expected = label == GateLabel::CZ ? pi : pi / 2;
  if (std::abs(nominal_angle - expected) > 1e-12) return std::nullopt;
  switch (label) {
    case GateLabel::CZ: return CliffordGate{CliffordKind::CZ, support[0], support[1]};
    case GateLabel::CNOT: return CliffordGate{CliffordKind::CNOT, support[0], support[1]};
    case GateLabel::ISwap: return CliffordGate{CliffordKind::ISwap, support[0], support[1]};
    case GateLabel::InvISwap: return CliffordGate{CliffordKind::ISwapInverse, support[0], support[1]};
    default: return std::nullopt;
  }
}

Eigen::MatrixXcd Gate::unitary(double delta_phi) const {
  return exp_unitary(generator, nominal_angle + delta_phi, n_qubits()).matrix;
}

Gate gate_cz(int n, int control, int target) {
  check_pair(n, control, target);
  OperatorSum g = excitation(n, control) * (OperatorSum::identity(n) - excitation(n, target));
  return make(GateLabel::CZ, std::move(g), pi, {control, target});
}

Gate gate_cnot(int n, int control, int target) {
  check_pair(n, control, target);
  OperatorSum g = excitation(n, control) * (OperatorSum::identity(n) - pauli_op(n, target, Pauli::X));
  return make(GateLabel::CNOT, std::move(g), pi / 2, {control, target});
}

Gate gate_iswap(int n, int j, int k, int sign) {
  check_pair(n, j, k);
  if (sign != 1 && sign != -1) throw UsageError("iSWAP sign must be +1 or -1");
  return make(sign > 0 ? GateLabel::ISwap : GateLabel::InvISwap, hop(n, j, k) * Complex(sign), pi / 2, {j, k});
}

Gate gate_interaction(int n, int j, int k, double u, double dt) {
  check_pair(n, j, k);
  return make(GateLabel::U, excitation(n, j) * excitation(n, k) * Complex(-1.0), u * dt, {j, k});
}

Gate gate_hopping(GateLabel label, int n, int j, int k, double t, double dt) {
  check_pair(n, j, k);
  if (label != GateLabel::T1 && label != GateLabel::T2) throw UsageError("hopping gate label must be t1 or t2");
  return make(label, hop(n, j, k), t * dt, {j, k});
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::CzChain: return "cz_chain";
    case Variant::CnotChain: return "cnot_chain";
    case Variant::ISwapChain: return "iswap_chain";
  }
  return "?";
}

Variant variant_from_string(const std::string &name) {
  if (name == "cz_chain") return Variant::CzChain;
  if (name == "cnot_chain") return Variant::CnotChain;
  if (name == "iswap_chain") return Variant::ISwapChain;
  throw UsageError("unknown variant '" + name + "' (expected cz_chain, cnot_chain or iswap_chain)");
}

OperatorSum model_hamiltonian(const ModelParams &params) {
  return realize(build_hubbard_spinflip(params.U, params.t1, params.t2));
}

std::vector<Gate> build_trotter_step(const ModelParams &p, double dt, Variant variant) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("step time must be positive");
  const int n = 4;
  std::vector<Gate> gates;
  if (p.U != 0.0) {
    gates.push_back(gate_interaction(n, 0, 3, p.U, dt));
    gates.push_back(gate_interaction(n, 1, 2, p.U, dt));
  }
  if (p.t1 != 0.0) {
    gates.push_back(gate_hopping(GateLabel::T1, n, 0, 1, p.t1, dt));
    gates.push_back(gate_hopping(GateLabel::T1, n, 2, 3, p.t1, dt));
  }
  if (p.t2 == 0.0) return gates;
  gates.push_back(gate_hopping(GateLabel::T2, n, 1, 2, p.t2, dt));

  // The string hopping s+_0 Z_1 Z_2 s-_3 + h.c. is a t2 gate on (0, 3)
  // dressed by Clifford gates W: W e^{i a B} W^dagger = e^{i a W B W^dagger}.
  std::vector<Gate> before;
  switch (variant) {
    case Variant::CzChain:
      before = {gate_cz(n, 0, 1), gate_cz(n, 0, 2)};
      break;
    case Variant::CnotChain:
      // CZ(2,3) gives -Z_2 on the target side; CNOT(1,2) turns it into Z_1 Z_2.
      before = {gate_cnot(n, 1, 2), gate_cz(n, 2, 3)};
      break;
    case Variant::ISwapChain:
      // iSWAP^dagger CZ(1,2) iSWAP on (0,1) equals CZ(0,2) exactly.
      before = {gate_cz(n, 0, 1), gate_iswap(n, 0, 1, +1), gate_cz(n, 1, 2), gate_iswap(n, 0, 1, -1)};
      break;
  }
  for (const auto &g : before) gates.push_back(g);
  gates.push_back(gate_hopping(GateLabel::T2, n, 0, 3, p.t2, dt));
  // Mirror image. The gates in `before` square to one, except the iSWAP pair
  // whose mirrored order is again (+, CZ, -).
  if (variant == Variant::ISwapChain) {
    gates.push_back(gate_iswap(n, 0, 1, +1));
    gates.push_back(gate_cz(n, 1, 2));
    gates.push_back(gate_iswap(n, 0, 1, -1));
    gates.push_back(gate_cz(n, 0, 1));
  } else {
    for (auto it = before.rbegin(); it != before.rend(); ++it) gates.push_back(*it);
  }
  return gates;
}

TrotterProgram make_program(const ModelParams &params, double total_time, int n_steps, Variant variant) {
  if (n_steps < 1) throw UsageError("n_steps must be at least 1");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) throw UsageError("total_time must be positive");
  TrotterProgram p;
  p.params = params;
  p.variant = variant;
  p.n_steps = n_steps;
  p.total_time = total_time;
  p.step_gates = build_trotter_step(params, p.step_time(), variant);
  return p;
}

nlohmann::json to_json(const TrotterProgram &program) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto &g : program.step_gates) {
    gates.push_back({{"label", to_string(g.label)},
                     {"support", g.support},
                     {"nominal_angle", g.nominal_angle},
                     {"noisy", g.noisy},
                     {"generator", g.generator.to_string()}});
  }
  return {{"variant", to_string(program.variant)},
          {"model", {{"U", program.params.U}, {"t1", program.params.t1}, {"t2", program.params.t2}}},
          {"n_steps", program.n_steps},
          {"total_time", program.total_time},
          {"step_time", program.step_time()},
          {"step_gates", gates}};
}

std::vector<Gate> cnot_chain(int m) {
  if (m < 2 || m > 12) throw UsageError("chain length must be in [2, 12]");
  std::vector<Gate> chain;
  for (int j = m - 2; j >= 0; --j) chain.push_back(gate_cnot(m, j, j + 1));
  return chain;
}

std::vector<Gate> iswap_chain(int m, int sign) {
  if (m < 2 || m > 12) throw UsageError("chain length must be in [2, 12]");
  std::vector<Gate> chain;
  for (int j = m - 2; j >= 0; --j) chain.push_back(gate_iswap(m, j, j + 1, sign));
  return chain;
}

// ---------------------------------------------------------------------------

std::string to_string(TemporalMode mode) {
  return mode == TemporalMode::PerStepIid ? "per_step_iid" : "quasi_static";
}

TemporalMode temporal_mode_from_string(const std::string &name) {
  if (name == "per_step_iid") return TemporalMode::PerStepIid;
  if (name == "quasi_static") return TemporalMode::QuasiStatic;
  throw UsageError("unknown temporal mode '" + name + "' (expected per_step_iid or quasi_static)");
}

ErrorRealization::ErrorRealization(int n_steps, int n_gates)
    : n_steps_(n_steps), n_gates_(n_gates),
      values_(static_cast<std::size_t>(n_steps) * static_cast<std::size_t>(n_gates), 0.0) {
  if (n_steps < 0 || n_gates < 0) throw UsageError("negative realization size");
}

std::size_t ErrorRealization::index(int step, int gate) const {
  if (step < 0 || step >= n_steps_ || gate < 0 || gate >= n_gates_) throw UsageError("realization index out of range");
  return static_cast<std::size_t>(step) * static_cast<std::size_t>(n_gates_) + static_cast<std::size_t>(gate);
}

std::span<const double> ErrorRealization::step(int m) const {
  if (n_gates_ == 0) return {};
  return {values_.data() + index(m, 0), static_cast<std::size_t>(n_gates_)};
}

ErrorRealization sample_errors(const TrotterProgram &program, const NoiseModel &noise, std::uint64_t run) {
  if (!(noise.std_dev >= 0.0) || !std::isfinite(noise.std_dev)) throw UsageError("noise std_dev must be >= 0");
  const int n_gates = static_cast<int>(program.step_gates.size());
  ErrorRealization r(program.n_steps, n_gates);
  if (noise.std_dev == 0.0) return r;

  std::seed_seq seq{static_cast<std::uint32_t>(noise.seed), static_cast<std::uint32_t>(noise.seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int drawn_steps = noise.mode == TemporalMode::QuasiStatic ? 1 : program.n_steps;
  for (int m = 0; m < drawn_steps; ++m) {
    for (int g = 0; g < n_gates; ++g) {
      const double z = normal(engine);
      r.at(m, g) = program.step_gates[static_cast<std::size_t>(g)].noisy ? noise.std_dev * z : 0.0;
    }
  }
  for (int m = drawn_steps; m < program.n_steps; ++m)
    for (int g = 0; g < n_gates; ++g) r.at(m, g) = r.at(0, g);
  return r;
}

// ---------------------------------------------------------------------------

GateApplier::GateApplier(std::span<const Gate> gates) {
  if (gates.empty()) return;
  n_qubits_ = gates.front().n_qubits();
  const int dim = 1 << n_qubits_;
  for (const auto &g : gates) {
    if (g.n_qubits() != n_qubits_) throw UsageError("gates act on different registers");
    Local l;
    const int k = static_cast<int>(g.support.size());
    const Eigen::MatrixXcd gen = to_dense(restrict_to(g.generator, g.support), k).matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gen);
    if (es.info() != Eigen::Success) throw InternalError("eigendecomposition of gate generator failed");
    l.vectors = es.eigenvectors();
    l.values = es.eigenvalues();
    l.angle = g.nominal_angle;
    int mask = 0;
    for (int local = 0; local < (1 << k); ++local) {
      int offset = 0;
      for (int i = 0; i < k; ++i) {
        if ((local >> (k - 1 - i)) & 1) offset |= 1 << (n_qubits_ - 1 - g.support[static_cast<std::size_t>(i)]);
      }
      l.offsets.push_back(offset);
      mask |= offset;
    }
    for (int b = 0; b < dim; ++b)
      if ((b & mask) == 0) l.rest.push_back(b);
    local_.push_back(std::move(l));
  }
}

void GateApplier::apply(int gate_index, double delta_phi, Eigen::VectorXcd &psi) const {
  const Local &l = local_.at(static_cast<std::size_t>(gate_index));
  const Eigen::VectorXcd phases = ((l.angle + delta_phi) * l.values).unaryExpr([](double a) {
    return Complex(std::cos(a), std::sin(a));
  });
  const Eigen::MatrixXcd u = l.vectors * phases.asDiagonal() * l.vectors.adjoint();
  const int d = static_cast<int>(l.offsets.size());
  Eigen::VectorXcd in(d);
  for (int base : l.rest) {
    for (int i = 0; i < d; ++i) in(i) = psi(base | l.offsets[static_cast<std::size_t>(i)]);
    const Eigen::VectorXcd out = u * in;
    for (int i = 0; i < d; ++i) psi(base | l.offsets[static_cast<std::size_t>(i)]) = out(i);
  }
}

void GateApplier::apply_all(std::span<const double> delta_phi, Eigen::VectorXcd &psi) const {
  for (int g = 0; g < n_gates(); ++g) apply(g, delta_phi.empty() ? 0.0 : delta_phi[static_cast<std::size_t>(g)], psi);
}

Eigen::MatrixXcd sequence_unitary(std::span<const Gate> gates, std::span<const double> delta_phi) {
  if (!delta_phi.empty() && delta_phi.size() != gates.size()) throw UsageError("one angle per gate required");
  if (gates.empty()) throw UsageError("empty gate sequence");
  const int dim = 1 << gates.front().n_qubits();
  const GateApplier applier(gates);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int c = 0; c < dim; ++c) {
    Eigen::VectorXcd col = u.col(c);
    applier.apply_all(delta_phi, col);
    u.col(c) = col;
  }
  return u;
}

Eigen::MatrixXcd step_unitary(const TrotterProgram &program, const ErrorRealization &realization, int m) {
  if (realization.n_gates() != static_cast<int>(program.step_gates.size())) {
    throw UsageError("realization does not match program");
  }
  return sequence_unitary(program.step_gates, realization.step(m));
}

void run_program(const TrotterProgram &program, const ErrorRealization &realization, Eigen::VectorXcd psi,
                 const std::function<void(int, const Eigen::VectorXcd &)> &visit) {
  const int dim = 1 << program.n_qubits();
  if (psi.size() != dim) throw UsageError("initial state has wrong dimension");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw UsageError("initial state is not normalized");
  if (realization.n_steps() != program.n_steps ||
      realization.n_gates() != static_cast<int>(program.step_gates.size())) {
    throw UsageError("realization does not match program");
  }
  const GateApplier applier(program.step_gates);
  for (int m = 0; m < program.n_steps; ++m) {
    applier.apply_all(realization.step(m), psi);
    visit(m + 1, psi);
  }
}

std::vector<Eigen::VectorXcd> apply_program(const TrotterProgram &program, const ErrorRealization &realization,
                                            const Eigen::VectorXcd &initial_state) {
  std::vector<Eigen::VectorXcd> states{initial_state};
  run_program(program, realization, initial_state,
              [&](int, const Eigen::VectorXcd &psi) { states.push_back(psi); });
  return states;
}

}  // namespace td
