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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "trotterdisorder/pauli.hpp"

namespace td {

enum class GateLabel { U, T1, T2, CZ, CNOT, ISwap, InvISwap };

std::string to_string(GateLabel label);

/**
 * The unitary exp(i * angle * generator). An over-rotation replaces angle by
 * angle + delta_phi and leaves the generator untouched.
 *
 * Sign conventions (n = s+ s-, nbar = s- s+, B = s+_j s-_k + s-_j s+_k):
 *
 *   U      generator -n_j n_k              angle U dt
 *   T1, T2 generator B                     angle t dt
 *   CZ     generator n_j nbar_k            angle pi
 *   CNOT   generator n_j (1 - X_k)         angle pi/2
 *   iSWAP  generator +-B                   angle pi/2
 *
 * so that a Hamiltonian-term gate equals exp(-i H_j dt).
 */
struct Gate {
  GateLabel label = GateLabel::CZ;
  OperatorSum generator;
  double nominal_angle = 0.0;
  std::vector<int> support;
  bool noisy = true;

  int n_qubits() const { return generator.n_qubits(); }
  /// U, T1 and T2 gates implement a Hamiltonian term with a small angle.
  bool is_hamiltonian_term() const;
  /// Set only for CZ, CNOT and iSWAP gates at their nominal Clifford angle.
  std::optional<CliffordGate> clifford() const;
  Eigen::MatrixXcd unitary(double delta_phi = 0.0) const;
};

Gate gate_cz(int n_qubits, int control, int target);
Gate gate_cnot(int n_qubits, int control, int target);
/// sign = +1 for iSWAP, -1 for its inverse.
Gate gate_iswap(int n_qubits, int j, int k, int sign);
Gate gate_interaction(int n_qubits, int j, int k, double u, double dt);
Gate gate_hopping(GateLabel label, int n_qubits, int j, int k, double t, double dt);

enum class Variant { CzChain, CnotChain, ISwapChain };

std::string to_string(Variant v);
Variant variant_from_string(const std::string &name);

/// Energies in units of g.
struct ModelParams {
  double U = 1.0;
  double t1 = 1.0;
  double t2 = 1.0;
};

/// Hamiltonian of the two-site model on four qubits.
OperatorSum model_hamiltonian(const ModelParams &params);

/**
 * One Trotter step in time order: U(1,4), U(2,3), t1(1,2), t1(3,4), t2(2,3),
 * then the block realizing the string hopping t2 (c+_1 c_4 + h.c.). Qubits in
 * the returned gates are 0-based (mode j on qubit j-1). Gates with zero
 * amplitude are omitted.
 */
std::vector<Gate> build_trotter_step(const ModelParams &params, double dt, Variant variant);

struct TrotterProgram {
  ModelParams params;
  Variant variant = Variant::CzChain;
  int n_steps = 1;
  double total_time = 1.0;
  std::vector<Gate> step_gates;

  int n_qubits() const { return 4; }
  double step_time() const { return total_time / n_steps; }
};

TrotterProgram make_program(const ModelParams &params, double total_time, int n_steps, Variant variant);

nlohmann::json to_json(const TrotterProgram &program);

// Chains on qubits 0..m-1 in time order. Gate 0 acts on the far pair
// (m-2, m-1); the following gates walk back to (0, 1).
std::vector<Gate> cnot_chain(int m);
std::vector<Gate> iswap_chain(int m, int sign = +1);

// ---------------------------------------------------------------------------
// Noise

enum class TemporalMode { PerStepIid, QuasiStatic };

std::string to_string(TemporalMode mode);
TemporalMode temporal_mode_from_string(const std::string &name);

struct NoiseModel {
  /// Standard deviation of the over-rotation angle, radians.
  double std_dev = 0.0;
  TemporalMode mode = TemporalMode::PerStepIid;
  std::uint64_t seed = 0;
};

/** Over-rotation angle for every (step, gate) pair of a program. */
class ErrorRealization {
 public:
  ErrorRealization() = default;
  ErrorRealization(int n_steps, int n_gates);

  int n_steps() const { return n_steps_; }
  int n_gates() const { return n_gates_; }
  double at(int step, int gate) const { return values_[index(step, gate)]; }
  double &at(int step, int gate) { return values_[index(step, gate)]; }
  std::span<const double> step(int m) const;

 private:
  std::size_t index(int step, int gate) const;

  int n_steps_ = 0;
  int n_gates_ = 0;
  std::vector<double> values_;
};

/**
 * Draws std_dev * z with z standard normal. Run r uses a Mersenne Twister
 * seeded with seed_seq{seed_lo, seed_hi, r_lo, r_hi} and consumes draws in
 * step-major, gate-minor order; quasi-static runs draw one row and repeat it.
 * Gates marked noiseless still consume a draw so streams do not shift.
 */
ErrorRealization sample_errors(const TrotterProgram &program, const NoiseModel &noise, std::uint64_t run = 0);

// ---------------------------------------------------------------------------
// Statevector application

/**
 * Applies gates of a fixed sequence to statevectors, acting only on each
 * gate's support. Local generators are diagonalized once.
 */
class GateApplier {
 public:
  explicit GateApplier(std::span<const Gate> gates);

  void apply(int gate_index, double delta_phi, Eigen::VectorXcd &psi) const;
  void apply_all(std::span<const double> delta_phi, Eigen::VectorXcd &psi) const;
  int n_gates() const { return static_cast<int>(local_.size()); }

 private:
  struct Local {
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
    double angle = 0.0;
    std::vector<int> offsets;  // state-index offsets of the 2^k local basis states
    std::vector<int> rest;     // base indices with all support bits cleared
  };
  std::vector<Local> local_;
  int n_qubits_ = 0;
};

/// Dense unitary of step m under the realization.
Eigen::MatrixXcd step_unitary(const TrotterProgram &program, const ErrorRealization &realization, int m);

/// Product over a gate list in time order, with per-gate over-rotations.
Eigen::MatrixXcd sequence_unitary(std::span<const Gate> gates, std::span<const double> delta_phi);

/// Calls `visit(m, psi)` with the state after every step m = 1..n_steps.
void run_program(const TrotterProgram &program, const ErrorRealization &realization, Eigen::VectorXcd psi,
                 const std::function<void(int, const Eigen::VectorXcd &)> &visit);

/// States at t = 0 and after every step; the input must be normalized.
std::vector<Eigen::VectorXcd> apply_program(const TrotterProgram &program, const ErrorRealization &realization,
                                            const Eigen::VectorXcd &initial_state);

}  // namespace td
