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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "trotterdisorder/effective.hpp"
#include "trotterdisorder/gates.hpp"
#include "trotterdisorder/pauli.hpp"

namespace td {

enum class Backend { FaultyCircuit, EffectiveHamiltonian, IdealExact };

std::string to_string(Backend backend);
Backend backend_from_string(const std::string &name);

/**
 * Ordered creation from the vacuum. {2, 1} is c+_2 c+_1 |0>: the last entry
 * acts first.
 */
struct InitialState {
  std::vector<int> occupations;

  Eigen::VectorXcd vector(int n_modes) const;
};

/// Site coordinates r_j of modes 1..4; mode 3 sits two sites from mode 1.
std::vector<double> default_positions();

struct ObservableOptions {
  std::vector<double> positions = default_positions();
  /// Off for particle-free states; the sigma2 column is then left as NaN.
  bool sigma2 = true;
  bool keep_states = false;
};

struct Trajectory {
  Backend backend = Backend::IdealExact;
  std::vector<double> times;
  std::vector<double> n1;
  std::vector<double> sigma2;
  std::vector<double> n_total;
  std::vector<Eigen::VectorXcd> states;

  int n_slices() const { return static_cast<int>(times.size()); }
};

/// <n_j> for mode j (1-based), read off the computational basis.
double occupation(const Eigen::VectorXcd &psi, int mode);
double total_occupation(const Eigen::VectorXcd &psi);

/**
 * Spread of the particle distribution, sum_j r_j^2 nt_j - (sum_j r_j nt_j)^2
 * with nt_j = <n_j>/N. Evaluated inside each particle-number sector and
 * weighted by the sector probabilities; the empty sector is left out. Throws
 * DomainError if the state has no weight outside the vacuum.
 */
double spatial_variance(const Eigen::VectorXcd &psi, const std::vector<double> &positions = default_positions());

Trajectory evolve_faulty(const TrotterProgram &program, const ErrorRealization &realization,
                         const Eigen::VectorXcd &psi0, const ObservableOptions &options = {});

/// Step m applies exp(-i (H + dH_m) tau/n).
Trajectory evolve_effective(const OperatorSum &h, const DisorderTrace &trace, const Eigen::VectorXcd &psi0,
                            const ObservableOptions &options = {});

/// exp(-i H tau/n) per step from a single eigendecomposition of H.
Trajectory evolve_ideal(const OperatorSum &h, const Eigen::VectorXcd &psi0, double total_time, int n_steps,
                        const ObservableOptions &options = {});

/// Columns t, n1, sigma2, n_total.
std::string to_csv(const Trajectory &trajectory);
nlohmann::json to_json(const Trajectory &trajectory, const nlohmann::json &metadata = nlohmann::json::object());

}  // namespace td
