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

#include "trotterdisorder/evolve.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>

#include "trotterdisorder/errors.hpp"
#include "trotterdisorder/fermion.hpp"

namespace td {

namespace {

int n_qubits_of(const Eigen::VectorXcd &psi) {
  const auto dim = static_cast<unsigned long>(psi.size());
  if (dim == 0 || !std::has_single_bit(dim)) throw UsageError("state dimension is not a power of two");
  return std::countr_zero(dim);
}

// A qubit in |0> is an occupied mode, so occupied modes are the zero bits.
int occupied_mask(unsigned index, int n) { return static_cast<int>(~index & ((1u << n) - 1)); }

bool is_occupied(int index, int mode, int n) { return ((index >> (n - mode)) & 1) == 0; }

class Recorder {
 public:
  Recorder(Backend backend, double step_time, const ObservableOptions &options) : options_(options) {
    traj_.backend = backend;
    step_time_ = step_time;
  }

  void record(int m, const Eigen::VectorXcd &psi) {
    traj_.times.push_back(m * step_time_);
    traj_.n1.push_back(occupation(psi, 1));
    traj_.sigma2.push_back(options_.sigma2 ? spatial_variance(psi, options_.positions)
                                           : std::numeric_limits<double>::quiet_NaN());
    traj_.n_total.push_back(total_occupation(psi));
    if (options_.keep_states) traj_.states.push_back(psi);
  }

  Trajectory take() { return std::move(traj_); }

 private:
  const ObservableOptions &options_;
  Trajectory traj_;
  double step_time_ = 0.0;
};

void check_state(const Eigen::VectorXcd &psi, int dim) {
  if (psi.size() != dim) throw UsageError("initial state has wrong dimension");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw UsageError("initial state is not normalized");
}

}  // namespace

std::string to_string(Backend backend) {
  switch (backend) {
    case Backend::FaultyCircuit:
      return "faulty_circuit";
    case Backend::EffectiveHamiltonian:
      return "effective_hamiltonian";
    case Backend::IdealExact:
      return "ideal_exact";
  }
  throw InternalError("unknown backend");
}

Backend backend_from_string(const std::string &name) {
  for (Backend b : {Backend::FaultyCircuit, Backend::EffectiveHamiltonian, Backend::IdealExact}) {
    if (to_string(b) == name) return b;
  }
  throw UsageError("unknown backend '" + name + "'");
}

Eigen::VectorXcd InitialState::vector(int n_modes) const {
  const int dim = 1 << n_modes;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(dim - 1) = 1.0;
  for (auto it = occupations.rbegin(); it != occupations.rend(); ++it) {
    if (*it < 1 || *it > n_modes) throw UsageError("initial occupation names a mode outside 1.." + std::to_string(n_modes));
    psi = to_dense(jordan_wigner(*it, Ladder::Create, n_modes), n_modes).matrix * psi;
  }
  const double norm = psi.norm();
  if (norm < 0.5) throw DomainError("initial state vanishes (a mode is created twice)");
  return psi;
}

std::vector<double> default_positions() { return {0.0, 1.0, 2.0, 1.0}; }

double occupation(const Eigen::VectorXcd &psi, int mode) {
  const int n = n_qubits_of(psi);
  if (mode < 1 || mode > n) throw UsageError("mode outside register");
  double p = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    if (is_occupied(i, mode, n)) p += std::norm(psi(i));
  }
  return p;
}

double total_occupation(const Eigen::VectorXcd &psi) {
  const int n = n_qubits_of(psi);
  double total = 0.0;
  for (int i = 0; i < psi.size(); ++i) total += std::norm(psi(i)) * std::popcount(static_cast<unsigned>(occupied_mask(i, n)));
  return total;
}

double spatial_variance(const Eigen::VectorXcd &psi, const std::vector<double> &positions) {
  const int n = n_qubits_of(psi);
  if (static_cast<int>(positions.size()) != n) throw UsageError("one position per mode required");

  // Per sector N: probability and unnormalized <n_j>.
  std::vector<double> weight(n + 1, 0.0);
  std::vector<std::vector<double>> occ(n + 1, std::vector<double>(n, 0.0));
  for (int i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi(i));
    if (p == 0.0) continue;
    const int mask = occupied_mask(i, n);
    const int count = std::popcount(static_cast<unsigned>(mask));
    weight[count] += p;
    for (int j = 0; j < n; ++j) {
      if (is_occupied(i, j + 1, n)) occ[count][j] += p;
    }
  }

  double filled = 0.0;
  double sum = 0.0;
  for (int count = 1; count <= n; ++count) {
    if (weight[count] <= 0.0) continue;
    double first = 0.0;
    double second = 0.0;
    for (int j = 0; j < n; ++j) {
      const double nt = occ[count][j] / (weight[count] * count);
      first += positions[j] * nt;
      second += positions[j] * positions[j] * nt;
    }
    sum += weight[count] * (second - first * first);
    filled += weight[count];
  }
  if (filled < 1e-14) throw DomainError("spatial variance is undefined without particles");
  return sum / filled;
}

Trajectory evolve_faulty(const TrotterProgram &program, const ErrorRealization &realization,
                         const Eigen::VectorXcd &psi0, const ObservableOptions &options) {
  Recorder rec(Backend::FaultyCircuit, program.step_time(), options);
  rec.record(0, psi0);
  run_program(program, realization, psi0, [&](int m, const Eigen::VectorXcd &psi) { rec.record(m, psi); });
  return rec.take();
}

Trajectory evolve_effective(const OperatorSum &h, const DisorderTrace &trace, const Eigen::VectorXcd &psi0,
                            const ObservableOptions &options) {
  if (!h.is_hermitian(1e-12)) throw DomainError("Hamiltonian is not Hermitian");
  const int n = h.n_qubits();
  check_state(psi0, 1 << n);
  const Eigen::MatrixXcd hd = to_dense(h, n).matrix;
  const double dt = trace.step_time();

  Recorder rec(Backend::EffectiveHamiltonian, dt, options);
  Eigen::VectorXcd psi = psi0;
  rec.record(0, psi);
  for (int m = 0; m < trace.n_steps(); ++m) {
    const Eigen::MatrixXcd dh = trace.dense_delta_h(m);
    if (dh.rows() != hd.rows()) throw UsageError("disorder acts on a different register");
    if ((dh - dh.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + dh.cwiseAbs().maxCoeff())) {
      throw DomainError("disorder of step " + std::to_string(m) + " is not Hermitian");
    }
    psi = exp_hermitian(hd + dh, -dt) * psi;
    rec.record(m + 1, psi);
  }
  return rec.take();
}

Trajectory evolve_ideal(const OperatorSum &h, const Eigen::VectorXcd &psi0, double total_time, int n_steps,
                        const ObservableOptions &options) {
  if (n_steps < 1) throw UsageError("need at least one step");
  if (!h.is_hermitian(1e-12)) throw DomainError("Hamiltonian is not Hermitian");
  const int n = h.n_qubits();
  check_state(psi0, 1 << n);
  const double dt = total_time / n_steps;
  const Eigen::MatrixXcd step = exp_hermitian(to_dense(h, n).matrix, -dt);

  Recorder rec(Backend::IdealExact, dt, options);
  Eigen::VectorXcd psi = psi0;
  rec.record(0, psi);
  for (int m = 1; m <= n_steps; ++m) {
    psi = step * psi;
    rec.record(m, psi);
  }
  return rec.take();
}

std::string to_csv(const Trajectory &trajectory) {
  std::string out = "t,n1,sigma2,n_total\n";
  char line[128];
  for (int i = 0; i < trajectory.n_slices(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", trajectory.times[i], trajectory.n1[i],
                  trajectory.sigma2[i], trajectory.n_total[i]);
    out += line;
  }
  return out;
}

nlohmann::json to_json(const Trajectory &trajectory, const nlohmann::json &metadata) {
  return {{"backend", to_string(trajectory.backend)},
          {"metadata", metadata},
          {"t", trajectory.times},
          {"n1", trajectory.n1},
          {"sigma2", trajectory.sigma2},
          {"n_total", trajectory.n_total}};
}

}  // namespace td
