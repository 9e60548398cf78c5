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

#include "doctest.h"
#include "oracles.hpp"
#include "trotterdisorder/effective.hpp"
#include "trotterdisorder/errors.hpp"
#include "trotterdisorder/evolve.hpp"
#include "trotterdisorder/gates.hpp"

using namespace td;

namespace {

const Eigen::VectorXcd kPair = InitialState{{2, 1}}.vector(4);

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
  REQUIRE(a.size() == b.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("ordered creation carries the fermionic sign") {
  // c+_2 c+_1 |0> picks up -1 from the string of c+_2 on the occupied mode 1.
  const Eigen::VectorXcd a = InitialState{{2, 1}}.vector(4);
  const Eigen::VectorXcd b = InitialState{{1, 2}}.vector(4);
  const Eigen::VectorXcd ref = oracle::occupation_state(4, {0, 1});
  CHECK((a + ref).norm() < 1e-14);
  CHECK((b - ref).norm() < 1e-14);
  CHECK(InitialState{}.vector(4)(15) == Complex(1.0));
  CHECK_THROWS_AS((InitialState{{1, 1}}.vector(4)), DomainError);
  CHECK_THROWS_AS(InitialState{{5}}.vector(4), UsageError);
}

TEST_CASE("spatial variance of simple distributions") {
  CHECK(spatial_variance(oracle::occupation_state(4, {0})) == doctest::Approx(0.0));
  CHECK(spatial_variance(oracle::occupation_state(4, {2})) == doctest::Approx(0.0));

  const Eigen::VectorXcd split = (oracle::occupation_state(4, {0}) + oracle::occupation_state(4, {2})) / std::sqrt(2.0);
  CHECK(spatial_variance(split) == doctest::Approx(1.0).epsilon(1e-14));

  // Uniform weight over all modes gives 1/2 in every sector.
  Eigen::VectorXcd uniform = Eigen::VectorXcd::Constant(16, 0.25);
  CHECK(spatial_variance(uniform) == doctest::Approx(0.5).epsilon(1e-14));

  // Two particles on modes 1 and 3: r = {0, 2}, mean 1, variance 1.
  CHECK(spatial_variance(oracle::occupation_state(4, {0, 2})) == doctest::Approx(1.0));

  CHECK_THROWS_AS(spatial_variance(oracle::occupation_state(4, {})), DomainError);
  CHECK_THROWS_AS((spatial_variance(split, {0.0, 1.0})), UsageError);
}

TEST_CASE("spatial variance ignores the empty sector") {
  const Eigen::VectorXcd mix = (oracle::occupation_state(4, {}) + oracle::occupation_state(4, {0, 2})) / std::sqrt(2.0);
  CHECK(spatial_variance(mix) == doctest::Approx(1.0));
}

TEST_CASE("ideal evolution conserves particle number and energy") {
  const OperatorSum h = model_hamiltonian({1, 1, 1});
  ObservableOptions opts;
  opts.keep_states = true;
  const Trajectory tr = evolve_ideal(h, kPair, 20.0, 400, opts);
  REQUIRE(tr.n_slices() == 401);
  CHECK(tr.times.back() == doctest::Approx(20.0));
  const Eigen::MatrixXcd hd = to_dense(h, 4).matrix;
  const double e0 = kPair.dot(hd * kPair).real();
  for (int i = 0; i < tr.n_slices(); ++i) {
    CHECK(tr.n_total[i] == doctest::Approx(2.0).epsilon(1e-12));
    const Complex e = tr.states[i].dot(hd * tr.states[i]);
    CHECK(std::abs(e.real() - e0) < 1e-10);
    CHECK(std::abs(e.imag()) < 1e-10);
    CHECK(std::abs(tr.states[i].norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("ideal evolution matches a Taylor-series propagator") {
  const OperatorSum h = model_hamiltonian({1.3, 0.7, 0.9});
  ObservableOptions opts;
  opts.keep_states = true;
  const Trajectory tr = evolve_ideal(h, kPair, 5.0, 50, opts);
  const Eigen::MatrixXcd hd = to_dense(oracle::hamiltonian(1.3, 0.7, 0.9), 4).matrix;
  const Eigen::VectorXcd ref = oracle::expm_minus_i(hd, 5.0) * kPair;
  CHECK((tr.states.back() - ref).norm() < 1e-10);
}

TEST_CASE("ideal evolution is independent of the slicing") {
  const OperatorSum h = model_hamiltonian({1, 1, 1});
  const Trajectory coarse = evolve_ideal(h, kPair, 30.0, 300);
  const Trajectory fine = evolve_ideal(h, kPair, 30.0, 600);
  for (int i = 0; i < coarse.n_slices(); ++i) {
    CHECK(std::abs(coarse.n1[i] - fine.n1[2 * i]) < 1e-10);
    CHECK(std::abs(coarse.sigma2[i] - fine.sigma2[2 * i]) < 1e-10);
  }
}

TEST_CASE("noiseless circuit tracks the ideal evolution within Trotter error") {
  // From c+_2 c+_1 |0> the step happens to be exact for n1, so start from
  // modes 1 and 3 where the Trotter error is visible.
  const ModelParams p{1, 1, 1};
  const Eigen::VectorXcd psi = InitialState{{1, 3}}.vector(4);
  for (Variant v : {Variant::CzChain, Variant::CnotChain, Variant::ISwapChain}) {
    CAPTURE(to_string(v));
    double previous = 0;
    for (int n : {200, 400, 800}) {
      const TrotterProgram prog = make_program(p, 10.0, n, v);
      const Trajectory f = evolve_faulty(prog, ErrorRealization(n, static_cast<int>(prog.step_gates.size())), psi);
      const Trajectory i = evolve_ideal(model_hamiltonian(p), psi, 10.0, n);
      REQUIRE(f.n_slices() == n + 1);
      const double err = max_abs_diff(f.n1, i.n1);
      CHECK(err > 1e-6);
      CHECK(err < 0.05);
      // First-order Trotter: halving the step roughly halves the error.
      if (previous > 0) CHECK(err < 0.6 * previous);
      previous = err;
    }
  }
}

TEST_CASE("faulty runs are reproducible") {
  const TrotterProgram prog = make_program({1, 1, 1}, 10.0, 200, Variant::CzChain);
  const NoiseModel noise{0.025, TemporalMode::PerStepIid, 99};
  const Trajectory a = evolve_faulty(prog, sample_errors(prog, noise, 3), kPair);
  const Trajectory b = evolve_faulty(prog, sample_errors(prog, noise, 3), kPair);
  CHECK(to_csv(a) == to_csv(b));
  const Trajectory c = evolve_faulty(prog, sample_errors(prog, noise, 4), kPair);
  CHECK(to_csv(a) != to_csv(c));
}

TEST_CASE("zero disorder reduces the effective backend to exact slices") {
  const ModelParams p{1, 1, 1};
  const TrotterProgram prog = make_program(p, 10.0, 100, Variant::ISwapChain);
  const ErrorRealization zero(100, static_cast<int>(prog.step_gates.size()));
  const Trajectory e = evolve_effective(model_hamiltonian(p), derive_trace(prog, zero), kPair);
  const Trajectory i = evolve_ideal(model_hamiltonian(p), kPair, 10.0, 100);
  CHECK(e.backend == Backend::EffectiveHamiltonian);
  CHECK(max_abs_diff(e.n1, i.n1) < 1e-12);
  CHECK(max_abs_diff(e.sigma2, i.sigma2) < 1e-12);
}

TEST_CASE("effective and faulty states stay close, with linear accumulation") {
  const ModelParams p{1, 1, 1};
  const double dt = 0.05;
  const int n = 200;
  for (Variant v : {Variant::CzChain, Variant::CnotChain, Variant::ISwapChain}) {
    CAPTURE(to_string(v));
    const TrotterProgram prog = make_program(p, n * dt, n, v);
    const ErrorRealization r = sample_errors(prog, {0.5 * dt, TemporalMode::PerStepIid, 7});
    ObservableOptions opts;
    opts.keep_states = true;
    const Trajectory f = evolve_faulty(prog, r, kPair, opts);
    const Trajectory e = evolve_effective(model_hamiltonian(p), derive_trace(prog, r), kPair, opts);

    // Per-step constant from the dense step comparison.
    const DisorderTrace trace = derive_trace(prog, r);
    const Eigen::MatrixXcd hd = to_dense(model_hamiltonian(p), 4).matrix;
    double c = 0;
    for (int m = 0; m < n; m += 10) {
      const Eigen::MatrixXcd eff = oracle::expm_minus_i(hd + trace.dense_delta_h(m), dt);
      c = std::max(c, oracle::phase_distance(step_unitary(prog, r, m), eff) / (dt * dt));
    }
    for (int m = 1; m <= n; ++m) {
      const double overlap = std::abs(f.states[m].dot(e.states[m]));
      CHECK(overlap >= 1.0 - c * dt * dt * m);
      CHECK(std::abs(f.n1[m] - e.n1[m]) <= 10 * c * dt * dt * m);
    }
  }
}

TEST_CASE("backend agreement over many realizations") {
  const ModelParams p{1, 1, 1};
  const double dt = 0.05;
  const int n = 100;
  const TrotterProgram prog = make_program(p, n * dt, n, Variant::CzChain);
  const Eigen::MatrixXcd hd = to_dense(model_hamiltonian(p), 4).matrix;
  for (std::uint64_t run = 0; run < 20; ++run) {
    const ErrorRealization r = sample_errors(prog, {0.5 * dt, TemporalMode::PerStepIid, 2024}, run);
    const DisorderTrace trace = derive_trace(prog, r);
    double c = 0;
    for (int m = 0; m < n; m += 25) {
      c = std::max(c, phase_invariant_distance(step_unitary(prog, r, m), exp_hermitian(hd + trace.dense_delta_h(m), -dt)) /
                          (dt * dt));
    }
    const Trajectory f = evolve_faulty(prog, r, kPair);
    const Trajectory e = evolve_effective(model_hamiltonian(p), trace, kPair);
    for (int m = 1; m <= n; ++m) CHECK(std::abs(f.n1[m] - e.n1[m]) <= 10 * c * dt * dt * m);
  }
}

TEST_CASE("trajectory export") {
  const Trajectory tr = evolve_ideal(model_hamiltonian({1, 1, 1}), kPair, 1.0, 4);
  const std::string csv = to_csv(tr);
  CHECK(csv.rfind("t,n1,sigma2,n_total\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const nlohmann::json j = to_json(tr, {{"seed", 5}});
  CHECK(j["backend"] == "ideal_exact");
  CHECK(j["metadata"]["seed"] == 5);
  CHECK(j["n1"].size() == 5);
  CHECK(backend_from_string("faulty_circuit") == Backend::FaultyCircuit);
  CHECK_THROWS_AS(backend_from_string("nope"), UsageError);
}

TEST_CASE("bad inputs are rejected") {
  const OperatorSum h = model_hamiltonian({1, 1, 1});
  CHECK_THROWS_AS(evolve_ideal(h, kPair, 1.0, 0), UsageError);
  CHECK_THROWS_AS(evolve_ideal(h, Eigen::VectorXcd::Zero(16), 1.0, 4), UsageError);
  CHECK_THROWS_AS(evolve_ideal(h, Eigen::VectorXcd::Ones(8) / std::sqrt(8.0), 1.0, 4), UsageError);
  OperatorSum bad = h + pauli_op(4, 0, Pauli::Z, Complex(0, 1));
  CHECK_THROWS_AS(evolve_ideal(bad, kPair, 1.0, 4), DomainError);
}
