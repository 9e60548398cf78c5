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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "trotterdisorder/effective.hpp"
#include "trotterdisorder/errors.hpp"

using namespace td;

namespace {

const Variant kVariants[] = {Variant::CzChain, Variant::CnotChain, Variant::ISwapChain};

OperatorSum nbar(int n, int q) { return OperatorSum::identity(n) - excitation(n, q); }

// Dense Ad_W(A) with W the product of the later large-angle gates.
Eigen::MatrixXcd dense_pushed(const std::vector<Gate> &seq, std::size_t i) {
  Eigen::MatrixXcd a = to_dense(seq[i].generator).matrix;
  for (std::size_t j = i + 1; j < seq.size(); ++j) {
    if (seq[j].is_hamiltonian_term()) continue;
    const Eigen::MatrixXcd u = seq[j].unitary();
    a = u * a * u.adjoint();
  }
  return a;
}

}  // namespace

TEST_CASE("case 1 terms") {
  const double n_over_tau = 20.0;
  const double dphi = 0.013;
  const Gate u = gate_interaction(4, 0, 3, 1.0, 0.05);
  CHECK(derive_case1(u, dphi, n_over_tau)
            .approx_equal(excitation(4, 0) * excitation(4, 3) * Complex(n_over_tau * dphi)));
  const Gate t1 = gate_hopping(GateLabel::T1, 4, 0, 1, 1.0, 0.05);
  CHECK(derive_case1(t1, dphi, n_over_tau).approx_equal(oracle::hop(4, 0, 1) * Complex(-n_over_tau * dphi)));
  CHECK(derive_case1(t1, 0.0, n_over_tau).empty());
  CHECK_THROWS_AS(derive_case1(gate_cz(4, 0, 1), dphi, n_over_tau), UsageError);
}

TEST_CASE("per-gate templates of the cz_chain step") {
  const int n = 4;
  const double dt = 0.05;
  const auto step = build_trotter_step({1.0, 1.0, 1.0}, dt, Variant::CzChain);
  const auto templates = disorder_templates(step, 1.0 / dt);
  REQUIRE(templates.size() == 10);
  const Complex k = 1.0 / dt;
  const std::vector<OperatorSum> expected = {
      excitation(n, 0) * excitation(n, 3) * k,   // U(1,4)
      excitation(n, 1) * excitation(n, 2) * k,   // U(2,3)
      oracle::hop(n, 0, 1) * -k,                 // t1(1,2)
      oracle::hop(n, 2, 3) * -k,                 // t1(3,4)
      oracle::hop(n, 1, 2) * -k,                 // t2(2,3)
      excitation(n, 0) * nbar(n, 1) * -k,        // CZ
      excitation(n, 0) * nbar(n, 2) * -k,        // CZ
      oracle::string_hop() * -k,                 // t2 inside the string block
      excitation(n, 0) * nbar(n, 2) * -k,        // CZ
      excitation(n, 0) * nbar(n, 1) * -k,        // CZ
  };
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK_MESSAGE(templates[i].per_radian.approx_equal(expected[i]), "gate " << i);
    CHECK_FALSE(templates[i].dense_fallback);
    CHECK(templates[i].source.gate_index == static_cast<int>(i));
  }
  CHECK(templates[7].source.label == GateLabel::T2);
  CHECK(templates[7].source.support == std::vector<int>{0, 3});
}

TEST_CASE("templates agree with dense conjugation") {
  for (Variant v : kVariants) {
    const auto step = build_trotter_step({1.0, 0.6, 0.9}, 0.1, v);
    const auto templates = disorder_templates(step, 10.0);
    for (std::size_t i = 0; i < step.size(); ++i) {
      const Eigen::MatrixXcd expect = -10.0 * dense_pushed(step, i);
      CHECK((to_dense(templates[i].per_radian).matrix - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("inner string gate error is a long-range hopping in every variant") {
  for (Variant v : kVariants) {
    const auto step = build_trotter_step({1.0, 1.0, 1.0}, 0.05, v);
    std::size_t inner = 0;
    for (std::size_t i = 0; i < step.size(); ++i)
      if (step[i].label == GateLabel::T2 && step[i].support == std::vector<int>{0, 3}) inner = i;
    std::vector<double> angles(step.size(), 0.0);
    angles[inner] = 0.02;
    CHECK(derive_case2(step, angles, 20.0).approx_equal(oracle::string_hop() * Complex(-20.0 * 0.02)));
  }
}

TEST_CASE("dense fallback for a non-Clifford large-angle gate") {
  Gate partial = gate_cz(2, 0, 1);
  partial.nominal_angle = 1.0;
  CHECK_FALSE(partial.clifford().has_value());
  const std::vector<Gate> seq = {gate_hopping(GateLabel::T1, 2, 0, 1, 1.0, 0.1), partial};
  const auto templates = disorder_templates(seq, 1.0);
  CHECK(templates[0].dense_fallback);
  CHECK_FALSE(templates[1].dense_fallback);
  const Eigen::MatrixXcd u = partial.unitary();
  const Eigen::MatrixXcd expect = -(u * to_dense(seq[0].generator).matrix * u.adjoint());
  CHECK((to_dense(templates[0].per_radian).matrix - expect).norm() < 1e-12);
}

TEST_CASE("disorder trace") {
  const TrotterProgram prog = make_program({1.0, 1.0, 1.0}, 5.0, 50, Variant::ISwapChain);
  const ErrorRealization zero(prog.n_steps, static_cast<int>(prog.step_gates.size()));
  const DisorderTrace quiet = derive_trace(prog, zero);
  for (int m = 0; m < prog.n_steps; ++m) CHECK(quiet.delta_h(m).empty());

  const ErrorRealization r = sample_errors(prog, {0.05, TemporalMode::PerStepIid, 17});
  const DisorderTrace trace = derive_trace(prog, r);
  for (int m = 0; m < prog.n_steps; ++m) {
    const OperatorSum dh = trace.delta_h(m);
    CHECK(dh.is_hermitian(1e-12));
    CHECK((to_dense(dh).matrix - trace.dense_delta_h(m)).norm() < 1e-12);
    double bound = 0.0;
    for (double a : r.step(m)) bound += std::abs(a);
    CHECK(oracle::opnorm(trace.dense_delta_h(m)) <= bound / prog.step_time() + 1e-12);
  }

  const int expand[] = {0, 3};
  const nlohmann::json j = trace.to_json(expand);
  CHECK(j["templates"].size() == prog.step_gates.size());
  CHECK(j["delta_phi"].size() == 50);
  CHECK(j["steps"].size() == 2);
  CHECK(j["templates"][0]["label"] == "U");

  CHECK_THROWS_AS(derive_trace(prog, ErrorRealization(3, 2)), UsageError);
}

TEST_CASE("hermitian disorder for many realizations") {
  for (Variant v : kVariants) {
    const TrotterProgram prog = make_program({1.0, 1.0, 1.0}, 1.0, 1000, v);
    const DisorderTrace trace = derive_trace(prog, sample_errors(prog, {0.01, TemporalMode::PerStepIid, 5}));
    int bad = 0;
    for (int m = 0; m < prog.n_steps; ++m)
      if (!trace.delta_h(m).is_hermitian(1e-12)) ++bad;
    CHECK(bad == 0);
  }
}

TEST_CASE("programs without string block follow the direct formula") {
  const TrotterProgram prog = make_program({0.8, 1.3, 0.0}, 2.0, 40, Variant::CzChain);
  const ErrorRealization r = sample_errors(prog, {0.02, TemporalMode::PerStepIid, 1});
  const DisorderTrace trace = derive_trace(prog, r);
  const double k = prog.n_steps / prog.total_time;
  for (int m = 0; m < prog.n_steps; ++m) {
    OperatorSum expect = excitation(4, 0) * excitation(4, 3) * Complex(k * r.at(m, 0)) +
                         excitation(4, 1) * excitation(4, 2) * Complex(k * r.at(m, 1)) -
                         oracle::hop(4, 0, 1) * Complex(k * r.at(m, 2)) - oracle::hop(4, 2, 3) * Complex(k * r.at(m, 3));
    CHECK(trace.delta_h(m).approx_equal(expect, 1e-12));
  }
}

TEST_CASE("faulty step equals the disordered step to second order") {
  const Eigen::MatrixXcd h = to_dense(oracle::hamiltonian(1.0, 1.0, 1.0)).matrix;
  for (Variant v : kVariants) {
    // Same standard-normal draws at every step size; angles scale with dt.
    std::vector<double> worst;
    for (double dt : {0.1, 0.05, 0.025}) {
      const TrotterProgram prog = make_program({1.0, 1.0, 1.0}, dt * 20, 20, v);
      const ErrorRealization r = sample_errors(prog, {0.5 * dt, TemporalMode::PerStepIid, 99});
      const DisorderTrace trace = derive_trace(prog, r);
      double w = 0.0;
      for (int m = 0; m < prog.n_steps; ++m) {
        const Eigen::MatrixXcd eff = oracle::expm_minus_i(h + trace.dense_delta_h(m), dt);
        w = std::max(w, oracle::phase_distance(step_unitary(prog, r, m), eff));
      }
      worst.push_back(w);
    }
    CHECK_MESSAGE(worst[0] / worst[1] >= 3.5, to_string(v) << " " << worst[0] << " " << worst[1]);
    CHECK_MESSAGE(worst[1] / worst[2] >= 3.5, to_string(v) << " " << worst[1] << " " << worst[2]);
  }
}

TEST_CASE("disorder grows linearly with the number of steps") {
  for (Variant v : kVariants) {
    const TrotterProgram a = make_program({1.0, 1.0, 1.0}, 10.0, 100, v);
    const TrotterProgram b = make_program({1.0, 1.0, 1.0}, 10.0, 200, v);
    const ErrorRealization ra = sample_errors(a, {0.02, TemporalMode::QuasiStatic, 4});
    const ErrorRealization rb = sample_errors(b, {0.02, TemporalMode::QuasiStatic, 4});
    const double na = oracle::opnorm(derive_trace(a, ra).dense_delta_h(0));
    const double nb = oracle::opnorm(derive_trace(b, rb).dense_delta_h(0));
    CHECK(std::abs(nb - 2.0 * na) < 1e-12);
  }
}

TEST_CASE("CNOT chain gives the nested parity operator") {
  for (int m = 2; m <= 6; ++m) {
    const auto chain = cnot_chain(m);
    const auto templates = disorder_templates(chain, 1.0);
    const OperatorSum parity_form =
        (OperatorSum::identity(m) - pauli_op(m, m - 1, Pauli::X)) * nested_parity(m, m - 2) * Complex(-1.0);
    CHECK(templates[0].per_radian.approx_equal(parity_form, 1e-12));
    const Eigen::MatrixXcd dense = -dense_pushed(chain, 0);
    CHECK((to_dense(templates[0].per_radian).matrix - dense).norm() < 1e-12);
  }
  // The recursion is the parity of the lower excitations.
  const OperatorSum s = nested_parity(3, 2);
  const Eigen::MatrixXcd d = to_dense(s).matrix;
  for (int b = 0; b < 8; ++b) {
    const int occupied = 3 - __builtin_popcount(b);
    CHECK(std::abs(d(b, b) - Complex(occupied % 2)) < 1e-12);
  }
}

TEST_CASE("iSWAP chain gives a two-term hopping") {
  for (int sign : {+1, -1}) {
    for (int m = 2; m <= 6; ++m) {
      const auto chain = iswap_chain(m, sign);
      const auto templates = disorder_templates(chain, 1.0);
      const Eigen::MatrixXcd dense = -dense_pushed(chain, 0);
      CHECK((to_dense(templates[0].per_radian).matrix - dense).norm() < 1e-12);

      const DisorderClassification c = classify(templates[0].per_radian);
      CHECK(c.physical_part.size() == 2);
      CHECK(c.hopping_terms == 2);
      CHECK(c.unphysical_residual.empty());

      // -s (-s i)^{m-2} (c+_m c_1 + (-1)^{m-2} c+_1 c_m); for the inverse
      // chain this is i^{m-2} (...).
      Complex phase = -double(sign);
      for (int k = 0; k < m - 2; ++k) phase *= Complex(0, -sign);
      const LadderOp a[2] = {{m, true}, {1, false}};
      const LadderOp b[2] = {{1, true}, {m, false}};
      const FermionExpression want = FermionExpression::from_word(m, a, phase) +
                                     FermionExpression::from_word(m, b, phase * ((m - 2) % 2 ? -1.0 : 1.0));
      CHECK_MESSAGE(c.physical_part.approx_equal(want), "m=" << m << " sign=" << sign);
    }
  }
}

TEST_CASE("classification of full step disorder") {
  const Eigen::MatrixXcd n_total =
      to_dense(excitation(4, 0) + excitation(4, 1) + excitation(4, 2) + excitation(4, 3)).matrix;
  for (Variant v : kVariants) {
    const TrotterProgram prog = make_program({1.0, 1.0, 1.0}, 1.0, 10, v);
    const DisorderTrace trace = derive_trace(prog, sample_errors(prog, {0.02, TemporalMode::PerStepIid, 12}));
    const OperatorSum dh = trace.delta_h(0);
    const DisorderClassification c = classify(dh);
    const Eigen::MatrixXcd d = to_dense(dh).matrix;
    const bool conserves = (d * n_total - n_total * d).norm() < 1e-12;
    CHECK(conserves == c.unphysical_residual.empty());
    // The two parts add up to the input.
    CHECK((c.physical_part.realize() + c.unphysical_residual).approx_equal(dh, 1e-12));
    if (v == Variant::CnotChain) {
      CHECK_FALSE(conserves);
    } else {
      CHECK(conserves);
      CHECK(c.hopping_terms > 0);
      CHECK(c.density_terms > 0);
      // Pushing the iSWAP errors through CZ(2,3) leaves density-assisted
      // hoppings c+_j n_k c_l, which conserve particle number.
      if (v == Variant::CzChain) CHECK(c.other_conserving_terms == 0);
    }
  }
}
