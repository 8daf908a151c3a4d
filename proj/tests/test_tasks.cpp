// Copyright 2026 The qpnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qpnn/tasks.hpp"

using namespace qpnn;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double max_abs(const Eigen::MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

TEST_SUITE("tasks") {

TEST_CASE("split_seed is deterministic and separates indices") {
  CHECK(split_seed(7, 3) == split_seed(7, 3));
  CHECK(split_seed(7, 3) != split_seed(7, 4));
  CHECK(split_seed(7, 3) != split_seed(8, 3));
}

TEST_CASE("make_noon_state examples") {
  const FockState one = make_noon_state(1, 0, 1, 2);
  CHECK(std::abs(one.amplitude(std::vector<int>{1, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(one.amplitude(std::vector<int>{0, 1}) - 1.0 / std::sqrt(2.0)) < 1e-15);

  const FockState three = make_noon_state(3, 0, 1, 4);
  CHECK(std::abs(three.amplitude(std::vector<int>{3, 0, 0, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(three.amplitude(std::vector<int>{0, 3, 0, 0}) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(three.squared_norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(three.is_normalized());

  CHECK_THROWS(make_noon_state(2, 0, 4, 4));
  CHECK_THROWS(make_noon_state(0, 0, 1, 2));
}

TEST_CASE("sample_haar_state") {
  const FockState vac = sample_haar_state(enumerate_basis(3, 0), 1);
  CHECK(std::abs(std::abs(vac.single_sector().amplitudes[0]) - 1.0) < 1e-14);

  auto b = enumerate_basis(2, 5);  // size 6
  const FockState a1 = sample_haar_state(b, 9);
  const FockState a2 = sample_haar_state(b, 9);
  CHECK((a1.single_sector().amplitudes.array() == a2.single_sector().amplitudes.array()).all());
  CHECK(a1.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));

  // <|a_0|^2> = 1/d, Var = 2/(d(d+1)) - 1/d^2 with d = 6.
  const int samples = 10000;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += std::norm(sample_haar_state(b, 5000 + k).single_sector().amplitudes[0]);
  const double se = std::sqrt((2.0 / 42.0 - 1.0 / 36.0) / samples);
  CHECK(std::abs(sum / samples - 1.0 / 6.0) < 3.0 * se);
}

TEST_CASE("binomial_code examples") {
  const CodeSpec c = binomial_code(3);
  CHECK(c.photons == 5);
  const double q = 0.25;
  CHECK(std::abs(c.zero.amplitude(std::vector<int>{0, 5}) - q) < 1e-15);
  CHECK(std::abs(c.zero.amplitude(std::vector<int>{2, 3}) - q * std::sqrt(10.0)) < 1e-15);
  CHECK(std::abs(c.zero.amplitude(std::vector<int>{4, 1}) - q * std::sqrt(5.0)) < 1e-15);
  CHECK(std::abs(c.one.amplitude(std::vector<int>{1, 4}) - q * std::sqrt(5.0)) < 1e-15);
  CHECK(std::abs(c.one.amplitude(std::vector<int>{3, 2}) - q * std::sqrt(10.0)) < 1e-15);
  CHECK(std::abs(c.one.amplitude(std::vector<int>{5, 0}) - q) < 1e-15);
  CHECK(std::abs(inner_product(c.zero, c.one)) == 0.0);
  CHECK_THROWS_AS(binomial_code(1), std::invalid_argument);
}

TEST_CASE("binomial codes are orthonormal with parity-consistent support") {
  for (int n = 2; n <= 5; ++n) {
    const CodeSpec c = binomial_code(n);
    const int p = 2 * n - 1;
    CHECK(c.zero.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.one.squared_norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner_product(c.zero, c.one)) < 1e-12);
    const auto& basis = *c.zero.single_sector().basis;
    CHECK(basis.photon_number() == p);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const int first = basis.occupation(k, 0);
      const double z = std::abs(c.zero.single_sector().amplitudes[k]);
      const double o = std::abs(c.one.single_sector().amplitudes[k]);
      if (first % 2 == 0) {
        CHECK(o == 0.0);
        CHECK(z * z == doctest::Approx(binom(p, first) / std::pow(2.0, 2 * (n - 1))));
      } else {
        CHECK(z == 0.0);
        CHECK(o * o == doctest::Approx(binom(p, first) / std::pow(2.0, 2 * (n - 1))));
      }
    }
  }
}

TEST_CASE("logical_gate_target examples") {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  CHECK(max_abs(logical_gate_target(LogicalGate::kH) - h) < 1e-15);
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Identity();
  s(1, 1) = kI;
  CHECK(max_abs(logical_gate_target(LogicalGate::kS) - s) < 1e-15);
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
  t(1, 1) = std::exp(kI * kPi / 4.0);
  CHECK(max_abs(logical_gate_target(LogicalGate::kT) - t) < 1e-15);
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1.0;
  CHECK(max_abs(logical_gate_target(LogicalGate::kCZ) - cz) < 1e-15);
  CHECK(parse_logical_gate("H") == LogicalGate::kH);
  CHECK_THROWS(parse_logical_gate("X"));
}

TEST_CASE("state preparation with the target equal to the input") {
  TrainConfig cfg;
  const FockState in = first_modes_input(3, 2);
  const TaskResult r = run_state_prep(in, in, 1, cfg);
  CHECK(r.fidelity > 0.999);
  CHECK_THROWS(run_state_prep(first_modes_input(3, 1), in, 1, cfg));
}

TEST_CASE("identity channel with an identity network") {
  const CodeSpec code = binomial_code(2);
  Circuit c(2);
  c.set_trainable(c.add_network(NetworkParams::identity(2, 3), {0, 1}));
  const Objective obj = Objective::channel({code.zero, code.one}, {code.zero, code.one},
                                           Eigen::MatrixXcd::Identity(2, 2));
  CHECK(evaluate(c, obj, false).fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("short encoding and gate runs improve on their start") {
  TrainConfig cfg;
  cfg.iterations = 400;
  const CodeSpec code = binomial_code(2);
  const TaskResult enc = run_encoding(code, 3, cfg);
  CHECK(enc.fidelity > enc.trace.fidelity.front());
  CHECK(enc.fidelity > 0.95);
  const TaskResult h = run_logical_gate(code, LogicalGate::kH, 3, cfg);
  CHECK(h.fidelity > 0.95);
}

TEST_CASE("CZ circuit with exact inverse decoders and no nonlinearity is the identity") {
  const CodeSpec code = binomial_code(2);
  const auto basis = cz_logical_basis(code);
  REQUIRE(basis.size() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      CHECK(std::abs(inner_product(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)) < 1e-12);
    }
  }
  for (int seed = 0; seed < 5; ++seed) {
    const NetworkParams e = NetworkParams::random(2, 3, 900 + seed);
    Circuit c = cz_circuit({e, false}, {e, true}, {0.0, 0.0});
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(inner_product(basis[k], apply_circuit(c, basis[k])) - 1.0) < 1e-9);
    }
    // Scored against diag(1, 1, 1, -1): |Tr|^2 / 16 = 1/4, so F = (4 / 4 + 1) / 5.
    CHECK(run_logical_cz({e, false}, {e, true}, code, {0.0, 0.0}) ==
          doctest::Approx(0.4).epsilon(1e-9));
  }
}

TEST_CASE("CZ phases from forward simulation of a trained circuit") {
  TrainConfig cfg;
  cfg.iterations = 3000;
  const CodeSpec code = binomial_code(2);
  const TaskResult enc = train_cz_encoder(code, 5, cfg, 2);
  REQUIRE(enc.fidelity > 0.999);
  // Exact inverse of the encoder as the decoder isolates the nonlinear action.
  Circuit c = cz_circuit({enc.params, false}, {enc.params, true}, {0.0, kPi});
  const auto basis = cz_logical_basis(code);
  std::vector<Complex> amp(4);
  for (int k = 0; k < 4; ++k) amp[k] = inner_product(basis[k], apply_circuit(c, basis[k]));
  // 00: no inner photons; 01 and 10: one inner photon with phi1 = 0; 11: two bunched photons.
  CHECK(std::abs(amp[0] - 1.0) < 0.01);
  CHECK(std::abs(amp[1] - 1.0) < 0.01);
  CHECK(std::abs(amp[2] - 1.0) < 0.01);
  CHECK(std::abs(amp[3] + 1.0) < 0.01);
  CHECK(run_logical_cz({enc.params, false}, {enc.params, true}, code) > 0.99);
}

TEST_CASE("splitter Monte Carlo") {
  const FockState target = make_noon_state(2, 0, 1, 3);
  const Objective obj = Objective::state(first_modes_input(3, 2), target);
  const NetworkParams p = NetworkParams::random(3, 2, 4);
  Circuit c(3);
  c.set_trainable(c.add_network(p, {0, 1, 2}));
  const double ideal = evaluate(c, obj, false).fidelity;

  const MonteCarloSummary zero = splitter_monte_carlo(p, obj, 0.0, 20, 1, 2);
  for (double f : zero.fidelities) CHECK(f == ideal);
  CHECK(zero.variance == 0.0);
  CHECK(zero.median == ideal);

  const MonteCarloSummary tiny = splitter_monte_carlo(p, obj, 1e-6, 50, 2, 2);
  CHECK(std::abs(tiny.median - ideal) < 1e-6);

  const MonteCarloSummary w1 = splitter_monte_carlo(p, obj, 0.05, 40, 3, 1);
  const MonteCarloSummary w3 = splitter_monte_carlo(p, obj, 0.05, 40, 3, 3);
  CHECK(w1.fidelities == w3.fidelities);
  CHECK(w1.min <= w1.median);
  CHECK(w1.median <= w1.max);
  CHECK_THROWS(splitter_monte_carlo(p, obj, 0.01, 0, 1));
  CHECK_THROWS(splitter_monte_carlo(p, obj, -0.01, 5, 1));
}

TEST_CASE("routing gate") {
  TrainConfig cfg;
  const TaskResult swap = train_routing_gate(0, 1, cfg);
  CHECK(swap.fidelity > 0.9999);

  const TaskResult shallow = train_routing_gate(4, 1, cfg);
  REQUIRE(shallow.group_fidelities.size() == 5);
  CHECK(*std::min_element(shallow.group_fidelities.begin(), shallow.group_fidelities.end()) <
        0.99);
}

TEST_CASE("syndrome rule and loss branches of the 3-photon code") {
  const CodeSpec code = binomial_code(2);
  CHECK(classify_syndrome(code, 3) == Syndrome::kNoLoss);
  CHECK(classify_syndrome(code, 2) == Syndrome::kSingleLoss);
  CHECK(classify_syndrome(code, 1) == Syndrome::kUncorrectable);

  const Complex a(0.8, 0.0), b(0.0, 0.6);
  const FockState in = pipeline_input(code, a, b);
  for (int mode : {1, 2}) {
    const LossBranch br = apply_loss(in, mode);
    CHECK(br.weight == doctest::Approx(1.5).epsilon(1e-12));
    const auto dist = code_photon_number(br.state);
    REQUIRE(dist.size() == 1);
    CHECK(dist.begin()->first == 2);
  }
  // Loss in the first code mode: |1> (x) (a |1,1> + b (|0,2> + |2,0>)/sqrt2).
  const LossBranch e1 = apply_loss(in, 1);
  CHECK(std::abs(e1.state.amplitude(std::vector<int>{1, 1, 1}) - a) < 1e-12);
  CHECK(std::abs(e1.state.amplitude(std::vector<int>{1, 0, 2}) - b / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(e1.state.amplitude(std::vector<int>{1, 2, 0}) - b / std::sqrt(2.0)) < 1e-12);
  // Loss in the second code mode swaps the logical roles.
  const LossBranch e2 = apply_loss(in, 2);
  CHECK(std::abs(e2.state.amplitude(std::vector<int>{1, 1, 1}) - b) < 1e-12);
  CHECK(std::abs(e2.state.amplitude(std::vector<int>{1, 2, 0}) - a / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("loss-correction pipeline respects the shared-recovery bound") {
  TrainConfig cfg;
  const CodeSpec code = binomial_code(2);
  const TaskResult routing = train_routing_gate(2, 5, cfg, 2);
  const TaskResult recovery = train_recovery(code, routing.params, 3, cfg, 2);
  const CorrectionPipeline pipe{code, routing.params, recovery.params};

  const CorrectionOutcome none = run_loss_correction_demo(pipe, -1, 0.6, 0.8);
  CHECK(none.syndrome == Syndrome::kNoLoss);
  CHECK(none.fidelity == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd ab = oracle::random_vector(2, rng);
    // Fubini-Study bound from the overlap of the two error states.
    const FockState in = pipeline_input(code, ab[0], ab[1]);
    const double ov = std::abs(inner_product(apply_loss(in, 1).state, apply_loss(in, 2).state));
    const double bound = std::cos(0.5 * std::acos(std::min(1.0, ov)));
    CHECK(shared_recovery_bound(code, ab[0], ab[1]) == doctest::Approx(bound).epsilon(1e-12));
    const double f1 = run_loss_correction_demo(pipe, 1, ab[0], ab[1]).fidelity;
    const double f2 = run_loss_correction_demo(pipe, 2, ab[0], ab[1]).fidelity;
    CHECK(std::min(f1, f2) <= bound + 1e-9);
    // Random recovery networks obey the same bound.
    const CorrectionPipeline rnd{code, routing.params, NetworkParams::random(2, 3, 70 + trial)};
    CHECK(std::min(run_loss_correction_demo(rnd, 1, ab[0], ab[1]).fidelity,
                   run_loss_correction_demo(rnd, 2, ab[0], ab[1]).fidelity) <= bound + 1e-9);
  }
  // The basis states are the worst case: orthogonal error states.
  CHECK(shared_recovery_bound(code, 1.0, 0.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK_THROWS(run_loss_correction_demo(pipe, 0, 1.0, 0.0));
}

}  // TEST_SUITE
