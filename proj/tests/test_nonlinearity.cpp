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
#include "qpnn/nonlinearity.hpp"

using namespace qpnn;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

FockState random_state(int modes, int photons, std::mt19937_64& rng) {
  auto basis = enumerate_basis(modes, photons);
  return FockState::from_amplitudes(
      basis, oracle::random_vector(static_cast<Eigen::Index>(basis->size()), rng));
}

std::vector<NonlinearParams> random_params(int modes, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<NonlinearParams> p(modes);
  for (auto& x : p) x = {u(rng), u(rng)};
  return p;
}

}  // namespace

TEST_SUITE("nonlinearity") {

TEST_CASE("nl_phase examples") {
  CHECK(nl_phase(0, {1.3, 0.4}) == 0.0);
  CHECK(nl_phase(1, {0.3, 2.0}) == doctest::Approx(0.3));
  CHECK(nl_phase(2, {0.0, kPi}) == doctest::Approx(kPi));
  CHECK(nl_phase(5, {0.5, 0.25}) == doctest::Approx(0.5 + 4 * 0.25));
  CHECK_THROWS_AS(nl_phase(-1, {}), std::invalid_argument);
}

TEST_CASE("nl_phase_multi examples") {
  const double a = 0.3, b = -1.1, c = 0.7;
  for (int n = 0; n <= 6; ++n) {
    CHECK(nl_phase_multi(n, {1, {a, b}}) == doctest::Approx(nl_phase(n, {a, b})));
  }
  CHECK(nl_phase_multi(3, {2, {a, b, c}}) == doctest::Approx(a + b + c));
  CHECK(nl_phase_multi(5, {2, {a, b, c}}) == doctest::Approx(a + b + 3 * c));
  CHECK(nl_phase_multi(1, {2, {a, b, c}}) == doctest::Approx(a));
  CHECK(nl_phase_multi(0, {2, {a, b, c}}) == 0.0);
  CHECK_THROWS_AS(nl_phase_multi(1, {2, {a, b}}), std::invalid_argument);
  CHECK_THROWS_AS(nl_phase_multi(1, {0, {a}}), std::invalid_argument);
}

TEST_CASE("apply_nonlinear_layer examples") {
  std::mt19937_64 rng(20);
  const FockState s = random_state(3, 3, rng);
  const FockState same = apply_nonlinear_layer(s, std::vector<NonlinearParams>(3));
  CHECK(std::abs(inner_product(s, same) - 1.0) < 1e-15);

  const FockState one = apply_nonlinear_layer(FockState::basis_state(std::vector<int>{1, 1}),
                                              std::vector<NonlinearParams>{{kPi, 0.0}, {0.0, 0.0}});
  CHECK(std::abs(one.amplitude(std::vector<int>{1, 1}) + 1.0) < 1e-15);

  // c0 |0> + c1 |1> + c2 |2> on one mode: the two-photon term flips sign.
  const Complex c0(0.5, 0.1), c1(-0.3, 0.6), c2(0.2, -0.4);
  FockState sup = FockState::basis_state(std::vector<int>{0}).scaled(c0) +
                  FockState::basis_state(std::vector<int>{1}).scaled(c1) +
                  FockState::basis_state(std::vector<int>{2}).scaled(c2);
  const FockState out = apply_nonlinear_layer(sup, std::vector<NonlinearParams>{{0.0, kPi}});
  CHECK(std::abs(out.amplitude(std::vector<int>{0}) - c0) < 1e-15);
  CHECK(std::abs(out.amplitude(std::vector<int>{1}) - c1) < 1e-15);
  CHECK(std::abs(out.amplitude(std::vector<int>{2}) + c2) < 1e-15);

  CHECK_THROWS_AS(apply_nonlinear_layer(s, std::vector<NonlinearParams>(2)),
                  std::invalid_argument);
}

TEST_CASE("layer is diagonal with the per-mode phase sum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 4;
    const int n = trial % 6;
    const FockState s = random_state(m, n, rng);
    const auto p = random_params(m, rng);
    const FockState out = apply_nonlinear_layer(s, p);
    const auto& basis = *s.single_sector().basis;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      double phase = 0.0;
      for (int mode = 0; mode < m; ++mode) phase += nl_phase(basis.occupation(k, mode), p[mode]);
      const Complex want = s.single_sector().amplitudes[k] * std::exp(kI * phase);
      CHECK(std::abs(out.single_sector().amplitudes[k] - want) < 1e-14);
      CHECK(std::abs(std::abs(out.single_sector().amplitudes[k]) -
                     std::abs(s.single_sector().amplitudes[k])) < 1e-15);
    }
    CHECK(total_photon_number(out).at(n) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("composition adds phases") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 4;
    const FockState s = random_state(m, 1 + trial % 5, rng);
    const auto p = random_params(m, rng);
    const auto q = random_params(m, rng);
    std::vector<NonlinearParams> sum(m);
    for (int k = 0; k < m; ++k) sum[k] = {p[k].phi1 + q[k].phi1, p[k].phi2 + q[k].phi2};
    const FockState twice = apply_nonlinear_layer(apply_nonlinear_layer(s, p), q);
    const FockState once = apply_nonlinear_layer(s, sum);
    CHECK((twice.single_sector().amplitudes - once.single_sector().amplitudes)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("layer commutes with permutations of equal-occupation elements") {
  // Permuting modes that share a parameter pair leaves the layer unchanged.
  std::mt19937_64 rng(23);
  const FockState s = random_state(3, 3, rng);
  const NonlinearParams shared{0.4, 1.9};
  const std::vector<NonlinearParams> p{shared, shared, {0.1, -0.7}};
  const FockState out = apply_nonlinear_layer(s, p);
  const auto& basis = *s.single_sector().basis;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::vector<int> swapped{basis.occupation(k, 1), basis.occupation(k, 0),
                                   basis.occupation(k, 2)};
    const std::size_t j = *basis.index_of(swapped);
    const Complex ratio_k = out.single_sector().amplitudes[k] / s.single_sector().amplitudes[k];
    const Complex ratio_j = out.single_sector().amplitudes[j] / s.single_sector().amplitudes[j];
    CHECK(std::abs(ratio_k - ratio_j) < 1e-12);
  }
}

TEST_CASE("multi-atom layer with K = 1 equals the single-atom layer") {
  std::mt19937_64 rng(24);
  const FockState s = random_state(3, 4, rng);
  const auto p = random_params(3, rng);
  std::vector<MultiAtomPhases> multi;
  for (const auto& x : p) multi.push_back({1, {x.phi1, x.phi2}});
  const FockState a = apply_nonlinear_layer(s, p);
  const FockState b = apply_nonlinear_layer_multi(s, multi);
  CHECK((a.single_sector().amplitudes - b.single_sector().amplitudes).cwiseAbs().maxCoeff() <
        1e-14);
}

}  // TEST_SUITE
