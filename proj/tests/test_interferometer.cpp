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
#include "qpnn/interferometer.hpp"

using namespace qpnn;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double max_abs(const Eigen::MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

MeshParams random_mesh(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  MeshParams mesh = MeshParams::rectangular(m);
  for (auto& s : mesh.mzis) s.params = {u(rng), u(rng)};
  for (auto& p : mesh.output_phases) p = u(rng);
  return mesh;
}

// Splitting angle a: [[cos a, i sin a], [i sin a, cos a]].
Eigen::Matrix2cd splitter(double a) {
  Eigen::Matrix2cd m;
  m << std::cos(a), kI * std::sin(a), kI * std::sin(a), std::cos(a);
  return m;
}

Eigen::Matrix2cd shifter(double chi) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(0, 0) = std::exp(kI * chi);
  return m;
}

bool is_transparent(double theta) {
  const double r = std::remainder(theta - kPi, 2.0 * kPi);
  return std::abs(r) < 1e-8;
}

}  // namespace

TEST_SUITE("interferometer") {

TEST_CASE("mzi_transfer examples") {
  Eigen::Matrix2cd swap;
  swap << 0.0, kI, kI, 0.0;
  CHECK(max_abs(mzi_transfer({0.0, 0.0}) - swap) < 1e-15);

  Eigen::Matrix2cd flip;
  flip << -1.0, 0.0, 0.0, 1.0;
  CHECK(max_abs(mzi_transfer({kPi, 0.0}) - flip) < 1e-15);

  const MziParams p{kPi / 2, kPi / 3};
  const SplitterError e{0.01, -0.02};
  const Eigen::Matrix2cd t = mzi_transfer(p, e);
  CHECK(max_abs(t.adjoint() * t - Eigen::Matrix2cd::Identity()) < 1e-12);
  const Eigen::Matrix2cd direct =
      splitter(kPi / 4 + e.beta) * shifter(p.theta) * splitter(kPi / 4 + e.alpha) * shifter(p.phi);
  CHECK(max_abs(t - direct) < 1e-14);
}

TEST_CASE("faulty model is continuous with the ideal transfer") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 100; ++k) {
    const MziParams p{u(rng), u(rng)};
    const Eigen::Matrix2cd ideal = mzi_transfer(p);
    const Eigen::Matrix2cd direct =
        splitter(kPi / 4) * shifter(p.theta) * splitter(kPi / 4) * shifter(p.phi);
    CHECK(max_abs(ideal - direct) < 1e-13);
    CHECK(max_abs(mzi_transfer(p, {1e-12, -1e-12}) - ideal) < 1e-11);
  }
}

TEST_CASE("mzi_transfer is unitary on a random sweep") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-4.0 * kPi, 4.0 * kPi);
  std::normal_distribution<double> err(0.0, 0.3);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::Matrix2cd t = mzi_transfer({ang(rng), ang(rng)}, {err(rng), err(rng)});
    worst = std::max(worst, max_abs(t.adjoint() * t - Eigen::Matrix2cd::Identity()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("mzi derivatives match central differences") {
  const MziParams p{0.7, -1.3};
  const double h = 1e-6;
  const Eigen::Matrix2cd dt =
      (mzi_transfer({p.theta + h, p.phi}) - mzi_transfer({p.theta - h, p.phi})) / (2 * h);
  const Eigen::Matrix2cd dp =
      (mzi_transfer({p.theta, p.phi + h}) - mzi_transfer({p.theta, p.phi - h})) / (2 * h);
  CHECK(max_abs(mzi_dtheta(p) - dt) < 1e-9);
  CHECK(max_abs(mzi_dphi(p) - dp) < 1e-9);
}

TEST_CASE("rectangular layout") {
  for (int m = 1; m <= 8; ++m) {
    const MeshParams mesh = MeshParams::rectangular(m);
    CHECK(mesh.mzis.size() == static_cast<std::size_t>(m * (m - 1) / 2));
    CHECK(mzi_count(m) == mesh.mzis.size());
    for (const auto& s : mesh.mzis) {
      CHECK(s.row % 2 == s.col % 2);
      CHECK(s.row + 1 < m);
    }
  }
}

TEST_CASE("mesh_unitary examples") {
  MeshParams two = MeshParams::rectangular(2);
  two.mzis[0].params = {kPi, 0.0};
  Eigen::Matrix2cd expect;
  expect << -1.0, 0.0, 0.0, 1.0;
  CHECK(max_abs(mesh_unitary(two) - expect) < 1e-15);

  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd u = mesh_unitary(random_mesh(4, rng));
  CHECK(unitarity_deviation(u) < 1e-12);

  const MeshParams mesh = random_mesh(3, rng);
  std::vector<SplitterError> short_list(1);
  CHECK_THROWS_AS(mesh_unitary(mesh, short_list), std::invalid_argument);
}

TEST_CASE("mesh_unitary is the ordered product of embedded blocks") {
  std::mt19937_64 rng(6);
  const MeshParams mesh = random_mesh(5, rng);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(5, 5);
  for (const auto& s : mesh.mzis) {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(5, 5);
    t.block(s.row, s.row, 2, 2) = mzi_transfer(s.params);
    u = t * u;
  }
  Eigen::VectorXcd d(5);
  for (int k = 0; k < 5; ++k) d[k] = std::exp(kI * mesh.output_phases[k]);
  u = d.asDiagonal() * u;
  CHECK(max_abs(mesh_unitary(mesh) - u) < 1e-13);
}

TEST_CASE("zero splitter errors reproduce the ideal mesh bit for bit") {
  std::mt19937_64 rng(7);
  const MeshParams mesh = random_mesh(6, rng);
  const auto zeros = sample_splitter_errors(mesh, 0.0, 11);
  for (const auto& e : zeros) {
    CHECK(e.alpha == 0.0);
    CHECK(e.beta == 0.0);
  }
  const Eigen::MatrixXcd a = mesh_unitary(mesh);
  const Eigen::MatrixXcd b = mesh_unitary(mesh, zeros);
  CHECK((a.array() == b.array()).all());
}

TEST_CASE("clements examples") {
  const MeshParams id = clements_decompose(Eigen::MatrixXcd::Identity(3, 3));
  for (const auto& s : id.mzis) CHECK(is_transparent(s.params.theta));
  CHECK(operator_norm(mesh_unitary(id) - Eigen::MatrixXcd::Identity(3, 3)) < 1e-12);

  Eigen::VectorXcd chi(4);
  chi << std::exp(kI * 0.1), std::exp(kI * 1.7), std::exp(-kI * 2.2), std::exp(kI * 3.0);
  const Eigen::MatrixXcd diag = chi.asDiagonal();
  const MeshParams dm = clements_decompose(diag);
  for (const auto& s : dm.mzis) CHECK(is_transparent(s.params.theta));
  CHECK(operator_norm(mesh_unitary(dm) - diag) < 1e-12);

  const Eigen::MatrixXcd h6 = sample_haar_unitary(6, 99);
  CHECK(operator_norm(mesh_unitary(clements_decompose(h6)) - h6) < 1e-10);

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
  bad(0, 1) = 0.1;
  CHECK_THROWS_AS(clements_decompose(bad), std::invalid_argument);
}

TEST_CASE("clements round trips for M = 2..8") {
  std::mt19937_64 rng(8);
  for (int m = 2; m <= 8; ++m) {
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXcd u = sample_haar_unitary(m, 100 * m + rep);
      CHECK(operator_norm(mesh_unitary(clements_decompose(u)) - u) < 1e-10);
      const Eigen::MatrixXcd v = mesh_unitary(random_mesh(m, rng));
      const MeshParams again = clements_decompose(v);
      CHECK(operator_norm(mesh_unitary(again) - v) < 1e-10);
    }
  }
}

TEST_CASE("sample_haar_unitary") {
  const Eigen::MatrixXcd one = sample_haar_unitary(1, 5);
  CHECK(std::abs(std::abs(one(0, 0)) - 1.0) < 1e-14);

  const Eigen::MatrixXcd a = sample_haar_unitary(8, 42);
  const Eigen::MatrixXcd b = sample_haar_unitary(8, 42);
  CHECK((a.array() == b.array()).all());
  CHECK(unitarity_deviation(a) < 1e-12);
  CHECK(max_abs(a - sample_haar_unitary(8, 43)) > 1e-3);

  // <|U_00|^2> = 1/4, Var = 2/(d(d+1)) - 1/d^2 for d = 4.
  const int samples = 10000;
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += std::norm(sample_haar_unitary(4, 1000 + k)(0, 0));
  const double mean = sum / samples;
  const double se = std::sqrt((0.1 - 0.0625) / samples);
  CHECK(std::abs(mean - 0.25) < 3.0 * se);
}

TEST_CASE("sample_splitter_errors") {
  const MeshParams mesh = MeshParams::rectangular(101);  // 5050 MZIs, 10100 draws
  const auto e = sample_splitter_errors(mesh, 0.01, 17);
  REQUIRE(e.size() == mesh.mzis.size());
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& x : e) {
    sum += x.alpha + x.beta;
    sum_sq += x.alpha * x.alpha + x.beta * x.beta;
  }
  const double n = 2.0 * e.size();
  const double sd = std::sqrt((sum_sq - sum * sum / n) / (n - 1));
  CHECK(sd >= 0.0097);
  CHECK(sd <= 0.0103);

  const auto again = sample_splitter_errors(mesh, 0.01, 17);
  for (std::size_t k = 0; k < e.size(); ++k) {
    CHECK(e[k].alpha == again[k].alpha);
    CHECK(e[k].beta == again[k].beta);
  }
  CHECK_THROWS_AS(sample_splitter_errors(mesh, -0.1, 1), std::invalid_argument);
}

}  // TEST_SUITE
