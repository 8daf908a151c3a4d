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
#include "qpnn/io.hpp"

using namespace qpnn;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("io") {

TEST_CASE("state JSON round trip") {
  std::mt19937_64 rng(70);
  auto basis = enumerate_basis(3, 2);
  const FockState s = FockState::from_amplitudes(basis, oracle::random_vector(6, rng));
  const Json j = state_to_json(s);
  CHECK(j["mode_count"] == 3);
  CHECK(j["photon_number"] == 2);
  REQUIRE(j["amplitudes"].size() == 6);
  CHECK(j["amplitudes"][0][0].get<double>() == s.single_sector().amplitudes[0].real());
  const FockState back = state_from_json(Json::parse(j.dump()));
  CHECK(back.is_normalized());
  CHECK((back.single_sector().amplitudes.array() == s.single_sector().amplitudes.array()).all());

  const FockState mix =
      (FockState::basis_state(std::vector<int>{1, 0, 0}) + s).normalized();
  const FockState mix_back = state_from_json(state_to_json(mix));
  CHECK(mix_back.sectors().size() == 2);
  CHECK(std::abs(inner_product(mix, mix_back) - 1.0) < 1e-15);

  CHECK_THROWS_AS(state_from_json(Json{{"mode_count", 2}}), FormatError);
  Json wrong = j;
  wrong["amplitudes"].erase(0);
  CHECK_THROWS_AS(state_from_json(wrong), FormatError);
}

TEST_CASE("mesh JSON reduces angles and matches slots by position") {
  MeshParams mesh = MeshParams::rectangular(4);
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (auto& s : mesh.mzis) s.params = {u(rng), u(rng)};
  for (auto& p : mesh.output_phases) p = u(rng);
  Json j = mesh_to_json(mesh);
  CHECK(j["M"] == 4);
  for (const auto& e : j["mzis"]) {
    CHECK(e["theta"].get<double>() >= 0.0);
    CHECK(e["theta"].get<double>() < 2 * kPi);
  }
  // Order of the entries does not matter.
  std::reverse(j["mzis"].begin(), j["mzis"].end());
  const MeshParams back = mesh_from_json(j);
  CHECK(operator_norm(mesh_unitary(back) - mesh_unitary(mesh)) < 1e-12);

  Json bad = mesh_to_json(mesh);
  bad["mzis"][0]["row"] = 1;  // column 0 only has even rows
  CHECK_THROWS_AS(mesh_from_json(bad), FormatError);
  Json dup = mesh_to_json(mesh);
  dup["mzis"][1] = dup["mzis"][0];
  CHECK_THROWS_AS(mesh_from_json(dup), FormatError);
}

TEST_CASE("checkpoint round trip") {
  NetworkParams p = NetworkParams::random(3, 2, 5);
  p.set_final_activation(false);
  const Json j = Json::parse(checkpoint_to_json(p).dump());
  CHECK(j["packing"] == "v1");
  CHECK(j["params"].size() == p.parameter_count());
  const NetworkParams q = checkpoint_from_json(j);
  CHECK_FALSE(q.final_activation());
  CHECK((q.flatten().array() == p.flatten().array()).all());

  Json bad = j;
  bad["packing"] = "v2";
  CHECK_THROWS_AS(checkpoint_from_json(bad), FormatError);
  bad = j;
  bad["params"].erase(0);
  CHECK_THROWS_AS(checkpoint_from_json(bad), FormatError);
}

TEST_CASE("numbers round trip through text") {
  std::mt19937_64 rng(72);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int k = 0; k < 1000; ++k) {
    const double v = g(rng) * std::pow(10.0, k % 20 - 10);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
}

TEST_CASE("CSV tables") {
  TrainingTrace t;
  t.loss = {0.5, 0.25};
  t.fidelity = {0.3, 0.5};
  t.projections = {{0.1, 0.2}, {0.3, 0.4}};
  CHECK(trace_csv(t) ==
        "iteration,loss,fidelity,projection_0,projection_1\n0,0.5,0.3,0.1,0.2\n1,0.25,0.5,0.3,0.4\n");
  CHECK(distribution_csv({0.9, 1.0}) == "sample,fidelity\n0,0.9\n1,1\n");
  SweepRow r{{0.1, 1.0, 0.0, kPi}, {0.98, 0.025, 1e-7, 101}};
  const std::string sweep = sweep_csv({r});
  CHECK(sweep.rfind("sigma_over_g,kappa_over_g,phi1,phi2,fidelity,grid_step,richardson_delta\n", 0) == 0);
}

}  // TEST_SUITE
