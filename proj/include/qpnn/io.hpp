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

// JSON and CSV formats for states, meshes, checkpoints and result tables.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpnn/fock.hpp"
#include "qpnn/interferometer.hpp"
#include "qpnn/network.hpp"
#include "qpnn/optimizer.hpp"
#include "qpnn/scattering.hpp"

namespace qpnn {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Single sector: {mode_count, photon_number, amplitudes: [[re, im], ...]} in basis order.
/// Several sectors: {mode_count, sectors: [{photon_number, amplitudes}, ...]}.
Json state_to_json(const FockState& state);
FockState state_from_json(const Json& j);

/// {M, mzis: [{col, row, theta, phi}], output_phases}; angles are reduced to [0, 2 pi).
Json mesh_to_json(const MeshParams& mesh);
MeshParams mesh_from_json(const Json& j);

/// {M, L, final_activation, packing: "v1", params: [...]} in the flat packing order.
Json checkpoint_to_json(const NetworkParams& params);
NetworkParams checkpoint_from_json(const Json& j);

/// Shortest decimal that round-trips.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);

/// iteration,loss,fidelity[,projection_k...].
std::string trace_csv(const TrainingTrace& trace);
/// sample,fidelity.
std::string distribution_csv(const std::vector<double>& fidelities);
/// sigma_over_g,kappa_over_g,phi1,phi2,fidelity,grid_step,richardson_delta.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qpnn
