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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qpnn {

struct MziParams {
  double theta = 0.0;
  double phi = 0.0;
};

/// Deviations of the two internal beam splitters from 50:50.
struct SplitterError {
  double alpha = 0.0;
  double beta = 0.0;
};

/// One MZI of the rectangular mesh, acting on modes (row, row + 1).
struct MziSlot {
  int col = 0;
  int row = 0;
  MziParams params;
};

struct MeshParams {
  int mode_count = 0;
  std::vector<MziSlot> mzis;
  std::vector<double> output_phases;

  /// Rectangular layout with all phases zero. Column c holds the MZIs on
  /// rows r = c (mod 2); columns are applied in increasing order.
  static MeshParams rectangular(int modes);
};

std::size_t mzi_count(int modes);

/**
 * i e^{i theta/2} [[e^{i phi} sin(theta/2), cos(theta/2)],
 *                  [e^{i phi} cos(theta/2), -sin(theta/2)]]
 *
 * With a nonzero error the matrix is BS(pi/4 + beta) PS(theta) BS(pi/4 + alpha) PS(phi),
 * which coincides with the closed form above when alpha = beta = 0.
 */
Eigen::Matrix2cd mzi_transfer(const MziParams& p, const SplitterError& e = {});

/// Derivatives of the ideal transfer matrix.
Eigen::Matrix2cd mzi_dtheta(const MziParams& p);
Eigen::Matrix2cd mzi_dphi(const MziParams& p);

/// An empty `errors` span means ideal components.
Eigen::MatrixXcd mesh_unitary(const MeshParams& mesh, std::span<const SplitterError> errors = {});

/// Throws std::invalid_argument if ||U^dagger U - I|| >= 1e-8.
MeshParams clements_decompose(const Eigen::MatrixXcd& u);

Eigen::MatrixXcd sample_haar_unitary(int dim, std::uint64_t seed);

std::vector<SplitterError> sample_splitter_errors(const MeshParams& mesh, double sigma,
                                                  std::uint64_t seed);

double operator_norm(const Eigen::MatrixXcd& a);
double unitarity_deviation(const Eigen::MatrixXcd& u);

}  // namespace qpnn
