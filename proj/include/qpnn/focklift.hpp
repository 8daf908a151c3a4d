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

#include <vector>

#include <Eigen/Dense>

#include "qpnn/fock.hpp"

namespace qpnn {

// Convention: a_k^dagger -> sum_m U(m, k) a_m^dagger, so an input occupation
// T maps to output S with amplitude Per(U[S, T]) / sqrt(S! T!).

/// A 2x2 mode transformation acting on modes (i, j). Either order is allowed.
struct TwoModeKernel {
  Eigen::Matrix2cd u;
  int i = 0;
  int j = 1;
};

/// Lift of a 2x2 unitary to the states |k, s - k>, indexed by k.
Eigen::MatrixXcd two_mode_block(const Eigen::Matrix2cd& u, int s);

/// Per-photon-number blocks for s = 0..max_photons, cached for repeated use.
class TwoModeLift {
 public:
  TwoModeLift(const Eigen::Matrix2cd& u, int max_photons);
  const Eigen::MatrixXcd& block(int s) const { return blocks_[s]; }

 private:
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// In-place application on one sector. Requires i < j.
void apply_two_mode_inplace(Eigen::Ref<Eigen::VectorXcd> amps, const FockBasis& basis,
                            const TwoModeLift& lift, int i, int j);

FockState apply_two_mode(const FockState& state, const TwoModeKernel& kernel);

/// Ryser formula with Gray-code subset order; n <= 12.
Complex permanent(const Eigen::MatrixXcd& a);

/// Dense oracle lift of an M x M matrix onto a fixed-photon-number basis.
Eigen::MatrixXcd lift_unitary(const Eigen::MatrixXcd& u, const FockBasis& basis);

}  // namespace qpnn
