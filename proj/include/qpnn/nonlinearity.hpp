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

#include <span>
#include <vector>

#include "qpnn/fock.hpp"

namespace qpnn {

/// Photon-number-selective phase gate of one mode.
struct NonlinearParams {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// Cascade of K subtraction stages; phases has K + 1 entries.
struct MultiAtomPhases {
  int subtraction_count = 1;
  std::vector<double> phases;
};

/// 0 for the vacuum, phi1 + (n - 1) phi2 otherwise.
double nl_phase(int n, const NonlinearParams& p);

/// sum_{j <= min(n, K)} phases[j-1] + max(0, n - K) phases[K].
double nl_phase_multi(int n, const MultiAtomPhases& p);

void apply_nonlinear_inplace(Eigen::Ref<Eigen::VectorXcd> amps, const FockBasis& basis,
                             std::span<const NonlinearParams> params);

/// One parameter pair per mode.
FockState apply_nonlinear_layer(const FockState& state, std::span<const NonlinearParams> params);

FockState apply_nonlinear_layer_multi(const FockState& state,
                                      std::span<const MultiAtomPhases> params);

}  // namespace qpnn
