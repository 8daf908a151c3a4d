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

#include "qpnn/nonlinearity.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qpnn {

double nl_phase(int n, const NonlinearParams& p) {
  if (n < 0) throw std::invalid_argument("nl_phase: negative photon count");
  return n == 0 ? 0.0 : p.phi1 + (n - 1) * p.phi2;
}

double nl_phase_multi(int n, const MultiAtomPhases& p) {
  if (n < 0) throw std::invalid_argument("nl_phase_multi: negative photon count");
  const int k = p.subtraction_count;
  if (k < 1 || static_cast<int>(p.phases.size()) != k + 1) {
    throw std::invalid_argument("nl_phase_multi: need K >= 1 and K + 1 phases");
  }
  double phase = 0.0;
  for (int j = 0; j < std::min(n, k); ++j) phase += p.phases[j];
  return phase + std::max(0, n - k) * p.phases[k];
}

void apply_nonlinear_inplace(Eigen::Ref<Eigen::VectorXcd> amps, const FockBasis& basis,
                             std::span<const NonlinearParams> params) {
  const int m = basis.mode_count();
  if (static_cast<int>(params.size()) != m) {
    throw std::invalid_argument("apply_nonlinear_layer: " + std::to_string(params.size()) +
                                " parameter pairs for " + std::to_string(m) + " modes");
  }
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    double phase = 0.0;
    for (int mode = 0; mode < m; ++mode) phase += nl_phase(basis.occupation(idx, mode), params[mode]);
    if (phase != 0.0) amps[idx] *= std::polar(1.0, phase);
  }
}

FockState apply_nonlinear_layer(const FockState& state, std::span<const NonlinearParams> params) {
  FockState out(state);
  for (auto& [n, sector] : out.mutable_sectors()) {
    apply_nonlinear_inplace(sector.amplitudes, *sector.basis, params);
  }
  return out;
}

FockState apply_nonlinear_layer_multi(const FockState& state,
                                      std::span<const MultiAtomPhases> params) {
  const int m = state.mode_count();
  if (static_cast<int>(params.size()) != m) {
    throw std::invalid_argument("apply_nonlinear_layer_multi: parameter count != mode count");
  }
  FockState out(state);
  for (auto& [n, sector] : out.mutable_sectors()) {
    const auto& basis = *sector.basis;
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
      double phase = 0.0;
      for (int mode = 0; mode < m; ++mode) {
        phase += nl_phase_multi(basis.occupation(idx, mode), params[mode]);
      }
      sector.amplitudes[idx] *= std::polar(1.0, phase);
    }
  }
  return out;
}

}  // namespace qpnn
