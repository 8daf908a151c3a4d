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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qpnn {

using Complex = std::complex<double>;

/// Lambda atom in a broadband cavity. Only gamma() = 2 g^2 / kappa enters the dynamics.
struct AtomParams {
  double g = 1.0;
  double kappa = 1.0;

  double gamma() const { return 2.0 * g * g / kappa; }
  void validate() const;
};

/// Uniform grid t_k = (k - (size - 1) / 2) step, symmetric about 0.
struct TimeGrid {
  double step = 0.0;
  int size = 0;

  double time(int k) const { return (k - 0.5 * (size - 1)) * step; }
  double span() const { return (size - 1) * step; }

  /// Smallest odd size covering [-half_span, half_span] with spacing at most max_step.
  static TimeGrid covering(double half_span, double max_step);
  /// Same span, half the step.
  TimeGrid refined() const;
};

/// Gaussian pulse xi(t) = (s'^2 / pi)^(1/4) exp(-s'^2 t^2 / 2), where s' = sigma / (2 sqrt(ln 2)).
struct PulseSpec {
  double sigma = 0.0;  // spectral FWHM
  TimeGrid grid;

  double sigma_prime() const;
  /// FWHM of |xi(t)|^2.
  double temporal_fwhm() const;

  /// Grid of at least `fwhm_span` temporal FWHM with the step limited by the atom rates.
  static PulseSpec for_atom(double sigma, const AtomParams& atom, double fwhm_span = 8.0);

  /// Samples renormalized so that the grid quadrature of |xi|^2 is 1.
  std::vector<double> samples() const;
};

class ResolutionError : public std::invalid_argument {
 public:
  ResolutionError(const std::string& what, double ratio);
  /// step / bound, larger than 1.
  double ratio() const { return ratio_; }

 private:
  double ratio_;
};

/// Throws ResolutionError if step > min(1 / (10 gamma), 1 / (10 kappa)).
void check_resolution(const TimeGrid& grid, const AtomParams& atom);

/// Fourth-order quadrature on uniform grids, in units of the step.
std::vector<double> gregory_weights(int nodes);

/**
 * Two-time amplitude on a TimeGrid.
 *
 * Symmetric amplitudes hold two photons of one mode, normalised as
 * (1/sqrt 2) int f a^dag a^dag, and are stored on the triangle i <= j.
 * Non-symmetric ones hold one photon in each of two modes, indexed (a, b).
 */
class TwoPhotonAmplitude {
 public:
  TwoPhotonAmplitude() = default;
  TwoPhotonAmplitude(TimeGrid grid, bool symmetric);

  const TimeGrid& grid() const { return grid_; }
  int size() const { return grid_.size; }
  bool symmetric() const { return symmetric_; }

  Complex operator()(int i, int j) const { return data_[index(i, j)]; }
  Complex& at(int i, int j) { return data_[index(i, j)]; }

  /// int int |f|^2; the quadrature is split on the diagonal where the amplitudes kink.
  double norm_squared() const;
  /// int int conj(this) other.
  Complex inner(const TwoPhotonAmplitude& other) const;

  std::size_t index(int i, int j) const {
    if (symmetric_) {
      if (i > j) std::swap(i, j);
      const std::size_t ii = i;
      return ii * grid_.size - ii * (ii - 1) / 2 + (j - i);
    }
    return static_cast<std::size_t>(i) * grid_.size + j;
  }

 private:
  TimeGrid grid_;
  bool symmetric_ = true;
  std::vector<Complex> data_;
};

/// Two photons and one atom: pair (atom in g_h), cross (atom in g_v), excited residual.
struct ScatteringState {
  TwoPhotonAmplitude pair;
  TwoPhotonAmplitude cross;  // (a photon, b photon)
  std::vector<Complex> excited;  // atom in e with one a photon, at the final time

  double excited_norm_squared() const;
  double norm_squared() const;
};

struct SinglePhotonResult {
  std::vector<Complex> transmitted;  // mode a, atom back in g_h
  std::vector<Complex> subtracted;   // mode b, atom in g_v
  double residual_excited = 0.0;     // |e(t_max)|^2
};

/// One photon in mode a, atom in g_h.
SinglePhotonResult subtract_one_photon(const PulseSpec& pulse, const AtomParams& atom);

/// Two photons of xi in mode a, atom in g_h.
ScatteringState subtract_two_photon(const PulseSpec& pulse, const AtomParams& atom);

/**
 * Scatters `input` off the atom. The atom state is tied to the component:
 * g_h for the pair, g_v for the cross amplitude. Consumes the input grids.
 */
ScatteringState scatter(ScatteringState input, const AtomParams& atom);

/// int int a(t1) b(t2) f(t1, t2).
Complex overlap_with_product(const TwoPhotonAmplitude& f, const std::vector<double>& a,
                             const std::vector<double>& b);

/// Narrow-pulse limit of the subtracted cross amplitude: -sqrt 2 xi(ta) xi(tb) [tb < ta].
TwoPhotonAmplitude ideal_subtracted_cross(const PulseSpec& pulse);

/**
 * Phase each a photon by phi2 and the b photon by phi1, then reflect all
 * time labels about 0. The excited residual is dropped.
 */
ScatteringState phase_and_time_reverse(ScatteringState state, double phi1, double phi2);

/// Time-reversed input with the atom in g_v; same dynamics as subtraction.
ScatteringState add_photon(ScatteringState input, const AtomParams& atom);

/// |int int conj(e^{i(phi1 + phi2)} xi xi) f| for the pair output of a full gate on one grid.
double gate_fidelity_on_grid(const PulseSpec& pulse, const AtomParams& atom, double phi1,
                             double phi2);

struct GateFidelity {
  double fidelity = 0.0;        // on the refined grid
  double grid_step = 0.0;       // step of the refined grid
  double richardson_delta = 0.0;  // |F(h) - F(h / 2)|
  int grid_size = 0;
};

struct ScatteringOptions {
  double fwhm_span = 8.0;
  double richardson_tolerance = 1e-4;
  /// Further halvings allowed while the delta exceeds the tolerance.
  int max_refinements = 2;
  /// Largest grid size accepted; guards the quadratic memory of the two-time grids.
  int max_grid_size = 10000;
};

/// Gate fidelity in units g = 1, with Richardson refinement of the step.
GateFidelity gate_fidelity(double sigma_over_g, double kappa_over_g, double phi1, double phi2,
                           const ScatteringOptions& options = {});

struct SweepPoint {
  double sigma_over_g;
  double kappa_over_g;
  double phi1;
  double phi2;
};

struct SweepRow {
  SweepPoint point;
  GateFidelity result;
};

/// Independent solves, `workers` at a time; rows are returned in input order.
std::vector<SweepRow> scattering_sweep(const std::vector<SweepPoint>& points,
                                       const ScatteringOptions& options, int workers = 1);

}  // namespace qpnn
