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

#include "qpnn/scattering.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace qpnn {

namespace {

// Weighted sum over m consecutive nodes using gregory_weights(m), in units of the step.
template <class Get>
Complex segment_sum(int m, Get get) {
  if (m <= 1) return 0.0;
  if (m < 6) {
    const auto w = gregory_weights(m);
    Complex s = 0.0;
    for (int k = 0; k < m; ++k) s += w[k] * get(k);
    return s;
  }
  static constexpr double kEnd[3] = {3.0 / 8.0 - 1.0, 7.0 / 6.0 - 1.0, 23.0 / 24.0 - 1.0};
  Complex s = 0.0;
  for (int k = 0; k < m; ++k) s += get(k);
  for (int k = 0; k < 3; ++k) s += kEnd[k] * (get(k) + get(m - 1 - k));
  return s;
}

// Outer quadrature over rows of a per-row integral.
template <class Row>
Complex row_quadrature(int n, Row row) {
  const auto w = gregory_weights(n);
  Complex s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * row(i);
  return s;
}

/**
 * Integrates e' = -rate e + s(t) node to node. The source is interpolated by
 * the cubic through four nodes around each interval, shifted inwards at the
 * ends of the node range; the exponential is integrated exactly.
 */
class ExpIntegrator {
 public:
  ExpIntegrator(double rate, double step) : decay_(std::exp(-rate * step)) {
    // 8-point Gauss-Legendre on [0, 1].
    static constexpr std::array<double, 8> x = {
        0.0198550717512319, 0.1016667612931866, 0.2372337950418355, 0.4082826787521751,
        0.5917173212478249, 0.7627662049581645, 0.8983332387068134, 0.9801449282487681};
    static constexpr std::array<double, 8> w = {
        0.0506142681451881, 0.1111905172266872, 0.1568533229389436, 0.1813418916891810,
        0.1813418916891810, 0.1568533229389436, 0.1111905172266872, 0.0506142681451881};
    for (int count = 2; count <= 4; ++count) {
      for (int back = 0; back <= count - 2; ++back) {
        auto& out = weights_[count][back];
        out.fill(0.0);
        for (int j = 0; j < count; ++j) {
          const double xj = j - back;
          for (int q = 0; q < 8; ++q) {
            double l = 1.0;
            for (int m = 0; m < count; ++m) {
              if (m == j) continue;
              const double xm = m - back;
              l *= (x[q] - xm) / (xj - xm);
            }
            out[j] += w[q] * step * std::exp(-rate * step * (1.0 - x[q])) * l;
          }
        }
      }
    }
  }

  // Solves on nodes [lo, hi] from e(lo) = e0; emit(k, e_k) is called for every node.
  template <class Emit>
  void run(const Complex* s, int lo, int hi, Complex e0, Emit emit) const {
    Complex e = e0;
    emit(lo, e);
    const int count = std::min(4, hi - lo + 1);
    for (int k = lo; k < hi; ++k) {
      const int start = std::clamp(k - 1, lo, hi - count + 1);
      const auto& w = weights_[count][k - start];
      Complex src = 0.0;
      for (int j = 0; j < count; ++j) src += w[j] * s[start + j];
      e = decay_ * e + src;
      emit(k + 1, e);
    }
  }

 private:
  double decay_;
  std::array<std::array<std::array<double, 4>, 3>, 5> weights_{};
};

const TimeGrid& require_same_grid(const TwoPhotonAmplitude& a, const TwoPhotonAmplitude& b) {
  if (a.grid().size != b.grid().size || a.grid().step != b.grid().step) {
    throw std::invalid_argument("two-photon amplitudes live on different grids");
  }
  return a.grid();
}

}  // namespace

void AtomParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("AtomParams: g must be > 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("AtomParams: kappa must be > 0");
  }
}

TimeGrid TimeGrid::covering(double half_span, double max_step) {
  if (!(half_span > 0.0) || !(max_step > 0.0)) {
    throw std::invalid_argument("TimeGrid: span and step must be positive");
  }
  const double half_nodes = std::ceil(half_span / max_step - 1e-12);
  if (half_nodes > 1e7) throw std::length_error("TimeGrid: too many nodes");
  TimeGrid g;
  g.size = 2 * static_cast<int>(half_nodes) + 1;
  g.step = half_span / half_nodes;
  return g;
}

TimeGrid TimeGrid::refined() const {
  TimeGrid g;
  g.size = 2 * size - 1;
  g.step = 0.5 * step;
  return g;
}

double PulseSpec::sigma_prime() const { return sigma / (2.0 * std::sqrt(std::numbers::ln2)); }

double PulseSpec::temporal_fwhm() const {
  return 2.0 * std::sqrt(std::numbers::ln2) / sigma_prime();
}

PulseSpec PulseSpec::for_atom(double sigma, const AtomParams& atom, double fwhm_span) {
  atom.validate();
  if (!(sigma > 0.0)) throw std::invalid_argument("PulseSpec: sigma must be > 0");
  if (!(fwhm_span >= 8.0)) throw std::invalid_argument("PulseSpec: span must cover >= 8 FWHM");
  PulseSpec p;
  p.sigma = sigma;
  const double fwhm = p.temporal_fwhm();
  const double bound =
      std::min({1.0 / (10.0 * atom.gamma()), 1.0 / (10.0 * atom.kappa), fwhm / 20.0});
  p.grid = TimeGrid::covering(0.5 * fwhm_span * fwhm, bound);
  return p;
}

std::vector<double> PulseSpec::samples() const {
  const double sp = sigma_prime();
  const double amp = std::pow(sp * sp / std::numbers::pi, 0.25);
  std::vector<double> xi(grid.size);
  for (int k = 0; k < grid.size; ++k) {
    const double t = grid.time(k);
    xi[k] = amp * std::exp(-0.5 * sp * sp * t * t);
  }
  const double norm =
      grid.step * segment_sum(grid.size, [&](int k) { return Complex(xi[k] * xi[k]); }).real();
  const double scale = 1.0 / std::sqrt(norm);
  for (double& v : xi) v *= scale;
  return xi;
}

ResolutionError::ResolutionError(const std::string& what, double ratio)
    : std::invalid_argument(what), ratio_(ratio) {}

void check_resolution(const TimeGrid& grid, const AtomParams& atom) {
  atom.validate();
  const double bound = std::min(1.0 / (10.0 * atom.gamma()), 1.0 / (10.0 * atom.kappa));
  const double ratio = grid.step / bound;
  if (ratio > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "grid step " << grid.step << " exceeds min(1/(10 Gamma), 1/(10 kappa)) = " << bound
       << " by a factor " << ratio;
    throw ResolutionError(os.str(), ratio);
  }
}

std::vector<double> gregory_weights(int nodes) {
  if (nodes < 0) throw std::invalid_argument("gregory_weights: negative node count");
  switch (nodes) {
    case 0:
      return {};
    case 1:
      return {0.0};
    case 2:
      return {0.5, 0.5};
    case 3:
      return {1.0 / 3, 4.0 / 3, 1.0 / 3};
    case 4:
      return {3.0 / 8, 9.0 / 8, 9.0 / 8, 3.0 / 8};
    case 5:
      return {14.0 / 45, 64.0 / 45, 24.0 / 45, 64.0 / 45, 14.0 / 45};
    default:
      break;
  }
  std::vector<double> w(nodes, 1.0);
  const double end[3] = {3.0 / 8, 7.0 / 6, 23.0 / 24};
  for (int k = 0; k < 3; ++k) {
    w[k] = end[k];
    w[nodes - 1 - k] = end[k];
  }
  return w;
}

TwoPhotonAmplitude::TwoPhotonAmplitude(TimeGrid grid, bool symmetric)
    : grid_(grid), symmetric_(symmetric) {
  if (grid.size < 1) throw std::invalid_argument("TwoPhotonAmplitude: empty grid");
  const std::size_t n = grid.size;
  data_.assign(symmetric ? n * (n + 1) / 2 : n * n, Complex(0.0));
}

Complex TwoPhotonAmplitude::inner(const TwoPhotonAmplitude& other) const {
  const TimeGrid& g = require_same_grid(*this, other);
  const int n = g.size;
  const double h2 = g.step * g.step;
  auto value = [&](int i, int j) { return std::conj((*this)(i, j)) * other(i, j); };
  if (symmetric_ && other.symmetric_) {
    const Complex tri = row_quadrature(n, [&](int i) {
      return segment_sum(n - i, [&](int k) { return value(i, i + k); });
    });
    return 2.0 * h2 * tri;
  }
  return h2 * row_quadrature(n, [&](int i) {
    return segment_sum(i + 1, [&](int k) { return value(i, k); }) +
           segment_sum(n - i, [&](int k) { return value(i, i + k); });
  });
}

double TwoPhotonAmplitude::norm_squared() const { return inner(*this).real(); }

double ScatteringState::excited_norm_squared() const {
  if (excited.empty()) return 0.0;
  const double h = pair.grid().step;
  return h * segment_sum(static_cast<int>(excited.size()),
                         [&](int k) { return Complex(std::norm(excited[k])); })
                 .real();
}

double ScatteringState::norm_squared() const {
  return pair.norm_squared() + cross.norm_squared() + excited_norm_squared();
}

SinglePhotonResult subtract_one_photon(const PulseSpec& pulse, const AtomParams& atom) {
  check_resolution(pulse.grid, atom);
  const double gamma = atom.gamma();
  const double root = std::sqrt(gamma);
  const int n = pulse.grid.size;
  const auto xi = pulse.samples();
  std::vector<Complex> src(n);
  for (int k = 0; k < n; ++k) src[k] = -root * xi[k];
  SinglePhotonResult r;
  r.transmitted.resize(n);
  r.subtracted.resize(n);
  ExpIntegrator integ(gamma, pulse.grid.step);
  Complex last = 0.0;
  integ.run(src.data(), 0, n - 1, 0.0, [&](int k, Complex e) {
    r.transmitted[k] = xi[k] + root * e;
    r.subtracted[k] = root * e;
    last = e;
  });
  r.residual_excited = std::norm(last);
  return r;
}

ScatteringState subtract_two_photon(const PulseSpec& pulse, const AtomParams& atom) {
  const auto xi = pulse.samples();
  const int n = pulse.grid.size;
  ScatteringState in;
  in.pair = TwoPhotonAmplitude(pulse.grid, true);
  in.cross = TwoPhotonAmplitude(pulse.grid, false);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) in.pair.at(i, j) = xi[i] * xi[j];
  }
  return scatter(std::move(in), atom);
}

// Each photon label tau carries its own excited-state amplitude E(t; tau),
// driven by the photon arriving at t:
//   E' = -Gamma E - sqrt(2 Gamma) f(t, tau) - sqrt(Gamma) V(tau, t).
// A photon passing at t picks up sqrt(Gamma / 2) E in the pair and sqrt(Gamma) E
// in the cross amplitude. The first sweep covers t <= tau (other photon still
// incoming), the second t >= tau, reading the pair values left by the first.
// Both update the grids in place.
ScatteringState scatter(ScatteringState state, const AtomParams& atom) {
  auto& f = state.pair;
  auto& v = state.cross;
  if (!f.symmetric() || v.symmetric()) {
    throw std::invalid_argument("scatter: expected a symmetric pair and a cross amplitude");
  }
  const TimeGrid& grid = require_same_grid(f, v);
  check_resolution(grid, atom);
  const int n = grid.size;
  const double gamma = atom.gamma();
  const double drive_pair = std::sqrt(2.0 * gamma);
  const double drive_cross = std::sqrt(gamma);
  const double emit_pair = std::sqrt(0.5 * gamma);
  const double emit_cross = std::sqrt(gamma);
  const ExpIntegrator integ(gamma, grid.step);

  std::vector<Complex> src(n);
  std::vector<Complex> on_diagonal(n);
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t <= j; ++t) src[t] = -drive_pair * f(t, j) - drive_cross * v(j, t);
    integ.run(src.data(), 0, j, 0.0, [&](int t, Complex e) {
      if (t < j) {
        f.at(t, j) += emit_pair * e;
        v.at(j, t) += emit_cross * e;
      } else {
        on_diagonal[j] = e;
      }
    });
    f.at(j, j) += emit_pair * on_diagonal[j];
  }

  state.excited.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int t = i; t < n; ++t) src[t] = -drive_pair * f(i, t) - drive_cross * v(i, t);
    integ.run(src.data(), i, n - 1, on_diagonal[i], [&](int t, Complex e) {
      f.at(i, t) += emit_pair * e;
      v.at(i, t) += emit_cross * e;
      if (t == n - 1) state.excited[i] = e;
    });
  }
  return state;
}

Complex overlap_with_product(const TwoPhotonAmplitude& f, const std::vector<double>& a,
                             const std::vector<double>& b) {
  const int n = f.size();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("overlap_with_product: size mismatch");
  }
  const double h2 = f.grid().step * f.grid().step;
  return h2 * row_quadrature(n, [&](int i) {
    return segment_sum(i + 1, [&](int k) { return a[i] * b[k] * f(i, k); }) +
           segment_sum(n - i, [&](int k) { return a[i] * b[i + k] * f(i, i + k); });
  });
}

TwoPhotonAmplitude ideal_subtracted_cross(const PulseSpec& pulse) {
  const auto xi = pulse.samples();
  const int n = pulse.grid.size;
  TwoPhotonAmplitude v(pulse.grid, false);
  const double c = -std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < a; ++b) v.at(a, b) = c * xi[a] * xi[b];
    v.at(a, a) = 0.5 * c * xi[a] * xi[a];
  }
  return v;
}

ScatteringState phase_and_time_reverse(ScatteringState state, double phi1, double phi2) {
  auto& f = state.pair;
  auto& v = state.cross;
  const int n = require_same_grid(f, v).size;
  const Complex pair_phase = std::polar(1.0, 2.0 * phi2);
  const Complex cross_phase = std::polar(1.0, phi1 + phi2);
  // (i, j) -> (n-1-j, n-1-i) is an involution on the triangle.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const int pi = n - 1 - j;
      const int pj = n - 1 - i;
      const std::size_t a = f.index(i, j);
      const std::size_t b = f.index(pi, pj);
      if (a < b) std::swap(f.at(i, j), f.at(pi, pj));
      if (a <= b) {
        f.at(i, j) *= pair_phase;
        if (a != b) f.at(pi, pj) *= pair_phase;
      }
    }
  }
  // (a, b) -> (n-1-a, n-1-b) reverses the row-major storage.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a * n + b >= n * n - 1 - a * n - b) break;
      std::swap(v.at(a, b), v.at(n - 1 - a, n - 1 - b));
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) v.at(a, b) *= cross_phase;
  }
  state.excited.clear();
  return state;
}

ScatteringState add_photon(ScatteringState input, const AtomParams& atom) {
  return scatter(std::move(input), atom);
}

double gate_fidelity_on_grid(const PulseSpec& pulse, const AtomParams& atom, double phi1,
                             double phi2) {
  auto out = add_photon(
      phase_and_time_reverse(subtract_two_photon(pulse, atom), phi1, phi2), atom);
  const auto xi = pulse.samples();
  const Complex target_phase = std::polar(1.0, phi1 + phi2);
  return std::abs(std::conj(target_phase) * overlap_with_product(out.pair, xi, xi));
}

GateFidelity gate_fidelity(double sigma_over_g, double kappa_over_g, double phi1, double phi2,
                           const ScatteringOptions& options) {
  const AtomParams atom{1.0, kappa_over_g};
  PulseSpec coarse = PulseSpec::for_atom(sigma_over_g, atom, options.fwhm_span);
  auto solve = [&](const PulseSpec& p) {
    if (p.grid.size > options.max_grid_size) {
      std::ostringstream os;
      os << "scattering grid of " << p.grid.size << " nodes exceeds the cap of "
         << options.max_grid_size;
      throw std::length_error(os.str());
    }
    return gate_fidelity_on_grid(p, atom, phi1, phi2);
  };
  double f_coarse = solve(coarse);
  GateFidelity r;
  for (int level = 0;; ++level) {
    PulseSpec fine = coarse;
    fine.grid = coarse.grid.refined();
    const double f_fine = solve(fine);
    r.fidelity = f_fine;
    r.grid_step = fine.grid.step;
    r.grid_size = fine.grid.size;
    r.richardson_delta = std::abs(f_fine - f_coarse);
    if (r.richardson_delta < options.richardson_tolerance || level >= options.max_refinements) {
      break;
    }
    coarse = fine;
    f_coarse = f_fine;
  }
  return r;
}

std::vector<SweepRow> scattering_sweep(const std::vector<SweepPoint>& points,
                                       const ScatteringOptions& options, int workers) {
  const int count = static_cast<int>(points.size());
  std::vector<SweepRow> rows(count);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        const auto& p = points[k];
        rows[k] = {p, gate_fidelity(p.sigma_over_g, p.kappa_over_g, p.phi1, p.phi2, options)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

}  // namespace qpnn
