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

#include "qpnn/focklift.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qpnn {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int t = 1; t <= k; ++t) b = b * (n - k + t) / t;
  return b;
}

std::vector<Complex> powers(Complex x, int n) {
  std::vector<Complex> p(n + 1, Complex(1.0));
  for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * x;
  return p;
}

}  // namespace

Eigen::MatrixXcd two_mode_block(const Eigen::Matrix2cd& u, int s) {
  if (s < 0) throw std::invalid_argument("two_mode_block: negative photon number");
  const auto p00 = powers(u(0, 0), s);
  const auto p10 = powers(u(1, 0), s);
  const auto p01 = powers(u(0, 1), s);
  const auto p11 = powers(u(1, 1), s);
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(s + 1, s + 1);
  for (int l = 0; l <= s; ++l) {
    // (u00 a_i + u10 a_j)^l (u01 a_i + u11 a_j)^(s-l), expanded in powers of a_i.
    const double in_norm = std::sqrt(factorial(l) * factorial(s - l));
    for (int k = 0; k <= s; ++k) {
      Complex acc = 0.0;
      const int p_lo = std::max(0, k - (s - l));
      const int p_hi = std::min(l, k);
      for (int p = p_lo; p <= p_hi; ++p) {
        acc += binomial(l, p) * p00[p] * p10[l - p] * binomial(s - l, k - p) * p01[k - p] *
               p11[s - l - k + p];
      }
      block(k, l) = acc * std::sqrt(factorial(k) * factorial(s - k)) / in_norm;
    }
  }
  return block;
}

TwoModeLift::TwoModeLift(const Eigen::Matrix2cd& u, int max_photons) {
  blocks_.reserve(max_photons + 1);
  for (int s = 0; s <= max_photons; ++s) blocks_.push_back(two_mode_block(u, s));
}

void apply_two_mode_inplace(Eigen::Ref<Eigen::VectorXcd> amps, const FockBasis& basis,
                            const TwoModeLift& lift, int i, int j) {
  const auto& families = basis.pair_families(i, j).members;
  Eigen::VectorXcd in, out;
  for (const auto& members : families) {
    const int s = static_cast<int>(members.size()) - 1;
    if (s == 0) continue;  // vacuum on the pair is invariant
    in.resize(s + 1);
    for (int k = 0; k <= s; ++k) in[k] = amps[members[k]];
    out.noalias() = lift.block(s) * in;
    for (int k = 0; k <= s; ++k) amps[members[k]] = out[k];
  }
}

FockState apply_two_mode(const FockState& state, const TwoModeKernel& kernel) {
  const int m = state.mode_count();
  if (kernel.i == kernel.j) throw std::invalid_argument("apply_two_mode: modes must differ");
  if (kernel.i < 0 || kernel.j < 0 || kernel.i >= m || kernel.j >= m) {
    throw std::out_of_range("apply_two_mode: mode pair (" + std::to_string(kernel.i) + ", " +
                            std::to_string(kernel.j) + ") out of range");
  }
  int i = kernel.i, j = kernel.j;
  Eigen::Matrix2cd u = kernel.u;
  if (i > j) {
    std::swap(i, j);
    u = u.reverse().eval();  // conjugate by the swap permutation
  }
  FockState out(state);
  int max_n = 0;
  for (const auto& [n, sector] : state.sectors()) max_n = std::max(max_n, n);
  const TwoModeLift lift(u, max_n);
  for (auto& [n, sector] : out.mutable_sectors()) {
    apply_two_mode_inplace(sector.amplitudes, *sector.basis, lift, i, j);
  }
  return out;
}

Complex permanent(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("permanent: matrix must be square");
  const int n = static_cast<int>(a.rows());
  if (n > 12) {
    throw std::invalid_argument("permanent: size " + std::to_string(n) + " exceeds limit 12");
  }
  if (n == 0) return 1.0;
  // Row sums over the current column subset, updated one column per Gray-code step.
  std::vector<Complex> row_sum(n, Complex(0.0));
  Complex total = 0.0;
  std::uint32_t gray = 0;
  const std::uint32_t count = 1u << n;
  for (std::uint32_t k = 1; k < count; ++k) {
    const int col = std::countr_zero(k);
    const std::uint32_t bit = 1u << col;
    gray ^= bit;
    const double sign_update = (gray & bit) ? 1.0 : -1.0;
    Complex prod = 1.0;
    for (int r = 0; r < n; ++r) {
      row_sum[r] += sign_update * a(r, col);
      prod *= row_sum[r];
    }
    total += (std::popcount(gray) % 2 == 0) ? prod : -prod;
  }
  return (n % 2 == 0) ? total : -total;
}

Eigen::MatrixXcd lift_unitary(const Eigen::MatrixXcd& u, const FockBasis& basis) {
  const int m = basis.mode_count();
  if (u.rows() != m || u.cols() != m) {
    throw std::invalid_argument("lift_unitary: matrix is " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()) + " but the basis has " +
                                std::to_string(m) + " modes");
  }
  const int n = basis.photon_number();
  const std::size_t dim = basis.size();
  // Mode index of every photon, with multiplicity, and the sqrt(S!) factor.
  std::vector<std::vector<int>> photon_modes(dim);
  std::vector<double> norm(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    double f = 1.0;
    for (int mode = 0; mode < m; ++mode) {
      const int occ = basis.occupation(idx, mode);
      for (int c = 0; c < occ; ++c) photon_modes[idx].push_back(mode);
      f *= factorial(occ);
    }
    norm[idx] = std::sqrt(f);
  }
  Eigen::MatrixXcd lifted(dim, dim);
  Eigen::MatrixXcd sub(n, n);
  for (std::size_t t = 0; t < dim; ++t) {
    for (std::size_t s = 0; s < dim; ++s) {
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) sub(r, c) = u(photon_modes[s][r], photon_modes[t][c]);
      }
      lifted(s, t) = permanent(sub) / (norm[s] * norm[t]);
    }
  }
  return lifted;
}

}  // namespace qpnn
