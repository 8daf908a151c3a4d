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

#include "qpnn/fock.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qpnn {

namespace {

void enumerate_into(int modes, int remaining, Occupation& prefix, std::vector<int>& out) {
  const int mode = static_cast<int>(prefix.size());
  if (mode == modes - 1) {
    prefix.push_back(remaining);
    out.insert(out.end(), prefix.begin(), prefix.end());
    prefix.pop_back();
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    prefix.push_back(n);
    enumerate_into(modes, remaining - n, prefix, out);
    prefix.pop_back();
  }
}

std::size_t pair_slot(int modes, int i, int j) {
  // Row-major index into the strict upper triangle.
  return static_cast<std::size_t>(i) * modes - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
}

}  // namespace

std::size_t fock_dimension(int modes, int photons) {
  if (modes < 1) throw std::invalid_argument("fock_dimension: mode count must be >= 1");
  if (photons < 0) throw std::invalid_argument("fock_dimension: photon number must be >= 0");
  // binomial(N + M - 1, M - 1) computed incrementally; each partial product is exact.
  std::size_t result = 1;
  for (int k = 1; k < modes; ++k) {
    result = result * static_cast<std::size_t>(photons + k) / static_cast<std::size_t>(k);
  }
  return result;
}

FockBasis::FockBasis(int modes, int photons) : modes_(modes), photons_(photons) {
  if (modes < 1) throw std::invalid_argument("enumerate_basis: mode count must be >= 1");
  if (photons < 0) throw std::invalid_argument("enumerate_basis: photon number must be >= 0");
  size_ = fock_dimension(modes, photons);
  occupations_.reserve(size_ * modes);
  Occupation prefix;
  prefix.reserve(modes);
  enumerate_into(modes, photons, prefix, occupations_);
  for (std::size_t i = 0; i < size_; ++i) {
    auto occ = occupation(i);
    index_map_.emplace(Occupation(occ.begin(), occ.end()), i);
  }
  const std::size_t pairs = static_cast<std::size_t>(modes) * (modes - 1) / 2;
  family_once_.resize(pairs);
  families_.resize(pairs);
  for (auto& flag : family_once_) flag = std::make_unique<std::once_flag>();
}

std::optional<std::size_t> FockBasis::index_of(std::span<const int> occupation) const {
  if (static_cast<int>(occupation.size()) != modes_) return std::nullopt;
  auto it = index_map_.find(Occupation(occupation.begin(), occupation.end()));
  if (it == index_map_.end()) return std::nullopt;
  return it->second;
}

const FockBasis::PairFamilies& FockBasis::pair_families(int i, int j) const {
  if (i < 0 || j >= modes_ || i >= j) {
    throw std::invalid_argument("pair_families: need 0 <= i < j < M");
  }
  const std::size_t slot = pair_slot(modes_, i, j);
  std::call_once(*family_once_[slot], [&] {
    auto families = std::make_unique<PairFamilies>();
    std::map<Occupation, std::size_t> family_of_rest;
    for (std::size_t idx = 0; idx < size_; ++idx) {
      auto occ = occupation(idx);
      Occupation rest(occ.begin(), occ.end());
      const int total = rest[i] + rest[j];
      rest[i] = 0;
      rest[j] = 0;
      auto [it, inserted] = family_of_rest.emplace(rest, families->members.size());
      if (inserted) families->members.emplace_back(total + 1);
      families->members[it->second][occ[i]] = idx;
    }
    families_[slot] = std::move(families);
  });
  return *families_[slot];
}

BasisPtr enumerate_basis(int modes, int photons) {
  return std::make_shared<const FockBasis>(modes, photons);
}

FockState FockState::from_amplitudes(BasisPtr basis, Eigen::VectorXcd amplitudes,
                                     Normalization norm) {
  if (!basis) throw std::invalid_argument("FockState: null basis");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->size()) {
    throw std::invalid_argument("FockState: amplitude vector length " +
                                std::to_string(amplitudes.size()) + " != basis size " +
                                std::to_string(basis->size()));
  }
  if (norm == Normalization::kNormalized) {
    const double deviation = std::abs(amplitudes.squaredNorm() - 1.0);
    if (deviation > 1e-12) {
      throw std::invalid_argument("FockState: state flagged normalized has |norm^2 - 1| = " +
                                  std::to_string(deviation));
    }
  }
  FockState state(basis->mode_count());
  state.sectors_.emplace(basis->photon_number(), Sector{basis, std::move(amplitudes)});
  state.norm_ = norm;
  return state;
}

FockState FockState::basis_state(std::span<const int> occupation) {
  const int photons = std::accumulate(occupation.begin(), occupation.end(), 0);
  return basis_state(enumerate_basis(static_cast<int>(occupation.size()), photons), occupation);
}

FockState FockState::basis_state(BasisPtr basis, std::span<const int> occupation) {
  auto index = basis->index_of(occupation);
  if (!index) throw std::invalid_argument("FockState::basis_state: occupation not in basis");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->size());
  amps[*index] = 1.0;
  return from_amplitudes(std::move(basis), std::move(amps));
}

FockState FockState::vacuum(int modes) {
  return basis_state(Occupation(modes, 0));
}

double FockState::squared_norm() const {
  double total = 0.0;
  for (const auto& [n, sector] : sectors_) total += sector.amplitudes.squaredNorm();
  return total;
}

const FockState::Sector* FockState::find_sector(int photons) const {
  auto it = sectors_.find(photons);
  return it == sectors_.end() ? nullptr : &it->second;
}

const FockState::Sector& FockState::single_sector() const {
  if (sectors_.size() != 1) {
    throw std::logic_error("FockState: expected a single photon-number sector, found " +
                           std::to_string(sectors_.size()));
  }
  return sectors_.begin()->second;
}

FockState::Sector& FockState::single_sector() {
  if (sectors_.size() != 1) {
    throw std::logic_error("FockState: expected a single photon-number sector, found " +
                           std::to_string(sectors_.size()));
  }
  return sectors_.begin()->second;
}

Complex FockState::amplitude(std::span<const int> occupation) const {
  const int photons = std::accumulate(occupation.begin(), occupation.end(), 0);
  const Sector* sector = find_sector(photons);
  if (!sector) return 0.0;
  auto index = sector->basis->index_of(occupation);
  return index ? sector->amplitudes[*index] : Complex(0.0);
}

void FockState::add_sector(BasisPtr basis, Eigen::VectorXcd amplitudes) {
  if (basis->mode_count() != modes_) throw std::invalid_argument("add_sector: mode-count mismatch");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->size()) {
    throw std::invalid_argument("add_sector: amplitude length != basis size");
  }
  const int n = basis->photon_number();
  auto it = sectors_.find(n);
  if (it == sectors_.end()) {
    sectors_.emplace(n, Sector{std::move(basis), std::move(amplitudes)});
  } else {
    it->second.amplitudes += amplitudes;
  }
  norm_ = Normalization::kUnnormalized;
}

FockState FockState::normalized() const {
  const double norm = std::sqrt(squared_norm());
  if (norm == 0.0) throw std::domain_error("FockState::normalized: zero state");
  FockState out = scaled(1.0 / norm);
  out.norm_ = Normalization::kNormalized;
  return out;
}

FockState FockState::scaled(Complex factor) const {
  FockState out(*this);
  for (auto& [n, sector] : out.sectors_) sector.amplitudes *= factor;
  out.norm_ = std::abs(std::abs(factor) - 1.0) < 1e-15 ? norm_ : Normalization::kUnnormalized;
  return out;
}

FockState operator+(const FockState& a, const FockState& b) {
  if (a.modes_ != b.modes_) throw std::invalid_argument("FockState +: mode-count mismatch");
  FockState out(a);
  for (const auto& [n, sector] : b.sectors_) out.add_sector(sector.basis, sector.amplitudes);
  out.norm_ = Normalization::kUnnormalized;
  return out;
}

Complex inner_product(const FockState& a, const FockState& b) {
  if (a.mode_count() != b.mode_count()) {
    throw std::invalid_argument("inner_product: mode-count mismatch (" +
                                std::to_string(a.mode_count()) + " vs " +
                                std::to_string(b.mode_count()) + ")");
  }
  Complex total = 0.0;
  for (const auto& [n, sa] : a.sectors()) {
    const auto* sb = b.find_sector(n);
    if (sb) total += sa.amplitudes.dot(sb->amplitudes);  // dot() conjugates the left operand
  }
  return total;
}

LossBranch apply_loss(const FockState& state, int mode) {
  if (mode < 0 || mode >= state.mode_count()) {
    throw std::out_of_range("apply_loss: mode " + std::to_string(mode) + " out of range");
  }
  FockState out(state.mode_count());
  Occupation target(state.mode_count());
  for (const auto& [n, sector] : state.sectors()) {
    if (n == 0) continue;
    const auto& basis = *sector.basis;
    auto lowered = enumerate_basis(state.mode_count(), n - 1);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(lowered->size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const int occ = basis.occupation(i, mode);
      if (occ == 0) continue;
      auto src = basis.occupation(i);
      target.assign(src.begin(), src.end());
      target[mode] -= 1;
      amps[*lowered->index_of(target)] += std::sqrt(static_cast<double>(occ)) * sector.amplitudes[i];
    }
    out.add_sector(lowered, std::move(amps));
  }
  const double weight = out.squared_norm();
  if (weight == 0.0) return {FockState::vacuum(state.mode_count()), 0.0};
  return {out.normalized(), weight};
}

std::map<int, double> total_photon_number(const FockState& state) {
  std::map<int, double> probabilities;
  const double total = state.squared_norm();
  for (const auto& [n, sector] : state.sectors()) {
    const double p = sector.amplitudes.squaredNorm();
    if (p > 0.0) probabilities[n] = total > 0.0 ? p / total : 0.0;
  }
  return probabilities;
}

}  // namespace qpnn
