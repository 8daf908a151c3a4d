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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qpnn {

using Complex = std::complex<double>;
using Occupation = std::vector<int>;

/**
 * Occupation vectors of M modes holding exactly N photons.
 *
 * Ordering is lexicographic descending, so (N,0,...,0) comes first and
 * (0,...,0,N) last. The ordering is part of the serialized state format.
 */
class FockBasis {
 public:
  /// Families of basis states that differ only in the occupations of a mode
  /// pair (i, j). members[f][k] is the index of the element with n_i = k.
  struct PairFamilies {
    std::vector<std::vector<std::size_t>> members;
  };

  FockBasis(int modes, int photons);

  int mode_count() const { return modes_; }
  int photon_number() const { return photons_; }
  std::size_t size() const { return size_; }

  std::span<const int> occupation(std::size_t index) const {
    return {occupations_.data() + index * modes_, static_cast<std::size_t>(modes_)};
  }
  int occupation(std::size_t index, int mode) const {
    return occupations_[index * modes_ + mode];
  }

  std::optional<std::size_t> index_of(std::span<const int> occupation) const;

  /// Lazily built; requires i < j.
  const PairFamilies& pair_families(int i, int j) const;

 private:
  int modes_;
  int photons_;
  std::size_t size_;
  std::vector<int> occupations_;
  std::map<Occupation, std::size_t> index_map_;

  mutable std::vector<std::unique_ptr<std::once_flag>> family_once_;
  mutable std::vector<std::unique_ptr<PairFamilies>> families_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// binomial(N + M - 1, M - 1); throws on M < 1.
std::size_t fock_dimension(int modes, int photons);

/// Rejects M < 1.
BasisPtr enumerate_basis(int modes, int photons);

enum class Normalization { kNormalized, kUnnormalized };

/**
 * Pure state over one or more fixed-photon-number sectors.
 *
 * Sectors are stored separately because linear optics never mixes them.
 */
class FockState {
 public:
  struct Sector {
    BasisPtr basis;
    Eigen::VectorXcd amplitudes;
  };

  explicit FockState(int modes) : modes_(modes) {}

  /// The state is validated against `norm`: a normalized state must have
  /// squared norm within 1e-12 of one.
  static FockState from_amplitudes(BasisPtr basis, Eigen::VectorXcd amplitudes,
                                   Normalization norm = Normalization::kNormalized);
  static FockState basis_state(std::span<const int> occupation);
  static FockState basis_state(BasisPtr basis, std::span<const int> occupation);
  static FockState vacuum(int modes);

  int mode_count() const { return modes_; }
  bool is_normalized() const { return norm_ == Normalization::kNormalized; }
  double squared_norm() const;

  const std::map<int, Sector>& sectors() const { return sectors_; }
  std::map<int, Sector>& mutable_sectors() { return sectors_; }
  const Sector* find_sector(int photons) const;

  /// Throws unless exactly one sector is present.
  const Sector& single_sector() const;
  Sector& single_sector();

  Complex amplitude(std::span<const int> occupation) const;

  void add_sector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  FockState normalized() const;
  FockState scaled(Complex factor) const;
  void set_normalization(Normalization norm) { norm_ = norm; }

  friend FockState operator+(const FockState& a, const FockState& b);

 private:
  int modes_;
  std::map<int, Sector> sectors_;
  Normalization norm_ = Normalization::kUnnormalized;
};

/// Conjugate-linear in `a`; sectors present in only one argument contribute 0.
Complex inner_product(const FockState& a, const FockState& b);

struct LossBranch {
  FockState state;
  double weight;
};

/**
 * Annihilates one photon in `mode`. The returned state is renormalized and
 * `weight` is its squared norm before renormalization. A branch with no
 * support returns weight 0 and the vacuum.
 */
LossBranch apply_loss(const FockState& state, int mode);

/// Probability of each photon-number sector.
std::map<int, double> total_photon_number(const FockState& state);

}  // namespace qpnn
