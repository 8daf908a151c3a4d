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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpnn/fock.hpp"
#include "qpnn/focklift.hpp"
#include "qpnn/interferometer.hpp"
#include "qpnn/nonlinearity.hpp"

namespace qpnn {

struct LayerParams {
  MeshParams mesh;
  std::vector<NonlinearParams> nonlinear;
};

/**
 * Layers of (mesh, per-mode nonlinearity).
 *
 * Flat packing ("v1"), layer-major. Within a layer: (theta, phi) of every MZI
 * in layout order, then the M output phases, then (phi1, phi2) of each mode.
 */
class NetworkParams {
 public:
  NetworkParams() = default;
  NetworkParams(int modes, int layers);

  /// Phases drawn uniformly from [0, 2 pi).
  static NetworkParams random(int modes, int layers, std::uint64_t seed);
  /// Identity meshes and zero nonlinear phases.
  static NetworkParams identity(int modes, int layers);
  static NetworkParams unflatten(int modes, int layers, const Eigen::VectorXd& flat);

  static std::size_t parameter_count(int modes, int layers);
  static std::size_t layer_parameter_count(int modes);

  int mode_count() const { return modes_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  std::size_t parameter_count() const { return parameter_count(modes_, layer_count()); }

  const std::vector<LayerParams>& layers() const { return layers_; }
  std::vector<LayerParams>& mutable_layers() { return layers_; }

  /// Whether the last layer's nonlinearity is applied. Its phases stay in the
  /// packing either way.
  bool final_activation() const { return final_activation_; }
  void set_final_activation(bool on) { final_activation_ = on; }

  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);

 private:
  int modes_ = 0;
  std::vector<LayerParams> layers_;
  bool final_activation_ = true;
};

/// Per-layer splitter errors; an empty outer vector means ideal components.
using NetworkErrors = std::vector<std::vector<SplitterError>>;

FockState forward(const FockState& state, const NetworkParams& params,
                  const NetworkErrors& errors = {});

/// Column j is forward() of basis state j.
Eigen::MatrixXcd network_matrix(const NetworkParams& params, const FockBasis& basis,
                                const NetworkErrors& errors = {});

/**
 * A composition of networks and fixed elements over physical modes.
 *
 * A network is placed through a mode map: network mode k acts on physical
 * mode map[k]. At most one network is marked trainable; gradients are
 * reported in its flat packing.
 */
class Circuit {
 public:
  explicit Circuit(int modes) : modes_(modes) {}

  /// Returns the index of the network slot.
  int add_network(NetworkParams params, std::vector<int> mode_map, bool inverse = false,
                  NetworkErrors errors = {});
  void add_kernel(const Eigen::Matrix2cd& u, int i, int j);
  /// One entry per physical mode.
  void add_nonlinear(std::vector<NonlinearParams> params);

  void set_trainable(int network);
  std::optional<int> trainable() const { return trainable_; }

  int mode_count() const { return modes_; }
  const NetworkParams& network(int index) const { return networks_.at(index).params; }
  NetworkParams& mutable_network(int index) { return networks_.at(index).params; }
  void set_errors(int index, NetworkErrors errors) { networks_.at(index).errors = std::move(errors); }

 private:
  friend class CompiledCircuit;

  struct NetworkSlot {
    NetworkParams params;
    std::vector<int> mode_map;
    bool inverse;
    NetworkErrors errors;
  };
  struct Element {
    enum class Kind { kNetwork, kKernel, kNonlinear } kind = Kind::kNetwork;
    int network = -1;
    Eigen::Matrix2cd u;
    int i = 0;
    int j = 0;
    std::vector<NonlinearParams> nonlinear;
  };

  int modes_;
  std::vector<NetworkSlot> networks_;
  std::vector<Element> elements_;
  std::optional<int> trainable_;
};

/// Circuit lowered to primitive operations on one fixed-photon-number basis.
class CompiledCircuit {
 public:
  CompiledCircuit(const Circuit& circuit, BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  std::size_t trainable_parameter_count() const { return trainable_count_; }

  void apply(Eigen::Ref<Eigen::VectorXcd> amps) const;
  void apply_adjoint(Eigen::Ref<Eigen::VectorXcd> amps) const;

  /// Returns c = <target| W |input> and writes dc/d(param) for every
  /// trainable parameter into dc. Reverse mode with O(1) extra state vectors.
  Complex overlap_derivatives(const Eigen::VectorXcd& input, const Eigen::VectorXcd& target,
                              Eigen::Ref<Eigen::VectorXcd> dc) const;

  /// Forward amplitudes and overlaps only.
  Complex overlap(const Eigen::VectorXcd& input, const Eigen::VectorXcd& target) const;

 private:
  enum class DerivKind { kCount, kAtLeastOne, kBeyondOne };
  struct DiagTerm {
    int param;
    int mode;
    DerivKind kind;
  };
  struct Op {
    bool two_mode;
    // Two-mode op on (i, j), i < j.
    int i = 0;
    int j = 0;
    Eigen::Matrix2cd u;
    std::shared_ptr<const TwoModeLift> lift;
    std::shared_ptr<const TwoModeLift> lift_adj;
    int param_theta = -1;
    int param_phi = -1;
    Eigen::Matrix2cd gen_theta;
    Eigen::Matrix2cd gen_phi;
    // Diagonal op.
    Eigen::VectorXcd diag;
    std::vector<DiagTerm> terms;
  };

  void apply_op(const Op& op, Eigen::Ref<Eigen::VectorXcd> amps, bool adjoint) const;
  void lower_network(const Circuit::NetworkSlot& slot, bool trainable);
  void add_two_mode(int i, int j, const Eigen::Matrix2cd& u, int p_theta = -1, int p_phi = -1,
                    const MziParams* params = nullptr);
  void add_diagonal(const Eigen::VectorXd& phase, std::vector<DiagTerm> terms = {});

  BasisPtr basis_;
  std::vector<Op> ops_;
  std::size_t trainable_count_ = 0;
};

/// Forward on a possibly multi-sector state.
FockState apply_circuit(const Circuit& circuit, const FockState& state);

}  // namespace qpnn
