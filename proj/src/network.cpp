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

#include "qpnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qpnn {

constexpr Complex kI(0.0, 1.0);

// ---------------------------------------------------------------------------
// NetworkParams

NetworkParams::NetworkParams(int modes, int layers) : modes_(modes) {
  if (modes < 1) throw std::invalid_argument("NetworkParams: mode count must be >= 1");
  if (layers < 0) throw std::invalid_argument("NetworkParams: negative layer count");
  layers_.resize(layers);
  for (auto& layer : layers_) {
    layer.mesh = MeshParams::rectangular(modes);
    layer.nonlinear.assign(modes, {});
  }
}

std::size_t NetworkParams::layer_parameter_count(int modes) {
  return 2 * mzi_count(modes) + 3 * static_cast<std::size_t>(modes);
}

std::size_t NetworkParams::parameter_count(int modes, int layers) {
  return static_cast<std::size_t>(layers) * layer_parameter_count(modes);
}

NetworkParams NetworkParams::random(int modes, int layers, std::uint64_t seed) {
  NetworkParams params(modes, layers);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 2 * std::numbers::pi);
  Eigen::VectorXd flat(params.parameter_count());
  for (auto& x : flat) x = uniform(rng);
  params.assign(flat);
  return params;
}

NetworkParams NetworkParams::identity(int modes, int layers) {
  NetworkParams params(modes, layers);
  const MeshParams mesh = clements_decompose(Eigen::MatrixXcd::Identity(modes, modes));
  for (auto& layer : params.layers_) layer.mesh = mesh;
  return params;
}

NetworkParams NetworkParams::unflatten(int modes, int layers, const Eigen::VectorXd& flat) {
  NetworkParams params(modes, layers);
  params.assign(flat);
  return params;
}

Eigen::VectorXd NetworkParams::flatten() const {
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index k = 0;
  for (const auto& layer : layers_) {
    for (const auto& mzi : layer.mesh.mzis) {
      flat[k++] = mzi.params.theta;
      flat[k++] = mzi.params.phi;
    }
    for (double chi : layer.mesh.output_phases) flat[k++] = chi;
    for (const auto& nl : layer.nonlinear) {
      flat[k++] = nl.phi1;
      flat[k++] = nl.phi2;
    }
  }
  return flat;
}

void NetworkParams::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != parameter_count()) {
    throw std::invalid_argument("NetworkParams::assign: expected " +
                                std::to_string(parameter_count()) + " parameters, got " +
                                std::to_string(flat.size()));
  }
  Eigen::Index k = 0;
  for (auto& layer : layers_) {
    for (auto& mzi : layer.mesh.mzis) {
      mzi.params.theta = flat[k++];
      mzi.params.phi = flat[k++];
    }
    for (double& chi : layer.mesh.output_phases) chi = flat[k++];
    for (auto& nl : layer.nonlinear) {
      nl.phi1 = flat[k++];
      nl.phi2 = flat[k++];
    }
  }
}

// ---------------------------------------------------------------------------
// Circuit

int Circuit::add_network(NetworkParams params, std::vector<int> mode_map, bool inverse,
                         NetworkErrors errors) {
  if (static_cast<int>(mode_map.size()) != params.mode_count()) {
    throw std::invalid_argument("Circuit::add_network: mode map size != network mode count");
  }
  std::vector<int> seen = mode_map;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end() ||
      (!seen.empty() && (seen.front() < 0 || seen.back() >= modes_))) {
    throw std::invalid_argument("Circuit::add_network: mode map must be distinct in-range modes");
  }
  if (!errors.empty() && static_cast<int>(errors.size()) != params.layer_count()) {
    throw std::invalid_argument("Circuit::add_network: error list needs one entry per layer");
  }
  networks_.push_back({std::move(params), std::move(mode_map), inverse, std::move(errors)});
  const int index = static_cast<int>(networks_.size()) - 1;
  Element e;
  e.kind = Element::Kind::kNetwork;
  e.network = index;
  elements_.push_back(std::move(e));
  return index;
}

void Circuit::add_kernel(const Eigen::Matrix2cd& u, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= modes_ || j >= modes_) {
    throw std::invalid_argument("Circuit::add_kernel: invalid mode pair");
  }
  Element e;
  e.kind = Element::Kind::kKernel;
  e.u = u;
  e.i = i;
  e.j = j;
  elements_.push_back(std::move(e));
}

void Circuit::add_nonlinear(std::vector<NonlinearParams> params) {
  if (static_cast<int>(params.size()) != modes_) {
    throw std::invalid_argument("Circuit::add_nonlinear: need one parameter pair per mode");
  }
  Element e;
  e.kind = Element::Kind::kNonlinear;
  e.nonlinear = std::move(params);
  elements_.push_back(std::move(e));
}

void Circuit::set_trainable(int network) {
  const auto& slot = networks_.at(network);
  if (slot.inverse) throw std::invalid_argument("Circuit: an inverted network cannot be trained");
  if (!slot.errors.empty()) throw std::invalid_argument("Circuit: a faulty network cannot be trained");
  trainable_ = network;
}

// ---------------------------------------------------------------------------
// CompiledCircuit

CompiledCircuit::CompiledCircuit(const Circuit& circuit, BasisPtr basis) : basis_(std::move(basis)) {
  if (basis_->mode_count() != circuit.mode_count()) {
    throw std::invalid_argument("CompiledCircuit: basis has " +
                                std::to_string(basis_->mode_count()) + " modes, circuit has " +
                                std::to_string(circuit.mode_count()));
  }
  const int m = circuit.mode_count();
  for (const auto& e : circuit.elements_) {
    switch (e.kind) {
      case Circuit::Element::Kind::kNetwork: {
        const auto& slot = circuit.networks_[e.network];
        const bool trainable = circuit.trainable_ && *circuit.trainable_ == e.network;
        if (trainable) trainable_count_ = slot.params.parameter_count();
        lower_network(slot, trainable);
        break;
      }
      case Circuit::Element::Kind::kKernel:
        add_two_mode(e.i, e.j, e.u);
        break;
      case Circuit::Element::Kind::kNonlinear: {
        Eigen::VectorXd phase(basis_->size());
        for (std::size_t idx = 0; idx < basis_->size(); ++idx) {
          double total = 0.0;
          for (int mode = 0; mode < m; ++mode) {
            total += nl_phase(basis_->occupation(idx, mode), e.nonlinear[mode]);
          }
          phase[idx] = total;
        }
        add_diagonal(phase);
        break;
      }
    }
  }
}

void CompiledCircuit::lower_network(const Circuit::NetworkSlot& slot, bool trainable) {
  const auto& params = slot.params;
  const auto& map = slot.mode_map;
  const int nm = params.mode_count();
  const std::size_t first = ops_.size();
  const std::size_t per_layer = NetworkParams::layer_parameter_count(nm);
  const int mzis = static_cast<int>(mzi_count(nm));
  const std::size_t dim = basis_->size();

  for (int l = 0; l < params.layer_count(); ++l) {
    const auto& layer = params.layers()[l];
    const int base = static_cast<int>(l * per_layer);
    for (int k = 0; k < mzis; ++k) {
      const auto& slot_k = layer.mesh.mzis[k];
      const SplitterError err = slot.errors.empty() ? SplitterError{} : slot.errors[l].at(k);
      const Eigen::Matrix2cd u = mzi_transfer(slot_k.params, err);
      if (trainable) {
        add_two_mode(map[slot_k.row], map[slot_k.row + 1], u, base + 2 * k, base + 2 * k + 1,
                     &slot_k.params);
      } else {
        add_two_mode(map[slot_k.row], map[slot_k.row + 1], u);
      }
    }

    Eigen::VectorXd phase = Eigen::VectorXd::Zero(dim);
    std::vector<DiagTerm> terms;
    for (int mode = 0; mode < nm; ++mode) {
      const int phys = map[mode];
      const double chi = layer.mesh.output_phases[mode];
      for (std::size_t idx = 0; idx < dim; ++idx) phase[idx] += chi * basis_->occupation(idx, phys);
      if (trainable) terms.push_back({base + 2 * mzis + mode, phys, DerivKind::kCount});
    }
    add_diagonal(phase, std::move(terms));

    const bool last = l + 1 == params.layer_count();
    if (last && !params.final_activation()) continue;
    phase.setZero();
    terms.clear();
    for (int mode = 0; mode < nm; ++mode) {
      const int phys = map[mode];
      for (std::size_t idx = 0; idx < dim; ++idx) {
        phase[idx] += nl_phase(basis_->occupation(idx, phys), layer.nonlinear[mode]);
      }
      if (trainable) {
        const int p = base + 2 * mzis + nm + 2 * mode;
        terms.push_back({p, phys, DerivKind::kAtLeastOne});
        terms.push_back({p + 1, phys, DerivKind::kBeyondOne});
      }
    }
    add_diagonal(phase, std::move(terms));
  }

  if (slot.inverse) {
    std::reverse(ops_.begin() + first, ops_.end());
    for (auto it = ops_.begin() + first; it != ops_.end(); ++it) {
      if (it->two_mode) {
        it->u = it->u.adjoint().eval();
        std::swap(it->lift, it->lift_adj);
      } else {
        it->diag = it->diag.conjugate().eval();
      }
    }
  }
}

void CompiledCircuit::add_two_mode(int i, int j, const Eigen::Matrix2cd& u_in, int p_theta,
                                   int p_phi, const MziParams* params) {
  Op op;
  op.two_mode = true;
  Eigen::Matrix2cd u = u_in;
  Eigen::Matrix2cd gt = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd gp = Eigen::Matrix2cd::Zero();
  if (params) {
    // d Lift(T) = dGamma((dT) T^dagger) Lift(T).
    gt = mzi_dtheta(*params) * u.adjoint();
    gp = mzi_dphi(*params) * u.adjoint();
  }
  if (i > j) {
    std::swap(i, j);
    u = u.reverse().eval();
    gt = gt.reverse().eval();
    gp = gp.reverse().eval();
  }
  op.i = i;
  op.j = j;
  op.u = u;
  const int n = basis_->photon_number();
  op.lift = std::make_shared<const TwoModeLift>(u, n);
  op.lift_adj = std::make_shared<const TwoModeLift>(u.adjoint(), n);
  op.param_theta = p_theta;
  op.param_phi = p_phi;
  op.gen_theta = gt;
  op.gen_phi = gp;
  basis_->pair_families(i, j);  // build the family table before any concurrent use
  ops_.push_back(std::move(op));
}

void CompiledCircuit::add_diagonal(const Eigen::VectorXd& phase, std::vector<DiagTerm> terms) {
  Op op;
  op.two_mode = false;
  op.diag.resize(phase.size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) op.diag[k] = std::polar(1.0, phase[k]);
  op.terms = std::move(terms);
  ops_.push_back(std::move(op));
}

void CompiledCircuit::apply_op(const Op& op, Eigen::Ref<Eigen::VectorXcd> amps, bool adjoint) const {
  if (op.two_mode) {
    apply_two_mode_inplace(amps, *basis_, adjoint ? *op.lift_adj : *op.lift, op.i, op.j);
  } else if (adjoint) {
    amps.array() *= op.diag.array().conjugate();
  } else {
    amps.array() *= op.diag.array();
  }
}

void CompiledCircuit::apply(Eigen::Ref<Eigen::VectorXcd> amps) const {
  if (static_cast<std::size_t>(amps.size()) != basis_->size()) {
    throw std::invalid_argument("CompiledCircuit::apply: amplitude length != basis size");
  }
  for (const auto& op : ops_) apply_op(op, amps, false);
}

void CompiledCircuit::apply_adjoint(Eigen::Ref<Eigen::VectorXcd> amps) const {
  if (static_cast<std::size_t>(amps.size()) != basis_->size()) {
    throw std::invalid_argument("CompiledCircuit::apply_adjoint: amplitude length != basis size");
  }
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) apply_op(*it, amps, true);
}

Complex CompiledCircuit::overlap(const Eigen::VectorXcd& input, const Eigen::VectorXcd& target) const {
  Eigen::VectorXcd psi = input;
  apply(psi);
  return target.dot(psi);
}

namespace {

// <lambda| dGamma(X) |psi> restricted to the pair's families.
Complex generator_expectation(const FockBasis::PairFamilies& fam, const Eigen::Matrix2cd& x,
                              const Eigen::VectorXcd& lambda, const Eigen::VectorXcd& psi) {
  Complex total = 0.0;
  for (const auto& members : fam.members) {
    const int s = static_cast<int>(members.size()) - 1;
    if (s == 0) continue;
    for (int k = 0; k <= s; ++k) {
      Complex v = (x(0, 0) * static_cast<double>(k) + x(1, 1) * static_cast<double>(s - k)) *
                  psi[members[k]];
      if (k > 0) v += x(0, 1) * std::sqrt(static_cast<double>(k) * (s - k + 1)) * psi[members[k - 1]];
      if (k < s) v += x(1, 0) * std::sqrt(static_cast<double>(k + 1) * (s - k)) * psi[members[k + 1]];
      total += std::conj(lambda[members[k]]) * v;
    }
  }
  return total;
}

}  // namespace

Complex CompiledCircuit::overlap_derivatives(const Eigen::VectorXcd& input,
                                             const Eigen::VectorXcd& target,
                                             Eigen::Ref<Eigen::VectorXcd> dc) const {
  if (static_cast<std::size_t>(dc.size()) != trainable_count_) {
    throw std::invalid_argument("overlap_derivatives: derivative buffer has wrong length");
  }
  dc.setZero();
  Eigen::VectorXcd psi = input;
  apply(psi);
  const Complex c = target.dot(psi);
  Eigen::VectorXcd lambda = target;
  const FockBasis& basis = *basis_;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    const Op& op = *it;
    if (op.two_mode) {
      if (op.param_theta >= 0) {
        const auto& fam = basis.pair_families(op.i, op.j);
        dc[op.param_theta] += generator_expectation(fam, op.gen_theta, lambda, psi);
        dc[op.param_phi] += generator_expectation(fam, op.gen_phi, lambda, psi);
      }
    } else {
      for (const auto& term : op.terms) {
        Complex total = 0.0;
        for (std::size_t idx = 0; idx < basis.size(); ++idx) {
          const int n = basis.occupation(idx, term.mode);
          double w = 0.0;
          switch (term.kind) {
            case DerivKind::kCount: w = n; break;
            case DerivKind::kAtLeastOne: w = n >= 1 ? 1.0 : 0.0; break;
            case DerivKind::kBeyondOne: w = n >= 1 ? n - 1.0 : 0.0; break;
          }
          if (w != 0.0) total += std::conj(lambda[idx]) * psi[idx] * w;
        }
        dc[term.param] += kI * total;
      }
    }
    apply_op(op, psi, true);
    apply_op(op, lambda, true);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Free functions

FockState apply_circuit(const Circuit& circuit, const FockState& state) {
  if (state.mode_count() != circuit.mode_count()) {
    throw std::invalid_argument("apply_circuit: state has " + std::to_string(state.mode_count()) +
                                " modes, circuit has " + std::to_string(circuit.mode_count()));
  }
  FockState out(state);
  for (auto& [n, sector] : out.mutable_sectors()) {
    CompiledCircuit compiled(circuit, sector.basis);
    compiled.apply(sector.amplitudes);
  }
  return out;
}

namespace {

Circuit single_network(const NetworkParams& params, const NetworkErrors& errors) {
  Circuit circuit(params.mode_count());
  std::vector<int> map(params.mode_count());
  for (int k = 0; k < params.mode_count(); ++k) map[k] = k;
  circuit.add_network(params, std::move(map), false, errors);
  return circuit;
}

}  // namespace

FockState forward(const FockState& state, const NetworkParams& params, const NetworkErrors& errors) {
  return apply_circuit(single_network(params, errors), state);
}

Eigen::MatrixXcd network_matrix(const NetworkParams& params, const FockBasis& basis,
                                const NetworkErrors& errors) {
  // CompiledCircuit holds shared ownership of its basis.
  auto shared = enumerate_basis(basis.mode_count(), basis.photon_number());
  CompiledCircuit compiled(single_network(params, errors), shared);
  const std::size_t dim = shared->size();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) compiled.apply(w.col(c));
  return w;
}

}  // namespace qpnn
