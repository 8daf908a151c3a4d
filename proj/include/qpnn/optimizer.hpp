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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qpnn/fock.hpp"
#include "qpnn/network.hpp"

namespace qpnn {

/// |<target|out>|; sectors present in only one argument contribute nothing.
double state_fidelity(const FockState& out, const FockState& target);

/**
 * Average channel fidelity (d F_pro + 1) / (d + 1) with
 * F_pro = |Tr(V^dagger P_out^dagger W P_in)|^2 / d^2.
 *
 * The columns of p_in and p_out are orthonormal code vectors; d is their count.
 */
double channel_fidelity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& p_in,
                        const Eigen::MatrixXcd& p_out, const Eigen::MatrixXcd& v);
double channel_fidelity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& p,
                        const Eigen::MatrixXcd& v);

/// (1 - F)^2.
double fidelity_loss(double fidelity);

/// One overlap <target| W |input> on a fixed-photon-number basis.
struct OverlapTerm {
  BasisPtr basis;
  Eigen::VectorXcd input;
  Eigen::VectorXcd target;

  static OverlapTerm from_states(const FockState& input, const FockState& target);
};

/**
 * Loss built from overlaps c_k = <t_k| W |s_k>, organised in groups.
 *
 *   state group:   one term, F = |c|.
 *   channel group: d terms, F = (d |sum c_k|^2 / d^2 + 1) / (d + 1), with
 *                  t_k = P_out V e_k and s_k = P_in e_k.
 *
 * Each group contributes (1 - F)^2; the loss is the mean over groups and the
 * reported fidelity is the mean group fidelity.
 */
class Objective {
 public:
  enum class Kind { kState, kChannel };
  struct Group {
    Kind kind;
    std::size_t begin;
    std::size_t count;
  };

  static Objective state(const FockState& input, const FockState& target);
  /// One state group per term.
  static Objective mean_state(std::vector<OverlapTerm> terms);
  static Objective channel(std::vector<FockState> inputs, std::vector<FockState> outputs,
                           const Eigen::MatrixXcd& v);
  /// Concatenates the groups of several objectives.
  static Objective mean_of(const std::vector<Objective>& parts);

  const std::vector<OverlapTerm>& terms() const { return terms_; }
  const std::vector<Group>& groups() const { return groups_; }

  struct Value {
    double loss;
    double fidelity;
    std::vector<double> group_fidelities;
  };
  /// Loss and, if g is non-null, g_k = dL/dRe(c_k) + i dL/dIm(c_k).
  Value value(const std::vector<Complex>& c, std::vector<Complex>* g) const;

 private:
  std::vector<OverlapTerm> terms_;
  std::vector<Group> groups_;
};

struct Evaluation {
  double loss = 0.0;
  double fidelity = 0.0;
  std::vector<double> group_fidelities;
  Eigen::VectorXd gradient;  // empty unless requested
};

/// Evaluates the objective on the circuit; the gradient is over the trainable network.
Evaluation evaluate(const Circuit& circuit, const Objective& objective, bool with_gradient);

/// Central differences over the trainable network's flat parameters.
Eigen::VectorXd finite_difference_gradient(const Circuit& circuit, const Objective& objective,
                                           double step = 1e-5);

enum class GradientMethod { kAnalytic, kCentralDifference };

struct TrainConfig {
  int iterations = 2000;
  double lr_start = 0.025;
  double lr_end = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  GradientMethod method = GradientMethod::kAnalytic;
  double fd_step = 1e-5;
  /// Record |<e_k|W s_0>| for every basis element of the first term.
  bool record_projections = false;

  void validate() const;
};

struct TrainingTrace {
  std::vector<double> loss;
  std::vector<double> fidelity;
  std::vector<std::vector<double>> projections;
};

struct TrainResult {
  NetworkParams params;
  TrainingTrace trace;
  Evaluation final;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int iteration, double loss);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Adam with a learning rate interpolated linearly from lr_start to lr_end.
TrainResult train(Circuit circuit, const Objective& objective, const TrainConfig& cfg);

}  // namespace qpnn
