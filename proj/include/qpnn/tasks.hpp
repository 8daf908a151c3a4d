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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpnn/fock.hpp"
#include "qpnn/network.hpp"
#include "qpnn/optimizer.hpp"

namespace qpnn {

/// Seed splitting: the seed of replica `index` under `root`.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t index);

/// Worker count used when a caller passes 0.
int default_workers();

// ---------------------------------------------------------------------------
// Target states

FockState make_noon_state(int photons, int mode_a, int mode_b, int modes);

/// Haar unitary on the full basis applied to its first element.
FockState sample_haar_state(const BasisPtr& basis, std::uint64_t seed);

/// One photon in each of the first `photons` modes.
FockState first_modes_input(int modes, int photons);

// ---------------------------------------------------------------------------
// Binomial code

struct CodeSpec {
  int n = 0;        // code parameter; photon number is 2n - 1
  int photons = 0;
  FockState zero{2};
  FockState one{2};
};

/// zero = 2^-(n-1) sum_j sqrt(C(2n-1, 2j)) |2j, 2n-1-2j>, one uses odd occupations.
CodeSpec binomial_code(int n);

/// alpha |0~> + beta |1~>, renormalized.
FockState logical_state(const CodeSpec& code, Complex alpha, Complex beta);

enum class LogicalGate { kH, kS, kT, kCZ };
Eigen::MatrixXcd logical_gate_target(LogicalGate gate);
LogicalGate parse_logical_gate(const std::string& name);

// ---------------------------------------------------------------------------
// Training tasks

struct TaskResult {
  NetworkParams params;
  double fidelity = 0.0;
  std::vector<double> group_fidelities;
  TrainingTrace trace;
  int best_restart = 0;
};

/// Restarts use seeds split from cfg.seed; the run with the lowest final loss wins.
TaskResult train_network(int modes, int layers, const Objective& objective,
                         const TrainConfig& cfg, int restarts = 1,
                         bool final_activation = true);

TaskResult run_state_prep(const FockState& target, const FockState& input, int layers,
                          const TrainConfig& cfg, int restarts = 1);

/// Channel training: inputs[k] -> sum_j v(j, k) outputs[j].
TaskResult run_channel_prep(const std::vector<FockState>& inputs,
                            const std::vector<FockState>& outputs, const Eigen::MatrixXcd& v,
                            int layers, const TrainConfig& cfg, int restarts = 1);

/// |0,2n-1> -> |0~>, |2n-1,0> -> |1~>.
TaskResult run_encoding(const CodeSpec& code, int layers, const TrainConfig& cfg, int restarts = 1);

/// Single-qubit logical gate on the code space.
TaskResult run_logical_gate(const CodeSpec& code, LogicalGate gate, int layers,
                            const TrainConfig& cfg, int restarts = 1);

// ---------------------------------------------------------------------------
// Logical CZ

/// Code basis on one rail pair (outer, inner): |0~> -> |P,0>, |1~> -> |P-1,1>.
std::vector<FockState> rail_states(const CodeSpec& code);

TaskResult train_cz_encoder(const CodeSpec& code, int layers, const TrainConfig& cfg,
                            int restarts = 1);
TaskResult train_cz_decoder(const CodeSpec& code, int layers, const TrainConfig& cfg,
                            int restarts = 1);

/// A network applied to a rail pair, optionally inverted.
struct RailProgram {
  NetworkParams params;
  bool inverse = false;
};

/**
 * Four physical modes: rail A is (0, 1), rail B is (3, 2), so modes 1 and 2
 * are the inner rails. Circuit: encoders, coupler mzi_transfer(pi/2, 0) on
 * (1, 2), nonlinearity on modes 1 and 2, adjoint coupler, decoders.
 */
Circuit cz_circuit(const RailProgram& encoder, const RailProgram& decoder,
                   const NonlinearParams& nl);

/// Logical basis |ab~> on the four modes, ordered 00, 01, 10, 11.
std::vector<FockState> cz_logical_basis(const CodeSpec& code);

double run_logical_cz(const RailProgram& encoder, const RailProgram& decoder,
                      const CodeSpec& code, const NonlinearParams& nl = {0.0, 3.141592653589793});

// ---------------------------------------------------------------------------
// Splitter-error Monte Carlo

struct MonteCarloSummary {
  std::vector<double> fidelities;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double variance = 0.0;  // population variance
};

/// Sample k draws its errors from split_seed(seed, k) and is independent of `workers`.
MonteCarloSummary splitter_monte_carlo(const NetworkParams& params, const Objective& objective,
                                       double sigma, int samples, std::uint64_t seed,
                                       int workers = 0);

MonteCarloSummary summarize(std::vector<double> values);

// ---------------------------------------------------------------------------
// Routing gate and loss correction

/// |1, n> -> |0, n + 1> for n = 0..max_n.
Objective routing_objective(int max_n);
TaskResult train_routing_gate(int max_n, int layers, const TrainConfig& cfg, int restarts = 1);

/// Ancilla is mode 0, the code occupies modes 1 and 2.
struct CorrectionPipeline {
  CodeSpec code;
  NetworkParams routing;
  NetworkParams recovery;
};

/// Probability distribution of the photon number in the code modes (1, 2).
std::map<int, double> code_photon_number(const FockState& state);

enum class Syndrome { kNoLoss, kSingleLoss, kUncorrectable };
Syndrome classify_syndrome(const CodeSpec& code, int code_photons);

/// |1> (x) (a|0~> + b|1~>) on three modes.
FockState pipeline_input(const CodeSpec& code, Complex alpha, Complex beta);
/// |0> (x) (a|0~> + b|1~>).
FockState pipeline_target(const CodeSpec& code, Complex alpha, Complex beta);

/// Loss on code mode `loss_mode` (1 or 2) followed by the routing network.
FockState routed_error_state(const CodeSpec& code, const NetworkParams& routing, int loss_mode,
                             Complex alpha, Complex beta);

/// Trains the shared recovery network on both loss locations for every logical state.
TaskResult train_recovery(const CodeSpec& code, const NetworkParams& routing, int layers,
                          const TrainConfig& cfg, int restarts = 1);

struct CorrectionOutcome {
  Syndrome syndrome;
  int measured_photons;
  double weight;    // branch probability weight before renormalization
  double fidelity;  // 0 when uncorrectable
};

/// loss_mode: -1 for the no-loss branch, else a physical code mode (1 or 2).
CorrectionOutcome run_loss_correction_demo(const CorrectionPipeline& pipeline, int loss_mode,
                                           Complex alpha, Complex beta);

/// Upper bound on min over the two loss locations of the recovered fidelity
/// achievable by any single unitary, given the overlap of the two error states.
double shared_recovery_bound(const CodeSpec& code, Complex alpha, Complex beta);

}  // namespace qpnn
