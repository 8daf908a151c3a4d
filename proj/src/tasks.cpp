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

#include "qpnn/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "qpnn/interferometer.hpp"

namespace qpnn {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int t = 1; t <= k; ++t) b = b * (n - k + t) / t;
  return b;
}

std::vector<int> identity_map(int modes) {
  std::vector<int> map(modes);
  for (int k = 0; k < modes; ++k) map[k] = k;
  return map;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 applied to root advanced by (index + 1) golden-ratio increments.
  std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// Target states

FockState make_noon_state(int photons, int mode_a, int mode_b, int modes) {
  if (photons < 1) throw std::invalid_argument("make_noon_state: N must be >= 1");
  if (mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= modes || mode_b >= modes) {
    throw std::out_of_range("make_noon_state: mode pair out of range");
  }
  auto basis = enumerate_basis(modes, photons);
  Occupation occ(modes, 0);
  occ[mode_a] = photons;
  const std::size_t ia = *basis->index_of(occ);
  occ[mode_a] = 0;
  occ[mode_b] = photons;
  const std::size_t ib = *basis->index_of(occ);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->size());
  amps[ia] = amps[ib] = 1.0 / std::sqrt(2.0);
  return FockState::from_amplitudes(basis, amps);
}

FockState sample_haar_state(const BasisPtr& basis, std::uint64_t seed) {
  const Eigen::MatrixXcd u = sample_haar_unitary(static_cast<int>(basis->size()), seed);
  Eigen::VectorXcd amps = u.col(0);
  amps.normalize();
  return FockState::from_amplitudes(basis, amps);
}

FockState first_modes_input(int modes, int photons) {
  if (photons > modes) throw std::invalid_argument("first_modes_input: more photons than modes");
  Occupation occ(modes, 0);
  for (int k = 0; k < photons; ++k) occ[k] = 1;
  return FockState::basis_state(occ);
}

// ---------------------------------------------------------------------------
// Binomial code

CodeSpec binomial_code(int n) {
  if (n < 2) throw std::invalid_argument("binomial_code: N must be >= 2");
  CodeSpec code;
  code.n = n;
  code.photons = 2 * n - 1;
  auto basis = enumerate_basis(2, code.photons);
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(basis->size());
  Eigen::VectorXcd one = Eigen::VectorXcd::Zero(basis->size());
  const double scale = std::pow(2.0, -(n - 1));
  for (int k = 0; k <= code.photons; ++k) {
    const int occ[2] = {k, code.photons - k};
    const double amp = scale * std::sqrt(binomial(code.photons, k));
    (k % 2 == 0 ? zero : one)[*basis->index_of(occ)] = amp;
  }
  code.zero = FockState::from_amplitudes(basis, zero);
  code.one = FockState::from_amplitudes(basis, one);
  return code;
}

FockState logical_state(const CodeSpec& code, Complex alpha, Complex beta) {
  const auto& basis = code.zero.single_sector().basis;
  Eigen::VectorXcd amps =
      alpha * code.zero.single_sector().amplitudes + beta * code.one.single_sector().amplitudes;
  const double norm = amps.norm();
  if (norm == 0.0) throw std::invalid_argument("logical_state: zero logical amplitudes");
  return FockState::from_amplitudes(basis, amps / norm);
}

Eigen::MatrixXcd logical_gate_target(LogicalGate gate) {
  const double pi = std::numbers::pi;
  switch (gate) {
    case LogicalGate::kH: {
      Eigen::MatrixXcd h(2, 2);
      h << 1, 1, 1, -1;
      return h / std::sqrt(2.0);
    }
    case LogicalGate::kS: {
      Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(2, 2);
      s(1, 1) = Complex(0.0, 1.0);
      return s;
    }
    case LogicalGate::kT: {
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(2, 2);
      t(1, 1) = std::polar(1.0, pi / 4);
      return t;
    }
    case LogicalGate::kCZ: {
      Eigen::MatrixXcd cz = Eigen::MatrixXcd::Identity(4, 4);
      cz(3, 3) = -1.0;
      return cz;
    }
  }
  throw std::invalid_argument("logical_gate_target: unknown gate");
}

LogicalGate parse_logical_gate(const std::string& name) {
  if (name == "H") return LogicalGate::kH;
  if (name == "S") return LogicalGate::kS;
  if (name == "T") return LogicalGate::kT;
  if (name == "CZ") return LogicalGate::kCZ;
  throw std::invalid_argument("unknown logical gate '" + name + "' (expected H, S, T or CZ)");
}

// ---------------------------------------------------------------------------
// Training tasks

TaskResult train_network(int modes, int layers, const Objective& objective,
                         const TrainConfig& cfg, int restarts, bool final_activation) {
  if (restarts < 1) throw std::invalid_argument("train_network: restarts must be >= 1");
  TaskResult best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    NetworkParams init = NetworkParams::random(modes, layers, split_seed(cfg.seed, r));
    init.set_final_activation(final_activation);
    Circuit circuit(modes);
    circuit.set_trainable(circuit.add_network(std::move(init), identity_map(modes)));
    TrainResult run = train(std::move(circuit), objective, cfg);
    if (run.final.loss < best_loss) {
      best_loss = run.final.loss;
      best.params = std::move(run.params);
      best.fidelity = run.final.fidelity;
      best.group_fidelities = run.final.group_fidelities;
      best.trace = std::move(run.trace);
      best.best_restart = r;
    }
  }
  return best;
}

TaskResult run_state_prep(const FockState& target, const FockState& input, int layers,
                          const TrainConfig& cfg, int restarts) {
  if (target.mode_count() != input.mode_count()) {
    throw std::invalid_argument("run_state_prep: input and target mode counts differ");
  }
  const auto& ts = target.single_sector();
  const auto& is = input.single_sector();
  if (ts.basis->photon_number() != is.basis->photon_number()) {
    throw std::invalid_argument("run_state_prep: photon numbers differ (" +
                                std::to_string(is.basis->photon_number()) + " vs " +
                                std::to_string(ts.basis->photon_number()) + ")");
  }
  return train_network(input.mode_count(), layers, Objective::state(input, target), cfg, restarts);
}

TaskResult run_channel_prep(const std::vector<FockState>& inputs,
                            const std::vector<FockState>& outputs, const Eigen::MatrixXcd& v,
                            int layers, const TrainConfig& cfg, int restarts) {
  if (inputs.empty()) throw std::invalid_argument("run_channel_prep: no code vectors");
  const int modes = inputs[0].mode_count();
  return train_network(modes, layers, Objective::channel(inputs, outputs, v), cfg, restarts);
}

TaskResult run_encoding(const CodeSpec& code, int layers, const TrainConfig& cfg, int restarts) {
  const int p = code.photons;
  const int in0[2] = {0, p};
  const int in1[2] = {p, 0};
  return run_channel_prep({FockState::basis_state(in0), FockState::basis_state(in1)},
                          {code.zero, code.one}, Eigen::MatrixXcd::Identity(2, 2), layers, cfg,
                          restarts);
}

TaskResult run_logical_gate(const CodeSpec& code, LogicalGate gate, int layers,
                            const TrainConfig& cfg, int restarts) {
  if (gate == LogicalGate::kCZ) {
    throw std::invalid_argument("run_logical_gate: CZ is a two-rail circuit, see run_logical_cz");
  }
  return run_channel_prep({code.zero, code.one}, {code.zero, code.one}, logical_gate_target(gate),
                          layers, cfg, restarts);
}

// ---------------------------------------------------------------------------
// Logical CZ

std::vector<FockState> rail_states(const CodeSpec& code) {
  const int p = code.photons;
  const int zero[2] = {p, 0};
  const int one[2] = {p - 1, 1};
  return {FockState::basis_state(zero), FockState::basis_state(one)};
}

TaskResult train_cz_encoder(const CodeSpec& code, int layers, const TrainConfig& cfg,
                            int restarts) {
  return run_channel_prep({code.zero, code.one}, rail_states(code),
                          Eigen::MatrixXcd::Identity(2, 2), layers, cfg, restarts);
}

TaskResult train_cz_decoder(const CodeSpec& code, int layers, const TrainConfig& cfg,
                            int restarts) {
  return run_channel_prep(rail_states(code), {code.zero, code.one},
                          Eigen::MatrixXcd::Identity(2, 2), layers, cfg, restarts);
}

Circuit cz_circuit(const RailProgram& encoder, const RailProgram& decoder,
                   const NonlinearParams& nl) {
  if (encoder.params.mode_count() != 2 || decoder.params.mode_count() != 2) {
    throw std::invalid_argument("cz_circuit: rail programs must act on two modes");
  }
  Circuit circuit(4);
  circuit.add_network(encoder.params, {0, 1}, encoder.inverse);
  circuit.add_network(encoder.params, {3, 2}, encoder.inverse);
  const Eigen::Matrix2cd coupler = mzi_transfer({std::numbers::pi / 2, 0.0});
  circuit.add_kernel(coupler, 1, 2);
  std::vector<NonlinearParams> phases(4);
  phases[1] = phases[2] = nl;
  circuit.add_nonlinear(phases);
  circuit.add_kernel(coupler.adjoint(), 1, 2);
  circuit.add_network(decoder.params, {0, 1}, decoder.inverse);
  circuit.add_network(decoder.params, {3, 2}, decoder.inverse);
  return circuit;
}

std::vector<FockState> cz_logical_basis(const CodeSpec& code) {
  const int p = code.photons;
  auto basis = enumerate_basis(4, 2 * p);
  const auto& rail_basis = *code.zero.single_sector().basis;
  const Eigen::VectorXcd* logical[2] = {&code.zero.single_sector().amplitudes,
                                        &code.one.single_sector().amplitudes};
  std::vector<FockState> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->size());
      for (std::size_t x = 0; x < rail_basis.size(); ++x) {
        for (std::size_t y = 0; y < rail_basis.size(); ++y) {
          const Complex c = (*logical[a])[x] * (*logical[b])[y];
          if (c == Complex(0.0)) continue;
          // Rail B is (outer, inner) = physical (3, 2).
          const int occ[4] = {rail_basis.occupation(x, 0), rail_basis.occupation(x, 1),
                              rail_basis.occupation(y, 1), rail_basis.occupation(y, 0)};
          amps[*basis->index_of(occ)] = c;
        }
      }
      out.push_back(FockState::from_amplitudes(basis, amps));
    }
  }
  return out;
}

double run_logical_cz(const RailProgram& encoder, const RailProgram& decoder,
                      const CodeSpec& code, const NonlinearParams& nl) {
  const auto logical = cz_logical_basis(code);
  const Objective obj = Objective::channel(logical, logical, logical_gate_target(LogicalGate::kCZ));
  return evaluate(cz_circuit(encoder, decoder, nl), obj, false).fidelity;
}

// ---------------------------------------------------------------------------
// Splitter-error Monte Carlo

MonteCarloSummary summarize(std::vector<double> values) {
  MonteCarloSummary s;
  s.fidelities = std::move(values);
  if (s.fidelities.empty()) return s;
  std::vector<double> sorted = s.fidelities;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  s.min = sorted.front();
  s.max = sorted.back();
  // Shifted by the first sample so that identical samples give exactly zero spread.
  const double shift = s.fidelities.front();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double f : s.fidelities) {
    sum += f - shift;
    sum_sq += (f - shift) * (f - shift);
  }
  s.mean = shift + sum / n;
  s.variance = std::max(0.0, (sum_sq - sum * sum / n) / n);
  return s;
}

MonteCarloSummary splitter_monte_carlo(const NetworkParams& params, const Objective& objective,
                                       double sigma, int samples, std::uint64_t seed,
                                       int workers) {
  if (samples < 1) throw std::invalid_argument("splitter_monte_carlo: samples must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("splitter_monte_carlo: sigma must be >= 0");
  if (workers <= 0) workers = default_workers();
  workers = std::min(workers, samples);
  std::vector<double> fidelities(samples);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < samples; k = next++) {
      const std::uint64_t sample_seed = split_seed(seed, k);
      NetworkErrors errors;
      for (int l = 0; l < params.layer_count(); ++l) {
        errors.push_back(
            sample_splitter_errors(params.layers()[l].mesh, sigma, split_seed(sample_seed, l)));
      }
      Circuit circuit(params.mode_count());
      circuit.add_network(params, identity_map(params.mode_count()), false, std::move(errors));
      fidelities[k] = evaluate(circuit, objective, false).fidelity;
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return summarize(std::move(fidelities));
}

// ---------------------------------------------------------------------------
// Routing gate and loss correction

Objective routing_objective(int max_n) {
  if (max_n < 0) throw std::invalid_argument("routing_objective: max_n must be >= 0");
  std::vector<OverlapTerm> terms;
  for (int n = 0; n <= max_n; ++n) {
    auto basis = enumerate_basis(2, n + 1);
    const int in[2] = {1, n};
    const int out[2] = {0, n + 1};
    terms.push_back(OverlapTerm::from_states(FockState::basis_state(basis, in),
                                             FockState::basis_state(basis, out)));
  }
  return Objective::mean_state(std::move(terms));
}

TaskResult train_routing_gate(int max_n, int layers, const TrainConfig& cfg, int restarts) {
  return train_network(2, layers, routing_objective(max_n), cfg, restarts);
}

std::map<int, double> code_photon_number(const FockState& state) {
  if (state.mode_count() != 3) throw std::invalid_argument("code_photon_number: expected 3 modes");
  std::map<int, double> dist;
  const double total = state.squared_norm();
  for (const auto& [n, sector] : state.sectors()) {
    const auto& basis = *sector.basis;
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
      const double p = std::norm(sector.amplitudes[idx]);
      if (p == 0.0) continue;
      dist[basis.occupation(idx, 1) + basis.occupation(idx, 2)] += p / total;
    }
  }
  return dist;
}

Syndrome classify_syndrome(const CodeSpec& code, int code_photons) {
  if (code_photons == code.photons) return Syndrome::kNoLoss;
  if (code_photons == code.photons - 1) return Syndrome::kSingleLoss;
  return Syndrome::kUncorrectable;
}

namespace {

FockState with_ancilla(const FockState& code_state, int ancilla) {
  const auto& cs = code_state.single_sector();
  const int p = cs.basis->photon_number();
  auto basis = enumerate_basis(3, p + ancilla);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(basis->size());
  for (std::size_t x = 0; x < cs.basis->size(); ++x) {
    const int occ[3] = {ancilla, cs.basis->occupation(x, 0), cs.basis->occupation(x, 1)};
    amps[*basis->index_of(occ)] = cs.amplitudes[x];
  }
  return FockState::from_amplitudes(basis, amps);
}

FockState routed(const FockState& state, const NetworkParams& routing) {
  Circuit circuit(3);
  circuit.add_network(routing, {0, 1});
  return apply_circuit(circuit, state);
}

}  // namespace

FockState pipeline_input(const CodeSpec& code, Complex alpha, Complex beta) {
  return with_ancilla(logical_state(code, alpha, beta), 1);
}

FockState pipeline_target(const CodeSpec& code, Complex alpha, Complex beta) {
  return with_ancilla(logical_state(code, alpha, beta), 0);
}

FockState routed_error_state(const CodeSpec& code, const NetworkParams& routing, int loss_mode,
                             Complex alpha, Complex beta) {
  if (loss_mode != 1 && loss_mode != 2) {
    throw std::invalid_argument("routed_error_state: loss mode must be a code mode (1 or 2)");
  }
  const LossBranch branch = apply_loss(pipeline_input(code, alpha, beta), loss_mode);
  return routed(branch.state, routing);
}

TaskResult train_recovery(const CodeSpec& code, const NetworkParams& routing, int layers,
                          const TrainConfig& cfg, int restarts) {
  if (restarts < 1) throw std::invalid_argument("train_recovery: restarts must be >= 1");
  std::vector<Objective> parts;
  const std::vector<FockState> targets = {pipeline_target(code, 1.0, 0.0),
                                          pipeline_target(code, 0.0, 1.0)};
  for (int loss_mode : {1, 2}) {
    parts.push_back(Objective::channel({routed_error_state(code, routing, loss_mode, 1.0, 0.0),
                                        routed_error_state(code, routing, loss_mode, 0.0, 1.0)},
                                       targets, Eigen::MatrixXcd::Identity(2, 2)));
  }
  const Objective objective = Objective::mean_of(parts);
  TaskResult best;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Circuit circuit(3);
    circuit.set_trainable(
        circuit.add_network(NetworkParams::random(2, layers, split_seed(cfg.seed, r)), {1, 2}));
    TrainResult run = train(std::move(circuit), objective, cfg);
    if (run.final.loss < best_loss) {
      best_loss = run.final.loss;
      best.params = std::move(run.params);
      best.fidelity = run.final.fidelity;
      best.group_fidelities = run.final.group_fidelities;
      best.trace = std::move(run.trace);
      best.best_restart = r;
    }
  }
  return best;
}

CorrectionOutcome run_loss_correction_demo(const CorrectionPipeline& pipeline, int loss_mode,
                                           Complex alpha, Complex beta) {
  const CodeSpec& code = pipeline.code;
  const FockState input = pipeline_input(code, alpha, beta);
  LossBranch branch{input, 1.0};
  if (loss_mode != -1) {
    if (loss_mode != 1 && loss_mode != 2) {
      throw std::invalid_argument("run_loss_correction_demo: loss mode must be -1, 1 or 2");
    }
    branch = apply_loss(input, loss_mode);
  }
  CorrectionOutcome outcome{Syndrome::kUncorrectable, -1, branch.weight, 0.0};
  const auto dist = code_photon_number(branch.state);
  if (dist.size() != 1) return outcome;  // not a definite syndrome
  outcome.measured_photons = dist.begin()->first;
  outcome.syndrome = classify_syndrome(code, outcome.measured_photons);
  switch (outcome.syndrome) {
    case Syndrome::kNoLoss:
      outcome.fidelity = state_fidelity(branch.state, input);
      break;
    case Syndrome::kSingleLoss: {
      Circuit circuit(3);
      circuit.add_network(pipeline.routing, {0, 1});
      circuit.add_network(pipeline.recovery, {1, 2});
      outcome.fidelity =
          state_fidelity(apply_circuit(circuit, branch.state), pipeline_target(code, alpha, beta));
      break;
    }
    case Syndrome::kUncorrectable:
      break;
  }
  return outcome;
}

double shared_recovery_bound(const CodeSpec& code, Complex alpha, Complex beta) {
  const FockState input = pipeline_input(code, alpha, beta);
  const double overlap =
      std::min(1.0, std::abs(inner_product(apply_loss(input, 1).state, apply_loss(input, 2).state)));
  return std::cos(std::acos(overlap) / 2.0);
}

}  // namespace qpnn
