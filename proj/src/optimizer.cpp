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

#include "qpnn/optimizer.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>

namespace qpnn {

namespace {

void check_orthonormal(const Eigen::MatrixXcd& p, const char* what) {
  const Eigen::MatrixXcd gram = p.adjoint() * p;
  const double dev = (gram - Eigen::MatrixXcd::Identity(p.cols(), p.cols())).cwiseAbs().maxCoeff();
  if (!(dev < 1e-10)) {
    throw std::invalid_argument(std::string("channel fidelity: ") + what +
                                " code vectors are not orthonormal (max deviation " +
                                std::to_string(dev) + ")");
  }
}

Complex unit_direction(Complex c) {
  const double mag = std::abs(c);
  return mag > 0.0 ? c / mag : Complex(0.0);
}

}  // namespace

double state_fidelity(const FockState& out, const FockState& target) {
  return std::abs(inner_product(target, out));
}

double channel_fidelity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& p_in,
                        const Eigen::MatrixXcd& p_out, const Eigen::MatrixXcd& v) {
  const Eigen::Index d = p_in.cols();
  if (d < 1 || p_out.cols() != d || v.rows() != d || v.cols() != d) {
    throw std::invalid_argument("channel_fidelity: code dimension mismatch");
  }
  if (w.rows() != p_out.rows() || w.cols() != p_in.rows()) {
    throw std::invalid_argument("channel_fidelity: W does not match the code vector length");
  }
  check_orthonormal(p_in, "input");
  check_orthonormal(p_out, "output");
  const Complex tr = (v.adjoint() * (p_out.adjoint() * w * p_in)).trace();
  const double dd = static_cast<double>(d);
  const double f_pro = std::norm(tr) / (dd * dd);
  return (dd * f_pro + 1.0) / (dd + 1.0);
}

double channel_fidelity(const Eigen::MatrixXcd& w, const Eigen::MatrixXcd& p,
                        const Eigen::MatrixXcd& v) {
  return channel_fidelity(w, p, p, v);
}

double fidelity_loss(double fidelity) {
  const double gap = 1.0 - fidelity;
  return gap * gap;
}

OverlapTerm OverlapTerm::from_states(const FockState& input, const FockState& target) {
  const auto& in = input.single_sector();
  const auto& out = target.single_sector();
  if (in.basis->photon_number() != out.basis->photon_number() ||
      in.basis->mode_count() != out.basis->mode_count()) {
    throw std::invalid_argument("OverlapTerm: input and target live in different sectors");
  }
  return {in.basis, in.amplitudes, out.amplitudes};
}

Objective Objective::state(const FockState& input, const FockState& target) {
  Objective obj;
  obj.terms_.push_back(OverlapTerm::from_states(input, target));
  obj.groups_.push_back({Kind::kState, 0, 1});
  return obj;
}

Objective Objective::mean_state(std::vector<OverlapTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("Objective::mean_state: no terms");
  Objective obj;
  obj.terms_ = std::move(terms);
  for (std::size_t k = 0; k < obj.terms_.size(); ++k) obj.groups_.push_back({Kind::kState, k, 1});
  return obj;
}

Objective Objective::channel(std::vector<FockState> inputs, std::vector<FockState> outputs,
                             const Eigen::MatrixXcd& v) {
  const std::size_t d = inputs.size();
  if (d == 0 || outputs.size() != d || static_cast<std::size_t>(v.rows()) != d ||
      static_cast<std::size_t>(v.cols()) != d) {
    throw std::invalid_argument("Objective::channel: code dimension mismatch");
  }
  const auto& basis = inputs[0].single_sector().basis;
  const Eigen::Index n = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXcd p_in(n, d), p_out(n, d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& si = inputs[k].single_sector();
    const auto& so = outputs[k].single_sector();
    if (si.basis->photon_number() != basis->photon_number() ||
        so.basis->photon_number() != basis->photon_number() ||
        si.basis->mode_count() != basis->mode_count() ||
        so.basis->mode_count() != basis->mode_count()) {
      throw std::invalid_argument("Objective::channel: code vectors must share one sector");
    }
    p_in.col(k) = si.amplitudes;
    p_out.col(k) = so.amplitudes;
  }
  check_orthonormal(p_in, "input");
  check_orthonormal(p_out, "output");
  Objective obj;
  const Eigen::MatrixXcd targets = p_out * v;
  for (std::size_t k = 0; k < d; ++k) obj.terms_.push_back({basis, p_in.col(k), targets.col(k)});
  obj.groups_.push_back({Kind::kChannel, 0, d});
  return obj;
}

Objective Objective::mean_of(const std::vector<Objective>& parts) {
  if (parts.empty()) throw std::invalid_argument("Objective::mean_of: no parts");
  Objective obj;
  for (const auto& part : parts) {
    const std::size_t offset = obj.terms_.size();
    obj.terms_.insert(obj.terms_.end(), part.terms_.begin(), part.terms_.end());
    for (auto g : part.groups_) {
      g.begin += offset;
      obj.groups_.push_back(g);
    }
  }
  return obj;
}

Objective::Value Objective::value(const std::vector<Complex>& c, std::vector<Complex>* g) const {
  Value v{0.0, 0.0, {}};
  if (g) g->assign(terms_.size(), Complex(0.0));
  const double groups = static_cast<double>(groups_.size());
  for (const auto& grp : groups_) {
    double fid;
    if (grp.kind == Kind::kState) {
      fid = std::abs(c[grp.begin]);
      if (g) (*g)[grp.begin] = -2.0 * (1.0 - fid) * unit_direction(c[grp.begin]) / groups;
    } else {
      Complex tau = 0.0;
      for (std::size_t k = grp.begin; k < grp.begin + grp.count; ++k) tau += c[k];
      const double d = static_cast<double>(grp.count);
      const double f_pro = std::norm(tau) / (d * d);
      fid = (d * f_pro + 1.0) / (d + 1.0);
      if (g) {
        const Complex gk = -2.0 * (1.0 - fid) * (d / (d + 1.0)) * (2.0 * tau / (d * d)) / groups;
        for (std::size_t k = grp.begin; k < grp.begin + grp.count; ++k) (*g)[k] = gk;
      }
    }
    v.group_fidelities.push_back(fid);
    v.loss += fidelity_loss(fid) / groups;
    v.fidelity += fid / groups;
  }
  return v;
}

Evaluation evaluate(const Circuit& circuit, const Objective& objective, bool with_gradient) {
  const auto& terms = objective.terms();
  std::map<const FockBasis*, std::unique_ptr<CompiledCircuit>> compiled;
  for (const auto& t : terms) {
    auto& slot = compiled[t.basis.get()];
    if (!slot) slot = std::make_unique<CompiledCircuit>(circuit, t.basis);
  }
  std::vector<Complex> c(terms.size());
  Evaluation ev;
  if (!with_gradient) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      c[k] = compiled[terms[k].basis.get()]->overlap(terms[k].input, terms[k].target);
    }
    auto v = objective.value(c, nullptr);
    ev.loss = v.loss;
    ev.fidelity = v.fidelity;
    ev.group_fidelities = std::move(v.group_fidelities);
    return ev;
  }
  if (!circuit.trainable()) throw std::invalid_argument("evaluate: circuit has no trainable network");
  const std::size_t p = circuit.network(*circuit.trainable()).parameter_count();
  Eigen::MatrixXcd dc(p, terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    c[k] = compiled[terms[k].basis.get()]->overlap_derivatives(terms[k].input, terms[k].target,
                                                               dc.col(k));
  }
  std::vector<Complex> g;
  auto v = objective.value(c, &g);
  ev.loss = v.loss;
  ev.fidelity = v.fidelity;
  ev.group_fidelities = std::move(v.group_fidelities);
  ev.gradient = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    ev.gradient += (std::conj(g[k]) * dc.col(k)).real();
  }
  return ev;
}

Eigen::VectorXd finite_difference_gradient(const Circuit& circuit, const Objective& objective,
                                           double step) {
  if (!circuit.trainable()) {
    throw std::invalid_argument("finite_difference_gradient: circuit has no trainable network");
  }
  const int idx = *circuit.trainable();
  Circuit work = circuit;
  const Eigen::VectorXd x0 = circuit.network(idx).flatten();
  Eigen::VectorXd grad(x0.size());
  for (Eigen::Index k = 0; k < x0.size(); ++k) {
    Eigen::VectorXd x = x0;
    x[k] = x0[k] + step;
    work.mutable_network(idx).assign(x);
    const double up = evaluate(work, objective, false).loss;
    x[k] = x0[k] - step;
    work.mutable_network(idx).assign(x);
    const double down = evaluate(work, objective, false).loss;
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

void TrainConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("TrainConfig: iterations must be >= 1");
  if (!(lr_end <= lr_start)) throw std::invalid_argument("TrainConfig: lr_end must be <= lr_start");
  if (!(lr_end >= 0.0)) throw std::invalid_argument("TrainConfig: learning rates must be >= 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("TrainConfig: Adam moments must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("TrainConfig: epsilon must be > 0");
  if (method == GradientMethod::kCentralDifference && !(fd_step > 0.0)) {
    throw std::invalid_argument("TrainConfig: finite-difference step must be > 0");
  }
}

DivergenceError::DivergenceError(int iteration, double loss)
    : std::runtime_error("training diverged at iteration " + std::to_string(iteration) +
                         " (loss = " + std::to_string(loss) + ")"),
      iteration_(iteration) {}

namespace {

std::vector<double> projections(const Circuit& circuit, const OverlapTerm& term) {
  CompiledCircuit compiled(circuit, term.basis);
  Eigen::VectorXcd psi = term.input;
  compiled.apply(psi);
  std::vector<double> out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k) out[k] = std::abs(psi[k]);
  return out;
}

}  // namespace

TrainResult train(Circuit circuit, const Objective& objective, const TrainConfig& cfg) {
  cfg.validate();
  if (!circuit.trainable()) throw std::invalid_argument("train: circuit has no trainable network");
  const int idx = *circuit.trainable();
  Eigen::VectorXd x = circuit.network(idx).flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
  TrainResult result;
  result.trace.loss.reserve(cfg.iterations);
  result.trace.fidelity.reserve(cfg.iterations);
  double b1t = 1.0, b2t = 1.0;
  for (int t = 0; t < cfg.iterations; ++t) {
    Evaluation ev;
    if (cfg.method == GradientMethod::kAnalytic) {
      ev = evaluate(circuit, objective, true);
    } else {
      ev = evaluate(circuit, objective, false);
      ev.gradient = finite_difference_gradient(circuit, objective, cfg.fd_step);
    }
    if (!std::isfinite(ev.loss) || !ev.gradient.allFinite()) throw DivergenceError(t, ev.loss);
    result.trace.loss.push_back(ev.loss);
    result.trace.fidelity.push_back(ev.fidelity);
    if (cfg.record_projections) result.trace.projections.push_back(projections(circuit, objective.terms()[0]));

    const double frac = cfg.iterations > 1 ? static_cast<double>(t) / (cfg.iterations - 1) : 0.0;
    const double lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * frac;
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * ev.gradient;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * ev.gradient.cwiseAbs2();
    const Eigen::VectorXd m_hat = m / (1.0 - b1t);
    const Eigen::VectorXd v_hat = v / (1.0 - b2t);
    x.array() -= lr * m_hat.array() / (v_hat.array().sqrt() + cfg.epsilon);
    circuit.mutable_network(idx).assign(x);
  }
  result.final = evaluate(circuit, objective, false);
  if (!std::isfinite(result.final.loss)) throw DivergenceError(cfg.iterations, result.final.loss);
  result.params = circuit.network(idx);
  return result;
}

}  // namespace qpnn
