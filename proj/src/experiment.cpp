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

#include "qpnn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpnn/scattering.hpp"
#include "qpnn/tasks.hpp"

namespace qpnn {

namespace {

constexpr double kPi = std::numbers::pi;

Json phase_grid(int points) {
  Json a = Json::array();
  for (int k = 0; k < points; ++k) a.push_back(2.0 * kPi * k / (points - 1));
  return a;
}

const std::vector<TaskSchema>& build_catalog() {
  static const std::vector<TaskSchema> catalog = {
      {"state-prep",
       "Train a network to map one photon in each of the first modes to a target state.",
       {{"modes", 4, "mode count M"},
        {"photons", 2, "photon number N"},
        {"layers", 4, "network depth L"},
        {"target", "haar", "haar | noon"},
        {"target_seed", -1, "seed of the Haar target; -1 derives it from the root seed"},
        {"final_activation", true, "apply the last layer's nonlinearity"}}},
      {"channel-prep",
       "Train a two-mode channel on the binomial code: encoding or a logical gate.",
       {{"code_n", 3, "binomial code parameter; photon number 2n - 1"},
        {"layers", 4, "network depth L"},
        {"operation", "encode", "encode | H | S | T"}}},
      {"logical-cz",
       "Train rail encoder and decoder, then score the four-mode controlled-phase circuit.",
       {{"code_n", 3, "binomial code parameter"},
        {"encoder_layers", 5, "encoder depth"},
        {"decoder_layers", 5, "decoder depth"},
        {"phi1", 0.0, "coupler nonlinearity phi1"},
        {"phi2", kPi, "coupler nonlinearity phi2"}}},
      {"monte-carlo",
       "Train (or load) a state-preparation network and sample splitter errors.",
       {{"modes", 4, "mode count M"},
        {"photons", 4, "photon number N"},
        {"layers", 3, "network depth L"},
        {"target", "noon", "haar | noon"},
        {"target_seed", -1, "seed of the Haar target; -1 derives it from the root seed"},
        {"sigma", 0.01, "standard deviation of the splitter angles"},
        {"samples", 10000, "number of error draws"},
        {"checkpoint", "", "optional checkpoint to evaluate instead of training"}}},
      {"routing-gate",
       "Train the two-mode routing gate |1, n> -> |0, n + 1> for n = 0..max_n.",
       {{"max_n", 4, "largest code-mode photon number"}, {"layers", 5, "network depth L"}}},
      {"loss-correction",
       "Train routing and recovery networks and run the single-loss correction pipeline.",
       {{"code_n", 2, "binomial code parameter"},
        {"routing_layers", 5, "routing gate depth"},
        {"recovery_layers", 3, "recovery network depth"},
        {"theta", kPi / 2, "logical state cos(theta/2)|0> + e^{i phase} sin(theta/2)|1>"},
        {"phase", 0.0, "relative phase of the logical state"}}},
      {"scattering-sweep",
       "Two-photon gate fidelity of the cascaded Lambda-atom nonlinearity over a parameter grid.",
       {{"sigma_over_g", Json::array({0.1, 0.5, 1.0}), "spectral FWHM values"},
        {"kappa_over_g", Json::array({1.0}), "cavity decay values"},
        {"phi1", Json::array({0.0}), "phi1 values"},
        {"phi2", phase_grid(9), "phi2 values"},
        {"fwhm_span", 8.0, "grid span in temporal FWHM"},
        {"richardson_tolerance", 1e-4, "accepted change of F on halving the step"},
        {"max_refinements", 2, "extra halvings while the tolerance is missed"},
        {"max_grid_size", 10000, "largest time grid; two-time grids grow quadratically"}}},
  };
  return catalog;
}

const TaskSchema& schema_for(const std::string& task) {
  for (const auto& s : build_catalog()) {
    if (s.id == task) return s;
  }
  throw ConfigError("unknown task '" + task + "'");
}

// Checks that `value` has the JSON type of `reference`.
void check_type(const std::string& key, const Json& value, const Json& reference) {
  bool ok;
  if (reference.is_boolean()) {
    ok = value.is_boolean();
  } else if (reference.is_number_integer()) {
    ok = value.is_number_integer();
  } else if (reference.is_number()) {
    ok = value.is_number();
  } else if (reference.is_string()) {
    ok = value.is_string();
  } else if (reference.is_array()) {
    ok = value.is_array() && !value.empty() &&
         std::all_of(value.begin(), value.end(), [](const Json& e) { return e.is_number(); });
  } else {
    ok = false;
  }
  if (!ok) throw ConfigError("'" + key + "' has the wrong type");
}

Json merge_defaults(const std::string& scope, const Json& given,
                    const std::vector<std::pair<std::string, Json>>& defaults) {
  if (!given.is_object()) throw ConfigError("'" + scope + "' must be an object");
  Json out = Json::object();
  for (const auto& [k, v] : defaults) out[k] = v;
  for (const auto& [k, v] : given.items()) {
    if (!out.contains(k)) throw ConfigError("unknown key '" + scope + "." + k + "'");
    check_type(scope + "." + k, v, out[k]);
    out[k] = v;
  }
  return out;
}

const std::vector<std::pair<std::string, Json>>& train_defaults() {
  static const std::vector<std::pair<std::string, Json>> d = [] {
    const TrainConfig t;
    return std::vector<std::pair<std::string, Json>>{
        {"iterations", t.iterations},   {"lr_start", t.lr_start},
        {"lr_end", t.lr_end},           {"beta1", t.beta1},
        {"beta2", t.beta2},             {"epsilon", t.epsilon},
        {"gradient", "analytic"},       {"fd_step", t.fd_step},
        {"record_projections", false},  {"restarts", 1}};
  }();
  return d;
}

int positive_int(const Json& params, const char* key, int min = 1) {
  const int v = params.at(key).get<int>();
  if (v < min) throw ConfigError(std::string("'") + key + "' must be >= " + std::to_string(min));
  return v;
}

void guard_basis(const ExperimentConfig& c, int modes, int photons) {
  const std::size_t dim = fock_dimension(modes, photons);
  if (dim > c.basis_cap) {
    throw ResourceGuardError("basis of " + std::to_string(modes) + " modes and " +
                             std::to_string(photons) + " photons has dimension " +
                             std::to_string(dim) + ", above the cap " +
                             std::to_string(c.basis_cap));
  }
}

class Artifacts {
 public:
  explicit Artifacts(const std::filesystem::path& dir) : dir_(dir) {
    std::filesystem::create_directories(dir_);
  }
  void text(const std::string& name, const std::string& body) {
    write_text(dir_ / name, body);
    files_.push_back(dir_ / name);
  }
  void json(const std::string& name, const Json& j) { text(name, j.dump(2) + "\n"); }
  std::vector<std::filesystem::path> files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

Json base_summary(const ExperimentConfig& c) {
  Json train = c.to_json()["train"];
  return {{"task", c.task}, {"seed", c.seed}, {"params", c.params}, {"train", train}};
}

Json task_summary(const TaskResult& r) {
  return {{"final_fidelity", r.fidelity},
          {"group_fidelities", r.group_fidelities},
          {"final_loss", r.trace.loss.empty() ? 0.0 : r.trace.loss.back()},
          {"best_restart", r.best_restart}};
}

struct StatePrepSetup {
  FockState input;
  FockState target;
  int layers;
};

StatePrepSetup state_prep_setup(const ExperimentConfig& c) {
  const Json& p = c.params;
  const int modes = positive_int(p, "modes");
  const int photons = positive_int(p, "photons");
  const int layers = positive_int(p, "layers");
  if (photons > modes) throw ConfigError("'photons' must not exceed 'modes' for this input");
  guard_basis(c, modes, photons);
  const std::string target = p.at("target").get<std::string>();
  FockState input = first_modes_input(modes, photons);
  if (target == "noon") {
    if (modes < 2) throw ConfigError("a N00N target needs at least two modes");
    return {std::move(input), make_noon_state(photons, 0, 1, modes), layers};
  }
  if (target == "haar") {
    const int ts = p.at("target_seed").get<int>();
    const std::uint64_t seed = ts >= 0 ? static_cast<std::uint64_t>(ts) : split_seed(c.seed, 0);
    return {std::move(input), sample_haar_state(enumerate_basis(modes, photons), seed), layers};
  }
  throw ConfigError("'target' must be haar or noon");
}

TrainConfig training_config(const ExperimentConfig& c) {
  TrainConfig t = c.train;
  t.seed = split_seed(c.seed, 1);
  return t;
}

void emit_training(Artifacts& out, const TaskResult& r, const std::string& suffix = "") {
  out.text("trace" + suffix + ".csv", trace_csv(r.trace));
  out.json("checkpoint" + suffix + ".json", checkpoint_to_json(r.params));
}

Json run_state_prep_task(const ExperimentConfig& c, Artifacts& out) {
  const auto s = state_prep_setup(c);
  const Objective objective = Objective::state(s.input, s.target);
  const TaskResult r = train_network(s.input.mode_count(), s.layers, objective,
                                     training_config(c), c.restarts,
                                     c.params.at("final_activation").get<bool>());
  emit_training(out, r);
  Json summary = base_summary(c);
  summary.update(task_summary(r));
  return summary;
}

Json run_channel_task(const ExperimentConfig& c, Artifacts& out) {
  const int n = positive_int(c.params, "code_n");
  const int layers = positive_int(c.params, "layers");
  guard_basis(c, 2, 2 * n - 1);
  const CodeSpec code = binomial_code(n);
  const std::string op = c.params.at("operation").get<std::string>();
  TaskResult r;
  if (op == "encode") {
    r = run_encoding(code, layers, training_config(c), c.restarts);
  } else if (op == "H" || op == "S" || op == "T") {
    r = run_logical_gate(code, parse_logical_gate(op), layers, training_config(c), c.restarts);
  } else {
    throw ConfigError("'operation' must be encode, H, S or T");
  }
  emit_training(out, r);
  Json summary = base_summary(c);
  summary.update(task_summary(r));
  return summary;
}

Json run_cz_task(const ExperimentConfig& c, Artifacts& out) {
  const int n = positive_int(c.params, "code_n");
  const int enc_layers = positive_int(c.params, "encoder_layers");
  const int dec_layers = positive_int(c.params, "decoder_layers");
  guard_basis(c, 4, 2 * (2 * n - 1));
  const CodeSpec code = binomial_code(n);
  TrainConfig t = training_config(c);
  const TaskResult enc = train_cz_encoder(code, enc_layers, t, c.restarts);
  t.seed = split_seed(c.seed, 2);
  const TaskResult dec = train_cz_decoder(code, dec_layers, t, c.restarts);
  const NonlinearParams nl{c.params.at("phi1").get<double>(), c.params.at("phi2").get<double>()};
  const double fidelity = run_logical_cz({enc.params}, {dec.params}, code, nl);
  emit_training(out, enc);
  emit_training(out, dec, "_decoder");
  Json summary = base_summary(c);
  summary["final_fidelity"] = fidelity;
  summary["encoder_fidelity"] = enc.fidelity;
  summary["decoder_fidelity"] = dec.fidelity;
  return summary;
}

Json run_monte_carlo_task(const ExperimentConfig& c, Artifacts& out) {
  const auto s = state_prep_setup(c);
  const double sigma = c.params.at("sigma").get<double>();
  if (!(sigma >= 0.0)) throw ConfigError("'sigma' must be >= 0");
  const int samples = positive_int(c.params, "samples");
  const Objective objective = Objective::state(s.input, s.target);
  const std::string checkpoint = c.params.at("checkpoint").get<std::string>();
  NetworkParams params;
  TrainingTrace trace;
  double trained_fidelity;
  if (checkpoint.empty()) {
    TaskResult r = train_network(s.input.mode_count(), s.layers, objective, training_config(c),
                                 c.restarts);
    params = std::move(r.params);
    trace = std::move(r.trace);
    trained_fidelity = r.fidelity;
  } else {
    params = checkpoint_from_json(read_json(checkpoint));
    if (params.mode_count() != s.input.mode_count() || params.layer_count() != s.layers) {
      throw ConfigError("checkpoint does not match 'modes' and 'layers'");
    }
    Circuit circuit(params.mode_count());
    circuit.add_network(params, [&] {
      std::vector<int> m(params.mode_count());
      for (int k = 0; k < params.mode_count(); ++k) m[k] = k;
      return m;
    }());
    trained_fidelity = evaluate(circuit, objective, false).fidelity;
  }
  const MonteCarloSummary mc =
      splitter_monte_carlo(params, objective, sigma, samples, split_seed(c.seed, 2), c.workers);
  out.text("trace.csv", trace_csv(trace));
  out.json("checkpoint.json", checkpoint_to_json(params));
  out.text("distribution.csv", distribution_csv(mc.fidelities));
  Json summary = base_summary(c);
  summary["final_fidelity"] = trained_fidelity;
  summary["layers"] = s.layers;
  summary["sigma"] = sigma;
  summary["samples"] = samples;
  summary["fidelity_stats"] = {{"median", mc.median}, {"min", mc.min},   {"max", mc.max},
                               {"mean", mc.mean},     {"variance", mc.variance}};
  return summary;
}

Json run_routing_task(const ExperimentConfig& c, Artifacts& out) {
  const int max_n = positive_int(c.params, "max_n", 0);
  const int layers = positive_int(c.params, "layers");
  guard_basis(c, 2, max_n + 1);
  const TaskResult r = train_routing_gate(max_n, layers, training_config(c), c.restarts);
  emit_training(out, r);
  Json summary = base_summary(c);
  summary.update(task_summary(r));
  summary["sector_fidelities"] = r.group_fidelities;
  return summary;
}

const char* syndrome_name(Syndrome s) {
  switch (s) {
    case Syndrome::kNoLoss:
      return "no-loss";
    case Syndrome::kSingleLoss:
      return "single-loss";
    case Syndrome::kUncorrectable:
      return "uncorrectable";
  }
  return "unknown";
}

Json run_loss_correction_task(const ExperimentConfig& c, Artifacts& out) {
  const int n = positive_int(c.params, "code_n", 2);
  const int routing_layers = positive_int(c.params, "routing_layers");
  const int recovery_layers = positive_int(c.params, "recovery_layers");
  const CodeSpec code = binomial_code(n);
  guard_basis(c, 3, code.photons + 1);
  const double theta = c.params.at("theta").get<double>();
  const double phase = c.params.at("phase").get<double>();
  const Complex alpha = std::cos(theta / 2);
  const Complex beta = std::polar(std::sin(theta / 2), phase);

  TrainConfig t = training_config(c);
  const TaskResult routing = train_routing_gate(code.photons - 1, routing_layers, t, c.restarts);
  t.seed = split_seed(c.seed, 2);
  const TaskResult recovery = train_recovery(code, routing.params, recovery_layers, t, c.restarts);
  const CorrectionPipeline pipeline{code, routing.params, recovery.params};

  Json branches = Json::array();
  double mean_single = 0.0;
  for (int loss_mode : {-1, 1, 2}) {
    const CorrectionOutcome o = run_loss_correction_demo(pipeline, loss_mode, alpha, beta);
    branches.push_back({{"loss_mode", loss_mode},
                        {"syndrome", syndrome_name(o.syndrome)},
                        {"measured_photons", o.measured_photons},
                        {"weight", o.weight},
                        {"fidelity", o.fidelity}});
    if (loss_mode != -1) mean_single += 0.5 * o.fidelity;
  }
  emit_training(out, recovery);
  emit_training(out, routing, "_routing");
  Json summary = base_summary(c);
  summary["final_fidelity"] = mean_single;
  summary["routing_fidelity"] = routing.fidelity;
  summary["recovery_training_fidelity"] = recovery.fidelity;
  summary["shared_recovery_bound"] = shared_recovery_bound(code, alpha, beta);
  summary["branches"] = branches;
  return summary;
}

Json run_scattering_task(const ExperimentConfig& c, Artifacts& out) {
  const Json& p = c.params;
  ScatteringOptions opts;
  opts.fwhm_span = p.at("fwhm_span").get<double>();
  opts.richardson_tolerance = p.at("richardson_tolerance").get<double>();
  opts.max_refinements = positive_int(p, "max_refinements", 0);
  opts.max_grid_size = positive_int(p, "max_grid_size", 2);
  std::vector<SweepPoint> points;
  for (const Json& s : p.at("sigma_over_g")) {
    for (const Json& k : p.at("kappa_over_g")) {
      for (const Json& a : p.at("phi1")) {
        for (const Json& b : p.at("phi2")) {
          points.push_back({s.get<double>(), k.get<double>(), a.get<double>(), b.get<double>()});
        }
      }
    }
  }
  int workers = c.workers > 0 ? c.workers : default_workers();
  const auto rows = scattering_sweep(points, opts, workers);
  out.text("sweep.csv", sweep_csv(rows));
  Json summary = base_summary(c);
  const auto worst = std::min_element(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.result.fidelity < y.result.fidelity;
  });
  double max_delta = 0.0;
  for (const auto& r : rows) max_delta = std::max(max_delta, r.result.richardson_delta);
  summary["points"] = rows.size();
  summary["final_fidelity"] = worst->result.fidelity;
  summary["min_fidelity_point"] = {{"sigma_over_g", worst->point.sigma_over_g},
                                   {"kappa_over_g", worst->point.kappa_over_g},
                                   {"phi1", worst->point.phi1},
                                   {"phi2", worst->point.phi2}};
  summary["max_richardson_delta"] = max_delta;
  return summary;
}

}  // namespace

const std::vector<TaskSchema>& task_catalog() { return build_catalog(); }

Json catalog_json() {
  Json out = Json::array();
  for (const auto& t : task_catalog()) {
    Json params = Json::object();
    for (const auto& p : t.params) {
      params[p.name] = {{"default", p.default_value}, {"description", p.description}};
    }
    out.push_back({{"id", t.id}, {"description", t.description}, {"params", params}});
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> top = {"task",      "seed",  "output_dir", "workers",
                                               "basis_cap", "train", "params"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(top.begin(), top.end(), k) == top.end()) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  ExperimentConfig c;
  if (j.contains("task")) {
    if (!j["task"].is_string()) throw ConfigError("'task' must be a string");
    c.task = j["task"].get<std::string>();
  }
  const TaskSchema& schema = schema_for(c.task);
  if (j.contains("seed")) {
    const Json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 0) {
      throw ConfigError("'workers' must be a non-negative integer");
    }
    c.workers = j["workers"].get<int>();
  }
  if (j.contains("basis_cap")) {
    if (!j["basis_cap"].is_number_integer() || j["basis_cap"].get<std::int64_t>() < 1) {
      throw ConfigError("'basis_cap' must be a positive integer");
    }
    c.basis_cap = j["basis_cap"].get<std::size_t>();
  }

  const Json train = merge_defaults("train", j.value("train", Json::object()), train_defaults());
  c.train.iterations = train["iterations"].get<int>();
  c.train.lr_start = train["lr_start"].get<double>();
  c.train.lr_end = train["lr_end"].get<double>();
  c.train.beta1 = train["beta1"].get<double>();
  c.train.beta2 = train["beta2"].get<double>();
  c.train.epsilon = train["epsilon"].get<double>();
  const std::string method = train["gradient"].get<std::string>();
  if (method == "analytic") {
    c.train.method = GradientMethod::kAnalytic;
  } else if (method == "central-difference") {
    c.train.method = GradientMethod::kCentralDifference;
  } else {
    throw ConfigError("'train.gradient' must be analytic or central-difference");
  }
  c.train.fd_step = train["fd_step"].get<double>();
  c.train.record_projections = train["record_projections"].get<bool>();
  c.restarts = train["restarts"].get<int>();
  if (c.restarts < 1) throw ConfigError("'train.restarts' must be >= 1");
  try {
    c.train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::vector<std::pair<std::string, Json>> defaults;
  for (const auto& p : schema.params) defaults.emplace_back(p.name, p.default_value);
  c.params = merge_defaults("params", j.value("params", Json::object()), defaults);
  return c;
}

Json ExperimentConfig::to_json() const {
  const char* method =
      train.method == GradientMethod::kAnalytic ? "analytic" : "central-difference";
  return {{"task", task},
          {"seed", seed},
          {"output_dir", output_dir.string()},
          {"workers", workers},
          {"basis_cap", basis_cap},
          {"train",
           {{"iterations", train.iterations},
            {"lr_start", train.lr_start},
            {"lr_end", train.lr_end},
            {"beta1", train.beta1},
            {"beta2", train.beta2},
            {"epsilon", train.epsilon},
            {"gradient", method},
            {"fd_step", train.fd_step},
            {"record_projections", train.record_projections},
            {"restarts", restarts}}},
          {"params", params}};
}

RunOutcome run_experiment(const ExperimentConfig& config) {
  Artifacts out(config.output_dir);
  Json summary;
  const std::string& t = config.task;
  if (t == "state-prep") {
    summary = run_state_prep_task(config, out);
  } else if (t == "channel-prep") {
    summary = run_channel_task(config, out);
  } else if (t == "logical-cz") {
    summary = run_cz_task(config, out);
  } else if (t == "monte-carlo") {
    summary = run_monte_carlo_task(config, out);
  } else if (t == "routing-gate") {
    summary = run_routing_task(config, out);
  } else if (t == "loss-correction") {
    summary = run_loss_correction_task(config, out);
  } else if (t == "scattering-sweep") {
    summary = run_scattering_task(config, out);
  } else {
    throw ConfigError("unknown task '" + t + "'");
  }
  out.json("summary.json", summary);
  return {summary, out.files()};
}

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DivergenceError*>(&e)) return ExitCode::kDivergence;
  if (dynamic_cast<const ResourceGuardError*>(&e) || dynamic_cast<const std::length_error*>(&e)) {
    return ExitCode::kResourceGuard;
  }
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e)) {
    return ExitCode::kInvalidConfig;
  }
  return ExitCode::kFailure;
}

Json error_record(const std::exception& e) {
  const ExitCode code = exit_code_for(e);
  const char* kind = "failure";
  switch (code) {
    case ExitCode::kInvalidConfig:
      kind = "invalid-config";
      break;
    case ExitCode::kDivergence:
      kind = "divergence";
      break;
    case ExitCode::kResourceGuard:
      kind = "resource-guard";
      break;
    default:
      break;
  }
  Json j = {{"error", kind}, {"exit_code", static_cast<int>(code)}, {"message", e.what()}};
  if (const auto* d = dynamic_cast<const DivergenceError*>(&e)) j["iteration"] = d->iteration();
  return j;
}

}  // namespace qpnn
