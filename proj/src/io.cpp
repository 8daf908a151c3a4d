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

#include "qpnn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qpnn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw FormatError(std::string(what) + " must be a number");
  return v.get<double>();
}

Json amplitudes_to_json(const Eigen::VectorXcd& a) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < a.size(); ++k) out.push_back({a[k].real(), a[k].imag()});
  return out;
}

Eigen::VectorXcd amplitudes_from_json(const Json& j, std::size_t expected) {
  if (!j.is_array() || j.size() != expected) {
    throw FormatError("amplitudes: expected " + std::to_string(expected) + " entries");
  }
  Eigen::VectorXcd a(expected);
  for (std::size_t k = 0; k < expected; ++k) {
    const Json& e = j[k];
    if (!e.is_array() || e.size() != 2) throw FormatError("amplitudes: entries are [re, im]");
    a[k] = Complex(number(e[0], "amplitude"), number(e[1], "amplitude"));
  }
  return a;
}

}  // namespace

Json state_to_json(const FockState& state) {
  Json j;
  j["mode_count"] = state.mode_count();
  const auto& sectors = state.sectors();
  if (sectors.size() == 1) {
    const auto& [n, s] = *sectors.begin();
    j["photon_number"] = n;
    j["amplitudes"] = amplitudes_to_json(s.amplitudes);
    return j;
  }
  Json list = Json::array();
  for (const auto& [n, s] : sectors) {
    list.push_back({{"photon_number", n}, {"amplitudes", amplitudes_to_json(s.amplitudes)}});
  }
  j["sectors"] = list;
  return j;
}

FockState state_from_json(const Json& j) {
  const int modes = int_field(j, "mode_count");
  if (modes < 1) throw FormatError("mode_count must be >= 1");
  auto read_sector = [&](const Json& s, FockState& into) {
    const int n = int_field(s, "photon_number");
    if (n < 0) throw FormatError("photon_number must be >= 0");
    auto basis = enumerate_basis(modes, n);
    into.add_sector(basis, amplitudes_from_json(field(s, "amplitudes"), basis->size()));
  };
  FockState state(modes);
  if (j.contains("sectors")) {
    for (const Json& s : field(j, "sectors")) read_sector(s, state);
  } else {
    read_sector(j, state);
  }
  if (std::abs(state.squared_norm() - 1.0) < 1e-12) {
    state.set_normalization(Normalization::kNormalized);
  }
  return state;
}

Json mesh_to_json(const MeshParams& mesh) {
  Json mzis = Json::array();
  for (const auto& s : mesh.mzis) {
    mzis.push_back({{"col", s.col},
                    {"row", s.row},
                    {"theta", reduce_angle(s.params.theta)},
                    {"phi", reduce_angle(s.params.phi)}});
  }
  Json phases = Json::array();
  for (double p : mesh.output_phases) phases.push_back(reduce_angle(p));
  return {{"M", mesh.mode_count}, {"mzis", mzis}, {"output_phases", phases}};
}

MeshParams mesh_from_json(const Json& j) {
  const int m = int_field(j, "M");
  if (m < 1) throw FormatError("M must be >= 1");
  MeshParams mesh = MeshParams::rectangular(m);
  const Json& mzis = field(j, "mzis");
  if (!mzis.is_array() || mzis.size() != mesh.mzis.size()) {
    throw FormatError("mzis: expected " + std::to_string(mesh.mzis.size()) + " entries");
  }
  // Entries may come in any order; they are matched to the layout by (col, row).
  std::vector<bool> seen(mesh.mzis.size(), false);
  for (const Json& e : mzis) {
    const int col = int_field(e, "col");
    const int row = int_field(e, "row");
    bool placed = false;
    for (std::size_t k = 0; k < mesh.mzis.size(); ++k) {
      if (mesh.mzis[k].col == col && mesh.mzis[k].row == row) {
        if (seen[k]) throw FormatError("mzis: duplicate slot");
        seen[k] = true;
        mesh.mzis[k].params = {number(field(e, "theta"), "theta"), number(field(e, "phi"), "phi")};
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw FormatError("mzis: (col " + std::to_string(col) + ", row " + std::to_string(row) +
                        ") is not a slot of the rectangular layout");
    }
  }
  const Json& phases = field(j, "output_phases");
  if (!phases.is_array() || static_cast<int>(phases.size()) != m) {
    throw FormatError("output_phases: expected M entries");
  }
  for (int k = 0; k < m; ++k) mesh.output_phases[k] = number(phases[k], "output phase");
  return mesh;
}

Json checkpoint_to_json(const NetworkParams& params) {
  const Eigen::VectorXd flat = params.flatten();
  return {{"M", params.mode_count()},
          {"L", params.layer_count()},
          {"final_activation", params.final_activation()},
          {"packing", "v1"},
          {"params", std::vector<double>(flat.data(), flat.data() + flat.size())}};
}

NetworkParams checkpoint_from_json(const Json& j) {
  const int m = int_field(j, "M");
  const int l = int_field(j, "L");
  if (m < 1 || l < 0) throw FormatError("checkpoint: invalid M or L");
  const Json& packing = field(j, "packing");
  if (!packing.is_string() || packing.get<std::string>() != "v1") {
    throw FormatError("checkpoint: unsupported packing");
  }
  const Json& values = field(j, "params");
  const std::size_t count = NetworkParams::parameter_count(m, l);
  if (!values.is_array() || values.size() != count) {
    throw FormatError("checkpoint: expected " + std::to_string(count) + " parameters");
  }
  Eigen::VectorXd flat(count);
  for (std::size_t k = 0; k < count; ++k) flat[k] = number(values[k], "parameter");
  NetworkParams p = NetworkParams::unflatten(m, l, flat);
  if (j.contains("final_activation")) {
    const Json& fa = j.at("final_activation");
    if (!fa.is_boolean()) throw FormatError("checkpoint: final_activation must be a boolean");
    p.set_final_activation(fa.get<bool>());
  }
  return p;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string trace_csv(const TrainingTrace& trace) {
  std::ostringstream os;
  const std::size_t projections = trace.projections.empty() ? 0 : trace.projections.front().size();
  os << "iteration,loss,fidelity";
  for (std::size_t k = 0; k < projections; ++k) os << ",projection_" << k;
  os << '\n';
  for (std::size_t t = 0; t < trace.loss.size(); ++t) {
    os << t << ',' << format_double(trace.loss[t]) << ',' << format_double(trace.fidelity[t]);
    if (projections > 0) {
      for (double p : trace.projections[t]) os << ',' << format_double(p);
    }
    os << '\n';
  }
  return os.str();
}

std::string distribution_csv(const std::vector<double>& fidelities) {
  std::ostringstream os;
  os << "sample,fidelity\n";
  for (std::size_t k = 0; k < fidelities.size(); ++k) {
    os << k << ',' << format_double(fidelities[k]) << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "sigma_over_g,kappa_over_g,phi1,phi2,fidelity,grid_step,richardson_delta\n";
  for (const auto& r : rows) {
    os << format_double(r.point.sigma_over_g) << ',' << format_double(r.point.kappa_over_g) << ','
       << format_double(r.point.phi1) << ',' << format_double(r.point.phi2) << ','
       << format_double(r.result.fidelity) << ',' << format_double(r.result.grid_step) << ','
       << format_double(r.result.richardson_delta) << '\n';
  }
  return os.str();
}

}  // namespace qpnn
