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

#include "qpnn/interferometer.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qpnn {

using Complex = std::complex<double>;
constexpr Complex kI(0.0, 1.0);

namespace {

Eigen::Matrix2cd beam_splitter(double angle) {
  Eigen::Matrix2cd bs;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  bs << c, kI * s, kI * s, c;
  return bs;
}

Eigen::Matrix2cd phase_shifter(double chi) {
  Eigen::Matrix2cd ps = Eigen::Matrix2cd::Identity();
  ps(0, 0) = std::polar(1.0, chi);
  return ps;
}

void apply_left(Eigen::MatrixXcd& u, int row, const Eigen::Matrix2cd& t) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const Complex a = u(row, c);
    const Complex b = u(row + 1, c);
    u(row, c) = t(0, 0) * a + t(0, 1) * b;
    u(row + 1, c) = t(1, 0) * a + t(1, 1) * b;
  }
}

void apply_right(Eigen::MatrixXcd& u, int col, const Eigen::Matrix2cd& t) {
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    const Complex a = u(r, col);
    const Complex b = u(r, col + 1);
    u(r, col) = a * t(0, 0) + b * t(1, 0);
    u(r, col + 1) = a * t(0, 1) + b * t(1, 1);
  }
}

// Split a 2x2 unitary as diag(e^{ia}, e^{ib}) * T(theta, phi).
struct Factored {
  double a;
  double b;
  MziParams params;
};

Factored factor_mzi(const Eigen::Matrix2cd& g) {
  const double s = std::abs(g(0, 0));
  const double c = std::abs(g(0, 1));
  const double theta = 2.0 * std::atan2(s, c);
  const double arg_p = std::numbers::pi / 2 + theta / 2;  // arg(i e^{i theta/2})
  double a, b, phi;
  if (c >= s) {
    a = std::arg(g(0, 1)) - arg_p;
    phi = s > 0.0 ? std::arg(g(0, 0)) - a - arg_p : 0.0;
    b = std::arg(g(1, 0)) - arg_p - phi;
  } else {
    b = std::arg(-g(1, 1)) - arg_p;
    phi = c > 0.0 ? std::arg(g(1, 0)) - b - arg_p : 0.0;
    a = std::arg(g(0, 0)) - arg_p - phi;
  }
  return {a, b, {theta, phi}};
}

}  // namespace

std::size_t mzi_count(int modes) {
  return static_cast<std::size_t>(modes) * (modes - 1) / 2;
}

MeshParams MeshParams::rectangular(int modes) {
  if (modes < 1) throw std::invalid_argument("MeshParams: mode count must be >= 1");
  MeshParams mesh;
  mesh.mode_count = modes;
  mesh.output_phases.assign(modes, 0.0);
  for (int col = 0; col < modes; ++col) {
    for (int row = col % 2; row + 1 < modes; row += 2) mesh.mzis.push_back({col, row, {}});
  }
  return mesh;
}

Eigen::Matrix2cd mzi_transfer(const MziParams& p, const SplitterError& e) {
  if (e.alpha != 0.0 || e.beta != 0.0) {
    const double quarter = std::numbers::pi / 4;
    return beam_splitter(quarter + e.beta) * phase_shifter(p.theta) *
           beam_splitter(quarter + e.alpha) * phase_shifter(p.phi);
  }
  const Complex pre = kI * std::polar(1.0, p.theta / 2);
  const Complex ephi = std::polar(1.0, p.phi);
  const double s = std::sin(p.theta / 2);
  const double c = std::cos(p.theta / 2);
  Eigen::Matrix2cd t;
  t << pre * ephi * s, pre * c, pre * ephi * c, -pre * s;
  return t;
}

Eigen::Matrix2cd mzi_dtheta(const MziParams& p) {
  const Complex pre = kI * std::polar(1.0, p.theta / 2);
  const Complex ephi = std::polar(1.0, p.phi);
  const double s = std::sin(p.theta / 2);
  const double c = std::cos(p.theta / 2);
  Eigen::Matrix2cd a, da;
  a << ephi * s, c, ephi * c, -s;
  da << 0.5 * ephi * c, -0.5 * s, -0.5 * ephi * s, -0.5 * c;
  return pre * (0.5 * kI * a + da);
}

Eigen::Matrix2cd mzi_dphi(const MziParams& p) {
  Eigen::Matrix2cd d = mzi_transfer(p);
  d.col(0) *= kI;
  d.col(1).setZero();
  return d;
}

Eigen::MatrixXcd mesh_unitary(const MeshParams& mesh, std::span<const SplitterError> errors) {
  if (!errors.empty() && errors.size() != mesh.mzis.size()) {
    throw std::invalid_argument("mesh_unitary: " + std::to_string(errors.size()) +
                                " splitter errors for " + std::to_string(mesh.mzis.size()) +
                                " MZIs");
  }
  if (static_cast<int>(mesh.output_phases.size()) != mesh.mode_count) {
    throw std::invalid_argument("mesh_unitary: output phase count != mode count");
  }
  const int m = mesh.mode_count;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(m, m);
  for (std::size_t k = 0; k < mesh.mzis.size(); ++k) {
    const auto& slot = mesh.mzis[k];
    if (slot.row < 0 || slot.row + 1 >= m) throw std::invalid_argument("mesh_unitary: MZI row out of range");
    apply_left(u, slot.row, mzi_transfer(slot.params, errors.empty() ? SplitterError{} : errors[k]));
  }
  for (int r = 0; r < m; ++r) u.row(r) *= std::polar(1.0, mesh.output_phases[r]);
  return u;
}

MeshParams clements_decompose(const Eigen::MatrixXcd& u_in) {
  if (u_in.rows() != u_in.cols() || u_in.rows() < 1) {
    throw std::invalid_argument("clements_decompose: matrix must be square and non-empty");
  }
  const double deviation = unitarity_deviation(u_in);
  if (!(deviation < 1e-8)) {
    throw std::invalid_argument("clements_decompose: input is not unitary (||U^dagger U - I|| = " +
                                std::to_string(deviation) + ")");
  }
  const int m = static_cast<int>(u_in.rows());
  Eigen::MatrixXcd u = u_in;

  // Null the lower triangle with generic 2x2 rotations, alternating between
  // column operations from the right and row operations from the left.
  struct Rotation {
    int row;
    Eigen::Matrix2cd mat;
  };
  std::vector<Rotation> right_ops;  // U <- U Q
  std::vector<Rotation> left_ops;   // U <- L U
  for (int k = 0, i = m - 2; i >= 0; ++k, --i) {
    if (k % 2 == 0) {
      for (int j = m - 2 - i; j >= 0; --j) {
        const int r = i + j + 1;
        const Complex x = u(r, j);
        const Complex y = u(r, j + 1);
        const double n = std::hypot(std::abs(x), std::abs(y));
        Eigen::Matrix2cd q = Eigen::Matrix2cd::Identity();
        if (n > 0.0) q << y / n, std::conj(x) / n, -x / n, std::conj(y) / n;
        apply_right(u, j, q);
        right_ops.push_back({j, q});
      }
    } else {
      for (int j = 0; j <= m - 2 - i; ++j) {
        const int r = i + j + 1;
        const Complex x = u(r - 1, j);
        const Complex y = u(r, j);
        const double n = std::hypot(std::abs(x), std::abs(y));
        Eigen::Matrix2cd l = Eigen::Matrix2cd::Identity();
        if (n > 0.0) l << std::conj(x) / n, std::conj(y) / n, -y / n, x / n;
        apply_left(u, r - 1, l);
        left_ops.push_back({r - 1, l});
      }
    }
  }

  // U = D (D^dag L_1^dag D) ... (D^dag L_b^dag D) Q_m^dag ... Q_1^dag.
  Eigen::VectorXcd d = u.diagonal();
  std::vector<Rotation> sequence;  // application order
  for (const auto& q : right_ops) sequence.push_back({q.row, q.mat.adjoint()});
  for (auto it = left_ops.rbegin(); it != left_ops.rend(); ++it) {
    Eigen::Matrix2cd dl = it->mat.adjoint();
    const Complex d0 = d[it->row];
    const Complex d1 = d[it->row + 1];
    dl(0, 1) *= std::conj(d0) * d1;
    dl(1, 0) *= std::conj(d1) * d0;
    sequence.push_back({it->row, dl});
  }

  MeshParams mesh = MeshParams::rectangular(m);
  if (sequence.size() != mesh.mzis.size()) {
    throw std::logic_error("clements_decompose: rotation count does not match layout");
  }
  // Slots sharing a row are filled in application order; rotations on
  // different rows commute into layout order.
  std::vector<std::vector<const Eigen::Matrix2cd*>> per_row(m);
  for (const auto& rot : sequence) per_row[rot.row].push_back(&rot.mat);
  std::vector<std::size_t> cursor(m, 0);
  std::vector<double> running(m, 0.0);  // diagonal pushed out of each factor
  for (auto& slot : mesh.mzis) {
    Eigen::Matrix2cd g = *per_row[slot.row][cursor[slot.row]++];
    g.col(0) *= std::polar(1.0, running[slot.row]);
    g.col(1) *= std::polar(1.0, running[slot.row + 1]);
    const Factored f = factor_mzi(g);
    slot.params = f.params;
    running[slot.row] = f.a;
    running[slot.row + 1] = f.b;
  }
  for (int r = 0; r < m; ++r) mesh.output_phases[r] = std::arg(d[r]) + running[r];
  return mesh;
}

Eigen::MatrixXcd sample_haar_unitary(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd z(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& packed = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const Complex rcc = packed(c, c);
    const double mag = std::abs(rcc);
    q.col(c) *= mag > 0.0 ? rcc / mag : Complex(1.0);
  }
  return q;
}

std::vector<SplitterError> sample_splitter_errors(const MeshParams& mesh, double sigma,
                                                  std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sample_splitter_errors: sigma must be finite and >= 0");
  }
  std::vector<SplitterError> errors(mesh.mzis.size());
  if (sigma == 0.0) return errors;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (auto& e : errors) {
    e.alpha = normal(rng);
    e.beta = normal(rng);
  }
  return errors;
}

double operator_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

double unitarity_deviation(const Eigen::MatrixXcd& u) {
  return operator_norm(u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols()));
}

}  // namespace qpnn
