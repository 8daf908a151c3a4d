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

// Reference implementations used only by the tests. They share no code with
// the library beyond the basis ordering.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qpnn/fock.hpp"
#include "qpnn/network.hpp"
#include "qpnn/optimizer.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Sum over all permutations.
inline Complex permanent(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    Complex term = 1.0;
    for (int r = 0; r < n; ++r) term *= a(r, perm[r]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/**
 * Fock-space matrix of U by expanding prod_k (sum_j U_jk a_j^dag)^{T_k} / sqrt(T_k!)
 * as a polynomial in the creation operators.
 */
inline Eigen::MatrixXcd lift_by_expansion(const Eigen::MatrixXcd& u, const qpnn::FockBasis& basis) {
  const int m = basis.mode_count();
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    std::map<std::vector<int>, Complex> poly;
    poly[std::vector<int>(m, 0)] = 1.0;
    double norm = 1.0;
    for (int k = 0; k < m; ++k) {
      const int count = basis.occupation(col, k);
      norm *= factorial(count);
      for (int rep = 0; rep < count; ++rep) {
        std::map<std::vector<int>, Complex> next;
        for (const auto& [mono, c] : poly) {
          for (int j = 0; j < m; ++j) {
            if (u(j, k) == Complex(0.0)) continue;
            auto grown = mono;
            ++grown[j];
            next[grown] += c * u(j, k);
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, c] : poly) {
      double s_fact = 1.0;
      for (int n : mono) s_fact *= factorial(n);
      const auto row = basis.index_of(mono);
      out(static_cast<Eigen::Index>(*row), col) += c * std::sqrt(s_fact / norm);
    }
  }
  return out;
}

inline Eigen::VectorXcd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k) v[k] = Complex(g(rng), g(rng));
  return v.normalized();
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

/// Central differences through flatten/assign of the trainable network.
inline Eigen::VectorXd central_difference(qpnn::Circuit circuit, int network,
                                          const qpnn::Objective& objective, double h) {
  const Eigen::VectorXd x = circuit.network(network).flatten();
  Eigen::VectorXd grad(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[k] += h;
    xm[k] -= h;
    circuit.mutable_network(network).assign(xp);
    const double lp = qpnn::evaluate(circuit, objective, false).loss;
    circuit.mutable_network(network).assign(xm);
    const double lm = qpnn::evaluate(circuit, objective, false).loss;
    grad[k] = (lp - lm) / (2.0 * h);
  }
  return grad;
}

/// Composite Simpson rule on [a, b] with an even number of panels.
template <class F>
double simpson(F f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace oracle
