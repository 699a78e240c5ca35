// Copyright 2026 The qnsr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random operators and independent reference computations shared by tests.

#ifndef QNSR_TESTS_TEST_SUPPORT_H_
#define QNSR_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qnsr/operator_core.h"

namespace qnsr::testing {

inline Matrix random_complex(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

inline Operator random_hermitian(int dim, std::mt19937_64& rng) {
  const Matrix m = random_complex(dim, rng);
  return Operator::hermitian((m + m.adjoint()) * 0.5);
}

inline StateVector random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return StateVector::normalized(std::move(v));
}

// Full-rank mixed state G G^dag / Tr.
inline DensityMatrix random_density(int dim, std::mt19937_64& rng) {
  const Matrix g = random_complex(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(Matrix((rho + rho.adjoint()) * 0.5));
}

// Gauss-Hermite nodes and weights for weight exp(-t^2), from the eigenpairs
// of the Jacobi matrix.
inline std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    j(k - 1, k) = j(k, k - 1) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  std::vector<double> nodes(n);
  std::vector<double> weights(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()[k];
    const double v0 = es.eigenvectors()(0, k);
    weights[k] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  return {nodes, weights};
}

// Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!), by recurrence.
inline Vector coherent_amplitudes(double alpha, int dim) {
  Vector v(dim);
  v[0] = std::exp(-0.5 * alpha * alpha);
  for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return v;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace qnsr::testing

#endif  // QNSR_TESTS_TEST_SUPPORT_H_
