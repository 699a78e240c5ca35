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

#include "qnsr/operator_core.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qnsr/errors.h"

namespace qnsr {

namespace {

double max_abs_of(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << "operator must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidDimensionError(os.str());
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw InvalidDimensionError(os.str());
  }
}

// exp(-i H) for Hermitian H, through its eigendecomposition.
Matrix exp_minus_i(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw NumericalConsistencyError("eigendecomposition of generator failed");
  }
  const RealVector& w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases[k] = std::polar(1.0, -w[k]);
  }
  const Matrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace

Operator Operator::general(Matrix m) {
  require_square(m);
  return Operator(std::move(m), false);
}

Operator Operator::hermitian(Matrix m) {
  require_square(m);
  const double scale = max_abs_of(m);
  const double asym = max_abs_of(m - m.adjoint());
  if (asym > tolerance::kHermiticity * scale) {
    std::ostringstream os;
    os << "operator is not Hermitian: max|M - M^dag| = " << asym << " (scale " << scale << ")";
    throw ContractViolation(os.str());
  }
  Matrix h = (m + m.adjoint()) * 0.5;
  return Operator(std::move(h), true);
}

Operator Operator::identity(int dim) {
  if (dim < 1) throw InvalidDimensionError("identity: dimension must be positive");
  return Operator(Matrix::Identity(dim, dim), true);
}

Operator Operator::adjoint() const { return Operator(m_.adjoint(), hermitian_); }

double Operator::max_abs() const { return max_abs_of(m_); }

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw InvalidDimensionError("state vector must be non-empty");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > tolerance::kNorm) {
    std::ostringstream os;
    os << "state vector is not normalized: norm = " << norm;
    throw ContractViolation(os.str());
  }
}

StateVector StateVector::normalized(Vector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ContractViolation("cannot normalize a zero or non-finite vector");
  }
  v /= norm;
  return StateVector(std::move(v));
}

StateVector StateVector::basis(int dim, int n) {
  if (dim < 1 || n < 0 || n >= dim) throw InvalidDimensionError("basis: index out of range");
  Vector v = Vector::Zero(dim);
  v[n] = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(const Operator& op) : op_(op) {
  if (!op_.is_hermitian()) throw ContractViolation("density matrix must be Hermitian");
  const Complex tr = op_.matrix().trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tolerance::kTrace) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << "+" << tr.imag() << "i, expected 1";
    throw ContractViolation(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalConsistencyError("density matrix eigendecomposition failed");
  }
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tolerance::kPositivity) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite: min eigenvalue " << min_eig;
    throw ContractViolation(os.str());
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(Operator::hermitian(v * v.adjoint()), Trusted{});
}

double GaussianProbeSpec::mean_excitation() const {
  const double s = std::sinh(r);
  return alpha * alpha + s * s;
}

GaussianProbeSpec GaussianProbeSpec::with_default_dim(double alpha, double r) {
  return GaussianProbeSpec{alpha, r, probe_truncation(alpha, r)};
}

int default_truncation(double mean_excitation) {
  if (!(mean_excitation >= 0.0) || !std::isfinite(mean_excitation)) {
    throw ContractViolation("mean excitation must be finite and non-negative");
  }
  return std::max(16, static_cast<int>(std::ceil(8.0 * (mean_excitation + 1.0))));
}

std::pair<Operator, Operator> fock_ladder(int dim) {
  if (dim < 2) {
    throw InvalidDimensionError("fock_ladder: dimension must be >= 2, got " + std::to_string(dim));
  }
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  Matrix ad = a.adjoint();
  return {Operator::general(std::move(a)), Operator::general(std::move(ad))};
}

Operator number_operator(int dim) {
  if (dim < 1) throw InvalidDimensionError("number_operator: dimension must be positive");
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return Operator::hermitian(std::move(n));
}

Operator unitary_from_generator(const Operator& g) {
  const Matrix& m = g.matrix();
  const double scale = g.max_abs();
  const double herm_part = max_abs_of(m + m.adjoint());
  if (herm_part > tolerance::kHermiticity * scale) {
    std::ostringstream os;
    os << "generator is not anti-Hermitian: max|G + G^dag| = " << herm_part;
    throw ContractViolation(os.str());
  }
  // exp(G) = exp(-i H) with H = i G Hermitian.
  Matrix h = Complex(0.0, 1.0) * m;
  h = (h + h.adjoint()) * 0.5;
  return Operator::general(exp_minus_i(h));
}

Operator unitary_from_hamiltonian(const Operator& h, double x) {
  if (!h.is_hermitian()) throw ContractViolation("unitary_from_hamiltonian: h must be Hermitian");
  return Operator::general(exp_minus_i(x * h.matrix()));
}

namespace {

// D(alpha) S(r)|0> on `padded` levels.
Vector padded_probe(double alpha, double r, int padded) {
  const auto [a, ad] = fock_ladder(padded);
  const Matrix& am = a.matrix();
  const Matrix& adm = ad.matrix();
  const Operator squeeze_gen = Operator::general(0.5 * r * (adm * adm - am * am));
  const Operator displace_gen = Operator::general(alpha * (adm - am));
  Vector vac = Vector::Zero(padded);
  vac[0] = 1.0;
  return unitary_from_generator(displace_gen).matrix() *
         (unitary_from_generator(squeeze_gen).matrix() * vac);
}

// Smallest k with sum_{n >= k} |v_n|^2 < kLeakage.
int leakage_cutoff(const Vector& v) {
  double tail = 0.0;
  for (Eigen::Index n = v.size(); n-- > 0;) {
    tail += std::norm(v[n]);
    if (tail >= tolerance::kLeakage) return static_cast<int>(n) + 1;
  }
  return 1;
}

}  // namespace

int probe_truncation(double alpha, double r) {
  if (!std::isfinite(alpha) || !std::isfinite(r)) {
    throw ContractViolation("probe_truncation: alpha and r must be finite");
  }
  const int floor_dim = default_truncation(alpha * alpha + std::sinh(r) * std::sinh(r));
  int dim = floor_dim;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const int needed = std::max(floor_dim, leakage_cutoff(padded_probe(alpha, r, 2 * dim)));
    if (needed <= dim) return needed;
    dim = needed;
  }
  throw TruncationError("probe_truncation: no dimension found for the requested probe", dim);
}

StateVector gaussian_probe(const GaussianProbeSpec& spec) {
  if (spec.dim < 2) throw InvalidDimensionError("gaussian_probe: dimension must be >= 2");
  if (!std::isfinite(spec.alpha) || !std::isfinite(spec.r)) {
    throw ContractViolation("gaussian_probe: alpha and r must be finite");
  }
  const int padded = 2 * spec.dim;
  const Vector full = padded_probe(spec.alpha, spec.r, padded);

  const double leakage = full.tail(padded - spec.dim).squaredNorm();
  if (leakage > tolerance::kLeakage) {
    const int suggested = probe_truncation(spec.alpha, spec.r);
    std::ostringstream os;
    os << "gaussian_probe: truncation at dim " << spec.dim << " leaks " << leakage
       << " of the norm; try dim >= " << suggested;
    throw TruncationError(os.str(), suggested);
  }
  return StateVector::normalized(full.head(spec.dim));
}

double expectation(const DensityMatrix& rho, const Operator& m) {
  require_same_dim(rho.dim(), m.dim(), "expectation");
  const Complex v = (rho.matrix() * m.matrix()).trace();
  if (std::abs(v.imag()) > tolerance::kImaginaryResidue * (1.0 + m.max_abs())) {
    std::ostringstream os;
    os << "expectation has imaginary residue " << v.imag();
    throw NumericalConsistencyError(os.str());
  }
  return v.real();
}

double variance(const DensityMatrix& rho, const Operator& m) {
  const double mean = expectation(rho, m);
  Matrix centered = m.matrix();
  centered.diagonal().array() -= mean;
  const Complex v = (rho.matrix() * centered * centered).trace();
  const double scale = 1.0 + m.max_abs() * m.max_abs();
  if (std::abs(v.imag()) > tolerance::kImaginaryResidue * scale) {
    std::ostringstream os;
    os << "variance has imaginary residue " << v.imag();
    throw NumericalConsistencyError(os.str());
  }
  if (v.real() < -tolerance::kPositivity * scale) {
    std::ostringstream os;
    os << "variance is negative: " << v.real();
    throw NumericalConsistencyError(os.str());
  }
  return std::max(0.0, v.real());
}

double central_moment(const StateVector& psi, const Operator& m, int order) {
  require_same_dim(psi.dim(), m.dim(), "central_moment");
  if (order < 0) throw ContractViolation("central_moment: order must be non-negative");
  const Vector& v = psi.amplitudes();
  const double mean = v.dot(m.matrix() * v).real();
  Matrix centered = m.matrix();
  centered.diagonal().array() -= mean;
  Vector w = v;
  for (int k = 0; k < order; ++k) w = centered * w;
  return v.dot(w).real();
}

}  // namespace qnsr
