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

// Dense operators and states on a truncated Fock (or qubit) space.
//
// Every type here is an immutable value: the validating factories check the
// invariants once and the accessors hand out const references.

#ifndef QNSR_OPERATOR_CORE_H_
#define QNSR_OPERATOR_CORE_H_

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace qnsr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tolerance {
// Relative Hermiticity tolerance, scaled by the largest entry magnitude.
inline constexpr double kHermiticity = 1e-12;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kNorm = 1e-10;
inline constexpr double kImaginaryResidue = 1e-10;
// Probability mass allowed to fall outside the truncated space.
inline constexpr double kLeakage = 1e-8;
inline constexpr double kUnitarity = 1e-10;
}  // namespace tolerance

/// Dense square complex matrix with a declared Hermiticity flag.
class Operator {
 public:
  /// Wraps `m` without any structural claim. Throws InvalidDimensionError for
  /// empty or non-square input.
  static Operator general(Matrix m);
  /// Wraps `m` and marks it Hermitian after checking
  /// max|m - m^†| <= kHermiticity * max|m|. The stored matrix is the exact
  /// Hermitian part of `m`.
  static Operator hermitian(Matrix m);
  static Operator identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  bool is_hermitian() const { return hermitian_; }
  Operator adjoint() const;

  /// Largest entry magnitude.
  double max_abs() const;

 private:
  Operator(Matrix m, bool hermitian) : m_(std::move(m)), hermitian_(hermitian) {}

  Matrix m_;
  bool hermitian_;
};

/// Normalized pure state.
class StateVector {
 public:
  /// Throws ContractViolation if |‖v‖ - 1| > kNorm.
  explicit StateVector(Vector amplitudes);
  /// Rescales `v` to unit norm; throws if `v` is zero.
  static StateVector normalized(Vector v);
  static StateVector basis(int dim, int n);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }

 private:
  Vector amps_;
};

/// Hermitian, unit-trace, positive-semidefinite operator.
class DensityMatrix {
 public:
  /// Validates trace and positivity (eigenvalues >= -kPositivity).
  explicit DensityMatrix(const Operator& op);
  explicit DensityMatrix(Matrix m) : DensityMatrix(Operator::hermitian(std::move(m))) {}
  /// |ψ><ψ|; positivity holds by construction so no eigensolve is done.
  static DensityMatrix pure(const StateVector& psi);

  int dim() const { return op_.dim(); }
  const Operator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

 private:
  struct Trusted {};
  DensityMatrix(Operator op, Trusted) : op_(std::move(op)) {}

  Operator op_;
};

/// Real displacement/squeezing pair of the probe D(alpha) S(r)|0>, plus the
/// Fock truncation it is represented in.
struct GaussianProbeSpec {
  double alpha = 0.0;
  double r = 0.0;
  int dim = 16;

  /// N = alpha^2 + sinh^2(r).
  double mean_excitation() const;
  /// Spec with `dim` chosen by probe_truncation().
  static GaussianProbeSpec with_default_dim(double alpha, double r);
};

/// max(16, ceil(8 (N + 1))). A floor only: squeezed probes need more.
int default_truncation(double mean_excitation);

/// Smallest dimension >= default_truncation(N) at which D(alpha) S(r)|0>
/// loses less than kLeakage of its norm.
int probe_truncation(double alpha, double r);

/// Returns (a, a^†) truncated to `dim` levels. Throws InvalidDimensionError
/// for dim < 2.
std::pair<Operator, Operator> fock_ladder(int dim);

/// a^† a.
Operator number_operator(int dim);

/// exp(g) for anti-Hermitian g, via the eigendecomposition of i g.
Operator unitary_from_generator(const Operator& g);

/// exp(-i x h) for Hermitian h.
Operator unitary_from_hamiltonian(const Operator& h, double x);

/// D(alpha) S(r)|0>, built on a space padded to 2*dim and projected back.
/// Throws TruncationError when more than kLeakage of the norm is lost.
StateVector gaussian_probe(const GaussianProbeSpec& spec);

/// Tr[rho m]. Throws on dimension mismatch or an imaginary residue above
/// kImaginaryResidue (scaled by the operator size).
double expectation(const DensityMatrix& rho, const Operator& m);

/// <m^2> - <m>^2, clamped at zero.
double variance(const DensityMatrix& rho, const Operator& m);

/// <(m - <m>)^k> for a Hermitian m; used for pure-state moment closed forms.
double central_moment(const StateVector& psi, const Operator& m, int order);

}  // namespace qnsr

#endif  // QNSR_OPERATOR_CORE_H_
