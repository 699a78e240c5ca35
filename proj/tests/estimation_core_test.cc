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

#include "qnsr/estimation_core.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qnsr/dephasing_study.h"
#include "qnsr/errors.h"
#include "test_support.h"

namespace qnsr {
namespace {

using testing::random_density;
using testing::random_hermitian;
using testing::random_state;
using testing::rel_err;

Operator sigma_z_half() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return Operator::hermitian(m);
}

Operator sigma_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return Operator::hermitian(m);
}

Operator sigma_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return Operator::hermitian(m);
}

StateVector plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return StateVector::normalized(v);
}

// Dephased qubit: |+> through the phase-diffusion channel.
ParamFamily dephased_qubit(double beta) {
  PhaseFamilySpec spec;
  spec.probe = plus_state();
  spec.diffusion = DiffusionParams(beta);
  return dephasing_family(spec);
}

TEST(estimation_core, pure_qubit_qfi_is_one) {
  const ParamFamily fam = pure_unitary_family(sigma_z_half(), plus_state());
  for (double x : {-1.0, 0.0, 0.4, 2.0}) EXPECT_NEAR(qfi(fam, x), 1.0, 1e-12);
  EXPECT_NEAR(pure_unitary_qfi(sigma_z_half(), plus_state()), 1.0, 1e-15);
}

TEST(estimation_core, sigma_y_is_optimal_for_pure_qubit_at_zero) {
  const ParamFamily fam = pure_unitary_family(sigma_z_half(), plus_state());
  // rho(x) has Bloch vector (cos x, sin x, 0); sigma_y reads sin x.
  const SensitivityReport rep = assess_observable(fam, 0.0, sigma_y());
  EXPECT_NEAR(rep.slope, 1.0, 1e-12);
  EXPECT_NEAR(rep.variance, 1.0, 1e-12);
  EXPECT_NEAR(rep.fisher, 1.0, 1e-12);
  EXPECT_NEAR(optimality_residual(fam.state_at(0.0), fam.derivative_at(0.0), sigma_y()), 0.0,
              1e-12);
}

TEST(estimation_core, zero_slope_gives_no_information) {
  const ParamFamily fam = pure_unitary_family(sigma_z_half(), plus_state());
  const SensitivityReport rep = assess_observable(fam, 0.0, sigma_x());
  EXPECT_NEAR(rep.slope, 0.0, 1e-15);
  EXPECT_EQ(rep.fisher, 0.0);
  EXPECT_TRUE(std::isinf(rep.nsr));
  EXPECT_THROW(optimality_residual(fam.state_at(0.0), fam.derivative_at(0.0), sigma_x()),
               UndefinedResidualError);
}

TEST(estimation_core, degenerate_observable_throws) {
  // Eigenstate of the observable with nonzero slope cannot occur for a
  // proper derivative; build an explicit inconsistent pair instead.
  const DensityMatrix rho = DensityMatrix::pure(StateVector::basis(2, 0));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  EXPECT_THROW(assess_observable(rho, Operator::hermitian(d), sigma_z_half()),
               DegenerateObservableError);
}

TEST(estimation_core, classical_diagonal_family) {
  // rho = diag(p, 1 - p) with p = (1 + sin x)/2: QFI equals the classical
  // Fisher information of a biased coin, cos^2 x / (1 - sin^2 x) = 1.
  const Interval dom{-1.0, 1.0};
  ParamFamily fam(
      2,
      [](double x) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 0.5 * (1.0 + std::sin(x));
        m(1, 1) = 0.5 * (1.0 - std::sin(x));
        return DensityMatrix(m);
      },
      [](double x) {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 0.5 * std::cos(x);
        m(1, 1) = -0.5 * std::cos(x);
        return Operator::hermitian(m);
      },
      dom);
  for (double x : {-0.7, 0.0, 0.5}) EXPECT_NEAR(qfi(fam, x), 1.0, 1e-12);
  EXPECT_THROW(fam.state_at(1.5), ContractViolation);
}

TEST(estimation_core, mixed_qubit_qfi_matches_bloch_formula) {
  // rho = (1 + r.sigma)/2 rotating about z: QFI = |r_perp|^2 for |r| < 1.
  for (double len : {0.2, 0.6, 0.95}) {
    Matrix m(2, 2);
    m << 0.5, 0.5 * len, 0.5 * len, 0.5;
    const DensityMatrix rho(m);
    const Operator h = sigma_z_half();
    const Operator drho = Operator::hermitian(
        Complex(0.0, -1.0) * (h.matrix() * rho.matrix() - rho.matrix() * h.matrix()));
    const Sld l = sld(rho, drho);
    const double f = (rho.matrix() * l.op.matrix() * l.op.matrix()).trace().real();
    EXPECT_NEAR(f, len * len, 1e-12) << "len=" << len;
  }
}

TEST(estimation_core, dephased_qubit_qfi) {
  for (double beta : {0.0, 0.3, 0.5, 1.0}) {
    const ParamFamily fam = dephased_qubit(beta);
    // Bloch length e^{-beta^2}, perpendicular to the rotation axis.
    EXPECT_NEAR(qfi(fam, 0.3), std::exp(-2.0 * beta * beta), 1e-10) << "beta=" << beta;
  }
}

TEST(estimation_core, sld_solves_lyapunov_equation) {
  std::mt19937_64 rng(21);
  const DensityMatrix rho = random_density(6, rng);
  const Operator h = random_hermitian(6, rng);
  const Operator drho = Operator::hermitian(
      Complex(0.0, -1.0) * (h.matrix() * rho.matrix() - rho.matrix() * h.matrix()));
  const Sld l = sld(rho, drho);
  const Matrix lhs = 0.5 * (rho.matrix() * l.op.matrix() + l.op.matrix() * rho.matrix());
  EXPECT_LT((lhs - drho.matrix()).norm(), 1e-10);
  EXPECT_FALSE(l.support_warning);
}

TEST(estimation_core, sld_is_optimal_for_random_observables) {
  std::mt19937_64 rng(8);
  const DensityMatrix rho = random_density(4, rng);
  const Operator h = random_hermitian(4, rng);
  const Operator drho = Operator::hermitian(
      Complex(0.0, -1.0) * (h.matrix() * rho.matrix() - rho.matrix() * h.matrix()));
  const Sld l = sld(rho, drho);
  const double f = (rho.matrix() * l.op.matrix() * l.op.matrix()).trace().real();
  EXPECT_NEAR(assess_observable(rho, drho, l.op).fisher, f, 1e-9 * f);
  EXPECT_LT(optimality_residual(rho, drho, l.op), 1e-10);
  for (int k = 0; k < 200; ++k) {
    const Operator m = random_hermitian(4, rng);
    const SensitivityReport rep = assess_observable(rho, drho, m);
    EXPECT_LE(rep.fisher, f + 1e-8);
    if (rep.fisher < 0.99 * f) {
      EXPECT_GT(optimality_residual(rho, drho, m), 1e-6);
    }
  }
}

TEST(estimation_core, fisher_is_affine_invariant) {
  std::mt19937_64 rng(13);
  const ParamFamily fam = pure_unitary_family(random_hermitian(5, rng), random_state(5, rng));
  const Operator m = random_hermitian(5, rng);
  const Operator m2 = Operator::hermitian(-3.0 * m.matrix() + 2.0 * Matrix::Identity(5, 5));
  const SensitivityReport a = assess_observable(fam, 0.2, m);
  const SensitivityReport b = assess_observable(fam, 0.2, m2);
  EXPECT_LT(rel_err(b.fisher, a.fisher), 1e-10);
  EXPECT_LT(rel_err(b.nsr, a.nsr), 1e-10);
  EXPECT_NEAR(b.slope, -3.0 * a.slope, 1e-10);
}

TEST(estimation_core, pure_family_derivative_matches_finite_difference) {
  std::mt19937_64 rng(17);
  const ParamFamily fam = pure_unitary_family(random_hermitian(4, rng), random_state(4, rng));
  const double x = 0.35;
  const double h = 1e-5;
  const Matrix fd = (fam.state_at(x + h).matrix() - fam.state_at(x - h).matrix()) / (2 * h);
  EXPECT_LT((fd - fam.derivative_at(x).matrix()).norm(), 1e-8);
}

TEST(estimation_core, pure_qfi_equals_four_variance) {
  std::mt19937_64 rng(29);
  for (int dim : {2, 5, 17, 32}) {
    const Operator h = random_hermitian(dim, rng);
    const StateVector psi = random_state(dim, rng);
    const ParamFamily fam = pure_unitary_family(h, psi);
    const double want = 4.0 * variance(DensityMatrix::pure(psi), h);
    EXPECT_LT(rel_err(qfi(fam, 0.0), want), 1e-9) << "dim=" << dim;
    EXPECT_LT(rel_err(qfi(fam, 0.8), want), 1e-9) << "dim=" << dim;
  }
}

TEST(estimation_core, qfi_dominates_pure_qubit_sample_size_bound_zero) {
  EXPECT_NEAR(pure_unitary_sample_size_bound(sigma_z_half(), plus_state()), 0.0, 1e-12);
  const ParamFamily fam = pure_unitary_family(sigma_z_half(), plus_state());
  EXPECT_NEAR(sample_size_bound(fam, 0.0), 0.0, 1e-9);
}

TEST(estimation_core, coherent_state_sample_size_bound) {
  // Number generator on a coherent state: Poisson central moments give
  // m4/m2^2 = 3 + 1/alpha^2, so the bound is (2 + 1/alpha^2)/4.
  for (double alpha : {0.7, 1.0, 1.5}) {
    const GaussianProbeSpec spec = GaussianProbeSpec::with_default_dim(alpha, 0.0);
    const Operator n = number_operator(spec.dim);
    const StateVector psi = gaussian_probe(spec);
    const double want = (2.0 + 1.0 / (alpha * alpha)) / 4.0;
    EXPECT_NEAR(pure_unitary_sample_size_bound(n, psi), want, 1e-6);
    EXPECT_NEAR(sample_size_bound(pure_unitary_family(n, psi), 0.1), want, 1e-4);
  }
}

TEST(estimation_core, curvature_matches_quadratic_fit) {
  // fisher of the SLD frozen at x_exp, evaluated at x_true, falls off as
  // F - G (x_exp - x_true)^2.
  const ParamFamily fam = dephased_qubit(0.5);
  const double x = 0.3;
  const Sld l0 = sld(fam, x);
  const double f0 = assess_observable(fam, x, l0.op).fisher;
  const Curvature g = calibration_curvature(fam, x);
  EXPECT_GT(g.value, 0.0);
  const double d = 1e-2;
  const double fp = assess_observable(fam, x, sld(fam, x + d).op).fisher;
  const double fm = assess_observable(fam, x, sld(fam, x - d).op).fisher;
  const double c2 = (fp + fm - 2.0 * f0) / (2.0 * d * d);
  EXPECT_LT(rel_err(-c2, g.value), 1e-3);
}

TEST(estimation_core, no_information_throws) {
  const ParamFamily fam = pure_unitary_family(sigma_z_half(), StateVector::basis(2, 0));
  EXPECT_NEAR(qfi(fam, 0.0), 0.0, 1e-15);
  EXPECT_THROW(sample_size_bound(fam, 0.0), NoInformationError);
}

TEST(estimation_core, family_checks_derivative_contract) {
  ParamFamily fam(
      2, [](double) { return DensityMatrix(Matrix(Matrix::Identity(2, 2) * 0.5)); },
      [](double) { return Operator::identity(2); }, Interval{});
  EXPECT_THROW(fam.derivative_at(0.0), ContractViolation);
  EXPECT_THROW(fam.state_at(4.0), ContractViolation);
}

}  // namespace
}  // namespace qnsr
