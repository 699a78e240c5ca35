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

// Acceptance gate. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the listed criteria. Exit status is nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnsr/dephasing_study.h"
#include "qnsr/errors.h"
#include "qnsr/estimation_core.h"
#include "qnsr/mc_estimation.h"
#include "qnsr/operator_core.h"

namespace qnsr {
namespace {

using std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // <= 0: no runtime requirement
  std::function<Outcome()> run;
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Operator random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return Operator::hermitian((m + m.adjoint()) * 0.5);
}

StateVector random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return StateVector::normalized(v);
}

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(Matrix((rho + rho.adjoint()) * 0.5));
}

Operator half_sigma_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.5;
  m(1, 1) = -0.5;
  return Operator::hermitian(m);
}

StateVector plus_state() {
  Vector v(2);
  v << 1.0, 1.0;
  return StateVector::normalized(v);
}

PhaseFamilySpec gaussian_family(double alpha, double r, double beta) {
  PhaseFamilySpec spec;
  spec.probe = GaussianProbeSpec::with_default_dim(alpha, r);
  spec.diffusion = DiffusionParams(beta);
  return spec;
}

ParamFamily dephased_qubit(double beta) {
  PhaseFamilySpec spec;
  spec.probe = plus_state();
  spec.diffusion = DiffusionParams(beta);
  return dephasing_family(spec);
}

Outcome pure_qfi_identity() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> dims(2, 32);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int dim = dims(rng);
    const Operator h = random_hermitian(dim, rng);
    const StateVector psi = random_state(dim, rng);
    const double want = 4.0 * variance(DensityMatrix::pure(psi), h);
    worst = std::max(worst, rel_err(qfi(pure_unitary_family(h, psi), 0.0), want));
  }
  return {worst <= 1e-9, "max rel err " + fmt(worst) + " (tol 1e-9) over 20 pairs"};
}

Outcome closed_form_cross_validation() {
  double worst = 0.0;
  std::string where;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double r : {0.0, 0.3, 0.8}) {
      for (double beta : {0.0, 0.3, 0.63}) {
        const ParamFamily fam = dephasing_family(gaussian_family(alpha, r, beta));
        const double phi = 0.0;
        const Operator m = quadrature(optimal_calibration(phi), fam.dim());
        const double e =
            rel_err(assess_observable(fam, phi, m).fisher, analytic_fnsr(r, alpha, beta));
        if (e > worst) {
          worst = e;
          where = "(a=" + fmt(alpha) + ", r=" + fmt(r) + ", b=" + fmt(beta) + ")";
        }
      }
    }
  }
  return {worst <= 1e-4, "max rel err " + fmt(worst) + " at " + where + " (tol 1e-4), 27 points"};
}

Outcome sld_optimality() {
  std::mt19937_64 rng(2002);
  struct Case {
    const char* name;
    ParamFamily fam;
    double x;
  };
  const std::vector<Case> cases{
      {"pure qubit", pure_unitary_family(half_sigma_z(), plus_state()), 0.4},
      {"dephased qubit", dephased_qubit(0.5), 0.3},
      {"dephasing Fock", dephasing_family(gaussian_family(1.0, 0.3, 0.3)), 0.2},
  };
  bool ok = true;
  double worst_excess = -INFINITY;
  double worst_sld = 0.0;
  for (const Case& c : cases) {
    const DensityMatrix rho = c.fam.state_at(c.x);
    const Operator drho = c.fam.derivative_at(c.x);
    const Sld l = sld(rho, drho);
    const double f = (rho.matrix() * l.op.matrix() * l.op.matrix()).trace().real();
    const double sld_err = std::abs(assess_observable(rho, drho, l.op).fisher - f);
    worst_sld = std::max(worst_sld, sld_err);
    ok = ok && sld_err <= 1e-9;
    for (int k = 0; k < 200; ++k) {
      const double fm = assess_observable(rho, drho, random_hermitian(c.fam.dim(), rng)).fisher;
      worst_excess = std::max(worst_excess, fm - f);
      ok = ok && fm <= f + 1e-8;
    }
  }
  return {ok, "max fisher(M) - QFI " + fmt(worst_excess) + " (tol 1e-8); |fisher(L) - QFI| " +
                  fmt(worst_sld) + " (tol 1e-9); 3 families x 200 observables"};
}

Outcome noiseless_optimum() {
  double worst_closed = 0.0;
  for (double n : {0.5, 1.0, 2.0, 5.0}) {
    const double ro = r_opt(n, 0.0);
    const double s = std::sinh(ro);
    const double f = analytic_fnsr(ro, std::sqrt(std::max(0.0, n - s * s)), 0.0);
    worst_closed = std::max(worst_closed, rel_err(f, 4.0 * n * (n + 1.0)));
  }
  double worst_qfi = 0.0;
  double worst_quad = 0.0;
  std::string qfi_detail;
  for (double n : {0.5, 1.0, 2.0}) {
    const OptimalProbe p = optimal_probe(n, 0.0);
    const ParamFamily fam = dephasing_family(gaussian_family(p.alpha, p.r, 0.0));
    const double want = 4.0 * n * (n + 1.0);
    const double q = qfi(fam, 0.0);
    const double quad =
        assess_observable(fam, 0.0, quadrature(optimal_calibration(0.0), fam.dim())).fisher;
    worst_qfi = std::max(worst_qfi, rel_err(q, want));
    worst_quad = std::max(worst_quad, rel_err(quad, want));
    qfi_detail += " N=" + fmt(n) + ": QFI " + fmt(q) + " vs " + fmt(want) + ";";
  }
  const bool ok = worst_closed <= 1e-9 && worst_qfi <= 1e-3;
  return {ok, "closed form rel err " + fmt(worst_closed) + " (tol 1e-9); numeric QFI rel err " +
                  fmt(worst_qfi) + " (tol 1e-3);" + qfi_detail +
                  " calibrated-quadrature fisher rel err " + fmt(worst_quad)};
}

Outcome fig2_threshold() {
  const std::vector<double> n_grid = default_n_grid();
  const double t = locate_enhancement_threshold(n_grid);
  const EnhancementTable table = enhancement_scan(default_two_beta_sq_grid(), n_grid);
  bool monotone = true;
  for (std::size_t k = 1; k < table.rows.size(); ++k) {
    monotone = monotone && table.rows[k].max_ratio < table.rows[k - 1].max_ratio;
  }
  const bool ok = std::abs(t - 0.21) <= 0.01 && monotone;
  return {ok, "threshold 2b^2 = " + fmt(t) + " (want 0.21 +- 0.01); max ratio " +
                  (monotone ? "decreasing" : "NOT decreasing") + " over " +
                  std::to_string(table.rows.size()) + " rows"};
}

Outcome no_squeeze_bound() {
  const double beta = 0.63;
  const double at1 = no_squeeze_ratio_bound(1.0, beta);
  const double at_big = no_squeeze_ratio_bound(1e6, beta);
  bool monotone = true;
  double prev = -INFINITY;
  for (double n : log_grid(1e-2, 1e6, 400)) {
    const double b = no_squeeze_ratio_bound(n, beta);
    monotone = monotone && b > prev;
    prev = b;
  }
  const bool ok = std::abs(at1 - 0.7285) <= 1e-3 && std::abs(at_big - 0.902) <= 1e-3 && monotone;
  return {ok, "N=1: " + fmt(at1) + " (want 0.7285 +- 1e-3); N=1e6: " + fmt(at_big) +
                  " (want 0.902 +- 1e-3); " + (monotone ? "increasing" : "NOT increasing") +
                  " in N"};
}

// Nodes and weights for weight e^{-t^2}.
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k - 1, k) = j(k, k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()[k];
    weights[k] = std::sqrt(pi) * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
}

Outcome channel_closed_form() {
  // Six levels: 64 nodes resolve e^{-i theta k} for |k| <= 5 at beta = 1 to
  // round-off, beyond which the oracle itself loses accuracy.
  const int dim = 6;
  std::vector<double> t;
  std::vector<double> w;
  gauss_hermite(64, t, w);
  std::mt19937_64 rng(3003);
  const Operator n = number_operator(dim);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const DensityMatrix rho = random_density(dim, rng);
    const double phi = std::uniform_real_distribution<double>(-pi, pi)(rng);
    for (double beta : {0.2, 0.5, 1.0}) {
      Matrix integral = Matrix::Zero(dim, dim);
      for (std::size_t k = 0; k < t.size(); ++k) {
        const Matrix u = unitary_from_hamiltonian(n, phi + 2.0 * beta * t[k]).matrix();
        integral += (w[k] / std::sqrt(pi)) * u * rho.matrix() * u.adjoint();
      }
      const Matrix closed = dephase_channel(rho, phi, beta).matrix();
      worst = std::max(worst, (closed - integral).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, "max elementwise diff " + fmt(worst) + " (tol 1e-10), 10 states x 3 betas"};
}

Outcome large_n_limit() {
  double worst = 0.0;
  for (double t : {0.2, 0.5, 1.0}) {
    const double f = optimal_probe(1e6, std::sqrt(0.5 * t)).fnsr;
    worst = std::max(worst, rel_err(f, 1.0 / std::sinh(t)));
  }
  return {worst <= 1e-3, "max rel err vs csch(2b^2) " + fmt(worst) + " (tol 1e-3)"};
}

Outcome monte_carlo() {
  const double alpha = 1.0;
  const double beta = 0.3;
  TrialConfig config;
  config.nu = 100000;
  config.repeats = 200;
  config.seed = kDefaultSeed;
  const TrialSummary s = run_trials(gaussian_family(alpha, 0.0, beta), 0.0, config).summary;
  const double ratio =
      static_cast<double>(s.nu) * s.empirical_variance * analytic_fnsr(0.0, alpha, beta);
  // Relative spread of a sample variance over R repeats is sqrt(2/(R-1)).
  const double spread = std::sqrt(2.0 / (s.repeats - 1));
  const bool ok = ratio >= 0.95 && ratio <= 1.10;
  return {ok, "nu*Var*F = " + fmt(ratio) + " (want [0.95, 1.10]); seed " +
                  std::to_string(s.seed) + ", 1-sigma sampling spread " + fmt(spread) +
                  ", out-of-range " + std::to_string(s.out_of_range_count)};
}

Outcome expansion_curvature() {
  const ParamFamily fam = dephased_qubit(0.5);
  const double x = 0.3;
  const DensityMatrix rho = fam.state_at(x);
  const Operator drho = fam.derivative_at(x);
  const double f0 = qfi(fam, x);
  const double g = calibration_curvature(fam, x).value;

  // Least-squares quadratic through fisher(L(x_exp)) on a symmetric stencil.
  const int points = 11;
  const double half = 0.05;
  Eigen::MatrixXd a(points, 3);
  Eigen::VectorXd y(points);
  for (int k = 0; k < points; ++k) {
    const double d = -half + 2.0 * half * k / (points - 1);
    a(k, 0) = 1.0;
    a(k, 1) = d;
    a(k, 2) = d * d;
    y[k] = assess_observable(rho, drho, sld(fam, x + d).op).fisher;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  const double const_err = rel_err(c[0], f0);
  const double curv_err = rel_err(-c[2], g);
  const double pure_bound = sample_size_bound(pure_unitary_family(half_sigma_z(), plus_state()), 0.0);
  const bool ok = const_err <= 1e-6 && curv_err <= 0.05 && std::abs(pure_bound) <= 1e-9;
  return {ok, "constant rel err " + fmt(const_err) + " (tol 1e-6); curvature " + fmt(c[2]) +
                  " vs -G " + fmt(-g) + ", rel err " + fmt(curv_err) +
                  " (tol 0.05); pure-qubit bound " + fmt(pure_bound) + " (tol 1e-9)"};
}

std::vector<Criterion> criteria() {
  return {
      {1, "pure-unitary QFI identity", 10.0, pure_qfi_identity},
      {2, "closed-form fisher cross-validation", 60.0, closed_form_cross_validation},
      {3, "SLD optimality", 30.0, sld_optimality},
      {4, "noiseless optimum", 0.0, noiseless_optimum},
      {5, "enhancement threshold", 10.0, fig2_threshold},
      {6, "no-squeezing bound endpoints", 0.0, no_squeeze_bound},
      {7, "dephasing channel closed form", 10.0, channel_closed_form},
      {8, "large-N limit", 0.0, large_n_limit},
      {9, "Monte Carlo attainability", 120.0, monte_carlo},
      {10, "expansion curvature", 0.0, expansion_curvature},
  };
}

}  // namespace
}  // namespace qnsr

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.push_back(std::atoi(argv[k]));

  int failures = 0;
  for (const auto& c : qnsr::criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    qnsr::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = qnsr::fmt(secs) + " s";
    if (c.budget_seconds > 0) {
      timing += " (budget " + qnsr::fmt(c.budget_seconds) + " s)";
      if (secs > c.budget_seconds) o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d, %s: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                o.detail.c_str(), timing.c_str());
  }
  return failures == 0 ? 0 : 1;
}
