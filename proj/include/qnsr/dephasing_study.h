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

// Phase estimation on an oscillator under Gaussian phase diffusion.
//
// The probe D(alpha) S(r)|0> picks up a phase phi plus a random kick theta
// drawn from a zero-mean Gaussian of variance 2 beta^2. Averaging over theta
// multiplies the Fock coherence rho_nm by exp(-beta^2 (n - m)^2). The probe
// is read out through the quadrature a e^{i phi_exp} + a^† e^{-i phi_exp},
// which is best calibrated at phi_exp = phi - pi/2 and then carries
//
//   F(r, alpha, beta) = 4 alpha^2 e^{-2 beta^2}
//       / (e^{-2r} + (1 - e^{-4 beta^2}) (2 alpha^2 + sinh 2r)).

#ifndef QNSR_DEPHASING_STUDY_H_
#define QNSR_DEPHASING_STUDY_H_

#include <span>
#include <variant>
#include <vector>

#include "qnsr/estimation_core.h"
#include "qnsr/operator_core.h"

namespace qnsr {

struct DiffusionParams {
  double beta = 0.0;

  /// Throws ContractViolation for negative or non-finite beta.
  explicit DiffusionParams(double b = 0.0);
  double two_beta_sq() const { return 2.0 * beta * beta; }
};

struct PhaseFamilySpec {
  std::variant<GaussianProbeSpec, StateVector> probe = GaussianProbeSpec{};
  DiffusionParams diffusion{};
  Interval phi_domain{};

  int dim() const;
  /// Probe amplitudes; Gaussian probes are prepared with gaussian_probe().
  StateVector probe_state() const;
};

/// rho_nm -> rho_nm e^{-i phi (n - m)} e^{-beta^2 (n - m)^2}.
DensityMatrix dephase_channel(const DensityMatrix& rho, double phi, double beta);

/// phi -> dephase_channel(|psi><psi|, phi, beta), with the exact derivative
/// (d rho/d phi)_nm = -i (n - m) rho_nm. Throws ContractViolation when the
/// phase domain is wider than 2 pi.
ParamFamily dephasing_family(const PhaseFamilySpec& spec);

/// d^2 rho / d phi^2 of the dephasing family, (-(n - m)^2 rho_nm).
Operator dephasing_second_derivative(const PhaseFamilySpec& spec, double phi);

/// a e^{i phi_exp} + a^† e^{-i phi_exp}; vacuum variance 1.
Operator quadrature(double phi_exp, int dim);

/// Closed-form information of the calibrated quadrature. Stable for |r| > 300.
double analytic_fnsr(double r, double alpha, double beta);

/// phi_true - pi/2 wrapped to (-pi, pi].
double optimal_calibration(double phi_true);

/// (1/4) ln coth(2 beta^2); +infinity at beta = 0.
double r_max(double beta);

/// Squeezing that maximizes analytic_fnsr at fixed mean excitation N.
/// Throws NumericalConsistencyError if sinh^2(r) overshoots N.
double r_opt(double n, double beta);

/// Probe at the optimal squeezing for mean excitation N.
struct OptimalProbe {
  double r = 0.0;
  double alpha = 0.0;
  double fnsr = 0.0;
};
OptimalProbe optimal_probe(double n, double beta);

/// Standard-limit bound 4N / (1 + 8 beta^2 N).
double c_q(double n, double beta);

/// Lower bound on the unsqueezed-to-standard information ratio,
/// (1 + 8 beta^2 N) / (e^{2 beta^2} + 4 sinh(2 beta^2) N).
double no_squeeze_ratio_bound(double n, double beta);

struct EnhancementCell {
  double two_beta_sq = 0.0;
  double n = 0.0;
  double ratio = 0.0;
  bool enhanced = false;
};

struct EnhancementRow {
  double two_beta_sq = 0.0;
  double max_ratio = 0.0;
  double argmax_n = 0.0;
};

struct EnhancementTable {
  std::vector<EnhancementCell> cells;  // row-major in two_beta_sq, then N
  std::vector<EnhancementRow> rows;
};

/// F_opt(N, beta) / C_Q(N, beta), with beta = sqrt(two_beta_sq / 2).
double enhancement_ratio(double two_beta_sq, double n);

/// Maximum of enhancement_ratio over N: grid argmax, then golden-section
/// refinement in log N between the neighbouring grid points.
EnhancementRow max_enhancement(double two_beta_sq, std::span<const double> n_grid);

EnhancementTable enhancement_scan(std::span<const double> two_beta_sq_grid,
                                  std::span<const double> n_grid);

/// Bisection for the 2 beta^2 at which max_enhancement crosses 1.
/// Throws ContractViolation if [lo, hi] does not bracket the crossing.
double locate_enhancement_threshold(std::span<const double> n_grid, double lo = 0.01,
                                    double hi = 1.0, double tol = 1e-6);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// 60 points in [0.01, 1].
std::vector<double> default_two_beta_sq_grid();
/// 200 points in [0.05, 1e4].
std::vector<double> default_n_grid();

}  // namespace qnsr

#endif  // QNSR_DEPHASING_STUDY_H_
