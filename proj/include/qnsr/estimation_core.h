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

// Single-parameter estimation on a family of states rho(x).
//
// An observable M measured on rho(x) has noise-to-sensibility ratio
//
//     dx_nsr = sqrt(<dM^2>_x) / |d<M>_x / dx|,
//
// and the information it carries is F(M) = 1 / dx_nsr^2. The maximum of
// F over all observables is attained by the symmetric logarithmic
// derivative L, the solution of (rho L + L rho) / 2 = d rho / dx with
// <L> = 0, and equals the quantum Fisher information <L^2>.

#ifndef QNSR_ESTIMATION_CORE_H_
#define QNSR_ESTIMATION_CORE_H_

#include <functional>
#include <numbers>
#include <optional>

#include "qnsr/operator_core.h"

namespace qnsr {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Generator and initial state of a pure unitary family
/// rho(x) = exp(-i x h) |psi><psi| exp(i x h).
struct PureUnitaryData {
  Operator generator;
  StateVector probe;
};

/// Differentiable map x -> (rho(x), d rho / dx) over a parameter domain.
class ParamFamily {
 public:
  using StateFn = std::function<DensityMatrix(double)>;
  using DerivativeFn = std::function<Operator(double)>;

  ParamFamily(int dim, StateFn state, DerivativeFn derivative, Interval domain);

  int dim() const { return dim_; }
  const Interval& domain() const { return domain_; }

  /// Throws ContractViolation when x is outside the domain.
  DensityMatrix state_at(double x) const;
  /// Checks the derivative is Hermitian and traceless within 1e-10.
  Operator derivative_at(double x) const;

  const std::optional<PureUnitaryData>& pure_unitary() const { return pure_; }
  ParamFamily with_pure_unitary(PureUnitaryData data) const;

 private:
  void require_in_domain(double x) const;

  int dim_;
  StateFn state_;
  DerivativeFn derivative_;
  Interval domain_;
  std::optional<PureUnitaryData> pure_;
};

struct SensitivityReport {
  double mean = 0.0;      // <M>_x
  double variance = 0.0;  // <dM^2>_x
  double slope = 0.0;     // d<M>_x/dx = Tr[(d rho/dx) M], signed
  double nsr = 0.0;       // sqrt(variance) / |slope|, units of x
  double fisher = 0.0;    // slope^2 / variance, units of 1/x^2
};

SensitivityReport assess_observable(const DensityMatrix& rho, const Operator& drho,
                                    const Operator& m);
SensitivityReport assess_observable(const ParamFamily& fam, double x, const Operator& m);

/// Symmetric logarithmic derivative restricted to the numerical support of rho.
struct Sld {
  Operator op;
  double eig_cut = 0.0;
  /// Set when d rho has weight on eigenvalue pairs below the cut, i.e. the
  /// information along those directions was truncated.
  bool support_warning = false;
};

/// 1e-12 times the largest eigenvalue of rho.
double default_eig_cut(const DensityMatrix& rho);

/// Solves (rho L + L rho)/2 = drho in the eigenbasis of rho:
/// L_jk = 2 drho_jk / (p_j + p_k) for p_j + p_k > eig_cut, zero otherwise.
Sld sld(const DensityMatrix& rho, const Operator& drho, std::optional<double> eig_cut = std::nullopt);
Sld sld(const ParamFamily& fam, double x);

/// Tr[rho L^2] at x.
double qfi(const ParamFamily& fam, double x);

/// Frobenius norm of the stationarity condition for M,
///   (rho dM + dM rho)/2 - (<dM^2> / Tr[drho M]) drho,   dM = M - <M>.
/// Throws UndefinedResidualError when Tr[drho M] vanishes.
double optimality_residual(const DensityMatrix& rho, const Operator& drho, const Operator& m);

/// rho(x) = U(x)|psi><psi|U(x)^†, U(x) = exp(-i x h), with the exact
/// derivative -i[h, rho(x)].
ParamFamily pure_unitary_family(const Operator& h, const StateVector& psi, Interval domain = {});

/// 4 <dh^2>_psi.
double pure_unitary_qfi(const Operator& h, const StateVector& psi);

struct Curvature {
  double value = 0.0;
  double step = 0.0;
  /// Richardson extrapolation was applied to dL/dx.
  bool refined = false;
  bool support_warning = false;
};

/// Curvature G(x) = <[d(dL/dx)]^2>_x - <d(L^2)/dx>_x^2 / (4 <L^2>_x) of the
/// information lost when L is calibrated at a slightly wrong point. dL/dx is a
/// central difference of L in the fixed matrix representation; `step`
/// defaults to 1e-4 of the domain width. Step and half-step differences that
/// disagree by more than 1% are combined by Richardson extrapolation. The
/// value is signed.
Curvature calibration_curvature(const ParamFamily& fam, double x,
                                std::optional<double> step = std::nullopt);

/// G(x) / QFI(x)^2; a sample count nu is large enough when nu >> this value.
/// Throws NoInformationError when QFI(x) vanishes.
double sample_size_bound(const ParamFamily& fam, double x);

/// [<dh^4> / <dh^2>^2 - 1] / 4 for pure unitary families.
double pure_unitary_sample_size_bound(const Operator& h, const StateVector& psi);

}  // namespace qnsr

#endif  // QNSR_ESTIMATION_CORE_H_
