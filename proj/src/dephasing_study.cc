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

#include "qnsr/dephasing_study.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "qnsr/errors.h"

namespace qnsr {

namespace {

using std::numbers::pi;

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and non-negative, got " << v;
    throw ContractViolation(os.str());
  }
}

// Multiplies rho_nm by e^{-i phi (n-m)} e^{-beta^2 (n-m)^2}.
Matrix dephased(const Matrix& rho, double phi, double beta) {
  const Eigen::Index d = rho.rows();
  const double b2 = beta * beta;
  Matrix out(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = 0; m < d; ++m) {
      const double k = static_cast<double>(n - m);
      out(n, m) = rho(n, m) * std::polar(std::exp(-b2 * k * k), -phi * k);
    }
  }
  return out;
}

// Elementwise rho_nm * f(n - m).
template <typename F>
Matrix weighted_by_offset(const Matrix& rho, F f) {
  const Eigen::Index d = rho.rows();
  Matrix out(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = 0; m < d; ++m) out(n, m) = rho(n, m) * f(static_cast<double>(n - m));
  }
  return out;
}

constexpr double kGoldenSection = 0.6180339887498949;

}  // namespace

DiffusionParams::DiffusionParams(double b) : beta(b) { require_non_negative(b, "beta"); }

int PhaseFamilySpec::dim() const {
  if (const auto* g = std::get_if<GaussianProbeSpec>(&probe)) return g->dim;
  return std::get<StateVector>(probe).dim();
}

StateVector PhaseFamilySpec::probe_state() const {
  if (const auto* g = std::get_if<GaussianProbeSpec>(&probe)) return gaussian_probe(*g);
  return std::get<StateVector>(probe);
}

DensityMatrix dephase_channel(const DensityMatrix& rho, double phi, double beta) {
  require_non_negative(beta, "dephase_channel: beta");
  return DensityMatrix(dephased(rho.matrix(), phi, beta));
}

ParamFamily dephasing_family(const PhaseFamilySpec& spec) {
  if (spec.phi_domain.width() > 2.0 * pi + 1e-12) {
    throw ContractViolation("dephasing_family: phase domain wider than 2 pi");
  }
  const double beta = spec.diffusion.beta;
  const Vector psi = spec.probe_state().amplitudes();
  auto rho0 = std::make_shared<const Matrix>(psi * psi.adjoint());

  auto state = [rho0, beta](double phi) { return DensityMatrix(dephased(*rho0, phi, beta)); };
  auto derivative = [rho0, beta](double phi) {
    const Matrix rho = dephased(*rho0, phi, beta);
    return Operator::hermitian(weighted_by_offset(rho, [](double k) { return Complex(0.0, -k); }));
  };
  return ParamFamily(static_cast<int>(psi.size()), state, derivative, spec.phi_domain);
}

Operator dephasing_second_derivative(const PhaseFamilySpec& spec, double phi) {
  const Vector psi = spec.probe_state().amplitudes();
  const Matrix rho = dephased(psi * psi.adjoint(), phi, spec.diffusion.beta);
  return Operator::hermitian(weighted_by_offset(rho, [](double k) { return Complex(-k * k, 0.0); }));
}

Operator quadrature(double phi_exp, int dim) {
  const auto [a, ad] = fock_ladder(dim);
  const Complex ph = std::polar(1.0, phi_exp);
  return Operator::hermitian(a.matrix() * ph + ad.matrix() * std::conj(ph));
}

double analytic_fnsr(double r, double alpha, double beta) {
  const double b2 = beta * beta;
  const double a2 = alpha * alpha;
  const double diffusion = -std::expm1(-4.0 * b2);  // 1 - e^{-4 beta^2}
  const double numerator = 4.0 * a2 * std::exp(-2.0 * b2);
  if (std::abs(r) <= 300.0) {
    return numerator / (std::exp(-2.0 * r) + diffusion * (2.0 * a2 + std::sinh(2.0 * r)));
  }
  // Rescale numerator and denominator by e^{2|r|} to stay finite.
  if (r > 0.0) {
    const double e = std::exp(-2.0 * r);
    const double denom = e * e + diffusion * (2.0 * a2 * e + 0.5 * (1.0 - e * e));
    if (denom == 0.0) return numerator > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return numerator * e / denom;
  }
  const double e = std::exp(2.0 * r);
  const double denom = 1.0 + diffusion * (2.0 * a2 * e + 0.5 * (e * e - 1.0));
  return numerator * e / denom;
}

double optimal_calibration(double phi_true) {
  double phi = std::remainder(phi_true - 0.5 * pi, 2.0 * pi);
  if (phi <= -pi) phi += 2.0 * pi;
  return phi;
}

double r_max(double beta) {
  require_non_negative(beta, "r_max: beta");
  if (beta == 0.0) return std::numeric_limits<double>::infinity();
  // ln coth(y) = log1p(e^{-2y}) - log1p(-e^{-2y}), accurate for large y.
  const double q = std::exp(-4.0 * beta * beta);
  return 0.25 * (std::log1p(q) - std::log1p(-q));
}

double r_opt(double n, double beta) {
  require_non_negative(n, "r_opt: N");
  require_non_negative(beta, "r_opt: beta");
  const double b2 = beta * beta;
  const double big_n = (2.0 * n + 1.0) * std::exp(2.0 * b2);
  const double num = 2.0 * big_n * std::cosh(2.0 * b2);
  const double den = 1.0 + std::sqrt(1.0 + 2.0 * big_n * big_n * std::sinh(4.0 * b2));
  const double r = 0.5 * std::log(num / den);
  const double s = std::sinh(r);
  if (s * s > n + 1e-12 * std::max(1.0, n)) {
    std::ostringstream os;
    os << "r_opt: sinh^2(r) = " << s * s << " exceeds N = " << n;
    throw NumericalConsistencyError(os.str());
  }
  return r;
}

OptimalProbe optimal_probe(double n, double beta) {
  OptimalProbe p;
  p.r = r_opt(n, beta);
  const double s = std::sinh(p.r);
  p.alpha = std::sqrt(std::max(0.0, n - s * s));
  p.fnsr = analytic_fnsr(p.r, p.alpha, beta);
  return p;
}

double c_q(double n, double beta) {
  require_non_negative(n, "c_q: N");
  return 4.0 * n / (1.0 + 8.0 * beta * beta * n);
}

double no_squeeze_ratio_bound(double n, double beta) {
  require_non_negative(n, "no_squeeze_ratio_bound: N");
  const double t = 2.0 * beta * beta;
  return (1.0 + 4.0 * t * n) / (std::exp(t) + 4.0 * std::sinh(t) * n);
}

double enhancement_ratio(double two_beta_sq, double n) {
  require_non_negative(two_beta_sq, "enhancement_ratio: 2 beta^2");
  if (!(n > 0.0)) throw ContractViolation("enhancement_ratio: N must be positive");
  const double beta = std::sqrt(0.5 * two_beta_sq);
  return optimal_probe(n, beta).fnsr / c_q(n, beta);
}

EnhancementRow max_enhancement(double two_beta_sq, std::span<const double> n_grid) {
  if (n_grid.empty()) throw ContractViolation("max_enhancement: empty N grid");
  std::size_t best = 0;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    const double v = enhancement_ratio(two_beta_sq, n_grid[k]);
    if (v > best_ratio) {
      best_ratio = v;
      best = k;
    }
  }
  EnhancementRow row{two_beta_sq, best_ratio, n_grid[best]};
  if (best == 0 || best + 1 == n_grid.size()) return row;

  // Golden-section search in log N on the bracketing grid cells.
  double lo = std::log(n_grid[best - 1]);
  double hi = std::log(n_grid[best + 1]);
  auto f = [&](double u) { return enhancement_ratio(two_beta_sq, std::exp(u)); };
  double u1 = hi - kGoldenSection * (hi - lo);
  double u2 = lo + kGoldenSection * (hi - lo);
  double f1 = f(u1);
  double f2 = f(u2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = u1;
      u1 = u2;
      f1 = f2;
      u2 = lo + kGoldenSection * (hi - lo);
      f2 = f(u2);
    } else {
      hi = u2;
      u2 = u1;
      f2 = f1;
      u1 = hi - kGoldenSection * (hi - lo);
      f1 = f(u1);
    }
  }
  const double u = 0.5 * (lo + hi);
  const double v = f(u);
  if (v > row.max_ratio) {
    row.max_ratio = v;
    row.argmax_n = std::exp(u);
  }
  return row;
}

EnhancementTable enhancement_scan(std::span<const double> two_beta_sq_grid,
                                  std::span<const double> n_grid) {
  for (double t : two_beta_sq_grid) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ContractViolation("enhancement_scan: 2 beta^2 grid must be positive");
  }
  for (double n : n_grid) {
    if (!(n > 0.0) || !std::isfinite(n)) throw ContractViolation("enhancement_scan: N grid must be positive");
  }
  EnhancementTable table;
  table.cells.reserve(two_beta_sq_grid.size() * n_grid.size());
  table.rows.reserve(two_beta_sq_grid.size());
  for (double t : two_beta_sq_grid) {
    for (double n : n_grid) {
      const double ratio = enhancement_ratio(t, n);
      table.cells.push_back({t, n, ratio, ratio >= 1.0});
    }
    table.rows.push_back(max_enhancement(t, n_grid));
  }
  return table;
}

double locate_enhancement_threshold(std::span<const double> n_grid, double lo, double hi,
                                    double tol) {
  auto excess = [&](double t) { return max_enhancement(t, n_grid).max_ratio - 1.0; };
  double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    std::ostringstream os;
    os << "locate_enhancement_threshold: [" << lo << ", " << hi
       << "] does not bracket the crossing (excess " << f_lo << ", " << f_hi << ")";
    throw ContractViolation(os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = excess(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw ContractViolation("log_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = lo * std::exp(step * k);
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_two_beta_sq_grid() { return log_grid(0.01, 1.0, 60); }

std::vector<double> default_n_grid() { return log_grid(0.05, 1e4, 200); }

}  // namespace qnsr
