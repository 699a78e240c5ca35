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
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

#include "qnsr/errors.h"

namespace qnsr {

namespace {

constexpr double kDerivativeTolerance = 1e-10;

double real_trace(const Matrix& m) { return m.trace().real(); }

void require_hermitian(const Operator& m, const char* what) {
  if (!m.is_hermitian()) {
    throw ContractViolation(std::string(what) + ": observable must be Hermitian");
  }
}

void require_dims(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw InvalidDimensionError(os.str());
  }
}

}  // namespace

ParamFamily::ParamFamily(int dim, StateFn state, DerivativeFn derivative, Interval domain)
    : dim_(dim), state_(std::move(state)), derivative_(std::move(derivative)), domain_(domain) {
  if (dim < 1) throw InvalidDimensionError("ParamFamily: dimension must be positive");
  if (!(domain.lo < domain.hi)) throw ContractViolation("ParamFamily: empty domain");
  if (!state_ || !derivative_) throw ContractViolation("ParamFamily: missing state or derivative");
}

void ParamFamily::require_in_domain(double x) const {
  if (!domain_.contains(x)) {
    std::ostringstream os;
    os << "parameter " << x << " outside family domain [" << domain_.lo << ", " << domain_.hi
       << "]";
    throw ContractViolation(os.str());
  }
}

DensityMatrix ParamFamily::state_at(double x) const {
  require_in_domain(x);
  DensityMatrix rho = state_(x);
  require_dims(rho.dim(), dim_, "ParamFamily::state_at");
  return rho;
}

Operator ParamFamily::derivative_at(double x) const {
  require_in_domain(x);
  Operator d = derivative_(x);
  require_dims(d.dim(), dim_, "ParamFamily::derivative_at");
  if (!d.is_hermitian()) throw ContractViolation("ParamFamily: derivative must be Hermitian");
  const Complex tr = d.matrix().trace();
  if (std::abs(tr) > kDerivativeTolerance) {
    std::ostringstream os;
    os << "ParamFamily: derivative has trace " << std::abs(tr);
    throw ContractViolation(os.str());
  }
  return d;
}

ParamFamily ParamFamily::with_pure_unitary(PureUnitaryData data) const {
  ParamFamily copy = *this;
  copy.pure_ = std::move(data);
  return copy;
}

SensitivityReport assess_observable(const DensityMatrix& rho, const Operator& drho,
                                    const Operator& m) {
  require_hermitian(m, "assess_observable");
  require_dims(rho.dim(), m.dim(), "assess_observable");
  require_dims(drho.dim(), m.dim(), "assess_observable");

  SensitivityReport rep;
  rep.mean = expectation(rho, m);
  rep.variance = variance(rho, m);
  rep.slope = real_trace(drho.matrix() * m.matrix());

  const double m_scale = 1.0 + m.max_abs();
  const double slope_floor = 1e-12 * m_scale * (1.0 + drho.max_abs());
  const double variance_floor = 1e-14 * m_scale * m_scale;
  const bool flat = std::abs(rep.slope) <= slope_floor;

  if (rep.variance <= variance_floor) {
    if (!flat) {
      std::ostringstream os;
      os << "observable has zero variance but mean moves (slope " << rep.slope
         << "); inconsistent family or truncation";
      throw DegenerateObservableError(os.str());
    }
    rep.nsr = std::numeric_limits<double>::infinity();
    rep.fisher = 0.0;
    return rep;
  }
  if (flat) {
    rep.nsr = std::numeric_limits<double>::infinity();
    rep.fisher = 0.0;
    return rep;
  }
  rep.nsr = std::sqrt(rep.variance) / std::abs(rep.slope);
  rep.fisher = rep.slope * rep.slope / rep.variance;
  return rep;
}

SensitivityReport assess_observable(const ParamFamily& fam, double x, const Operator& m) {
  return assess_observable(fam.state_at(x), fam.derivative_at(x), m);
}

double default_eig_cut(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  return 1e-12 * es.eigenvalues().maxCoeff();
}

Sld sld(const DensityMatrix& rho, const Operator& drho, std::optional<double> eig_cut) {
  require_dims(rho.dim(), drho.dim(), "sld");
  if (!drho.is_hermitian()) throw ContractViolation("sld: derivative must be Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("sld: eigensolver failed");
  const RealVector& p = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  const double cut = eig_cut.value_or(1e-12 * p.maxCoeff());
  if (!(cut > 0.0)) throw ContractViolation("sld: eigenvalue cut must be positive");

  Matrix d = v.adjoint() * drho.matrix() * v;
  d = (d + d.adjoint()).eval() * 0.5;
  const double leak_tol = 1e-8 * (1.0 + drho.max_abs());
  const Eigen::Index n = p.size();
  Matrix l = Matrix::Zero(n, n);
  bool warning = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s = p[j] + p[k];
      if (s > cut) {
        l(j, k) = 2.0 * d(j, k) / s;
      } else if (std::abs(d(j, k)) > leak_tol) {
        warning = true;
      }
    }
  }
  // Hermitian by construction; rounding in the basis change is amplified by
  // small denominators, so symmetrize before wrapping.
  Matrix lm = v * l * v.adjoint();
  lm = (lm + lm.adjoint()).eval() * 0.5;
  return Sld{Operator::hermitian(std::move(lm)), cut, warning};
}

Sld sld(const ParamFamily& fam, double x) { return sld(fam.state_at(x), fam.derivative_at(x)); }

double qfi(const ParamFamily& fam, double x) {
  const DensityMatrix rho = fam.state_at(x);
  const Sld l = sld(rho, fam.derivative_at(x));
  const Matrix& lm = l.op.matrix();
  return real_trace(rho.matrix() * lm * lm);
}

double optimality_residual(const DensityMatrix& rho, const Operator& drho, const Operator& m) {
  require_hermitian(m, "optimality_residual");
  require_dims(rho.dim(), m.dim(), "optimality_residual");
  require_dims(drho.dim(), m.dim(), "optimality_residual");

  const double slope = real_trace(drho.matrix() * m.matrix());
  if (std::abs(slope) <= 1e-12 * (1.0 + m.max_abs()) * (1.0 + drho.max_abs())) {
    throw UndefinedResidualError("optimality_residual: Tr[drho M] vanishes");
  }
  const double mean = expectation(rho, m);
  const double var = variance(rho, m);
  Matrix dm = m.matrix();
  dm.diagonal().array() -= mean;
  const Matrix& r = rho.matrix();
  const Matrix lhs = 0.5 * (r * dm + dm * r);
  const Matrix rhs = (var / slope) * drho.matrix();
  return (lhs - rhs).norm();
}

ParamFamily pure_unitary_family(const Operator& h, const StateVector& psi, Interval domain) {
  if (!h.is_hermitian()) throw ContractViolation("pure_unitary_family: h must be Hermitian");
  require_dims(h.dim(), psi.dim(), "pure_unitary_family");

  // psi(x) = V exp(-i x w) V^† psi.
  struct Spectral {
    RealVector w;
    Matrix v;
    Vector coeffs;
    Matrix h;
  };
  auto spec = std::make_shared<Spectral>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("pure_unitary_family: eigensolver failed");
  spec->w = es.eigenvalues();
  spec->v = es.eigenvectors();
  spec->coeffs = spec->v.adjoint() * psi.amplitudes();
  spec->h = h.matrix();

  auto evolved = [spec](double x) {
    Vector c = spec->coeffs;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -x * spec->w[k]);
    return StateVector::normalized(spec->v * c);
  };
  auto state = [evolved](double x) { return DensityMatrix::pure(evolved(x)); };
  auto derivative = [evolved, spec](double x) {
    const Vector a = evolved(x).amplitudes();
    const Matrix rho = a * a.adjoint();
    return Operator::hermitian(Complex(0.0, -1.0) * (spec->h * rho - rho * spec->h));
  };
  ParamFamily fam(h.dim(), state, derivative, domain);
  return fam.with_pure_unitary(PureUnitaryData{h, psi});
}

double pure_unitary_qfi(const Operator& h, const StateVector& psi) {
  return 4.0 * central_moment(psi, h, 2);
}

Curvature calibration_curvature(const ParamFamily& fam, double x, std::optional<double> step) {
  const double h = step.value_or(1e-4 * fam.domain().width());
  if (!(h > 0.0)) throw ContractViolation("calibration_curvature: step must be positive");
  if (!fam.domain().contains(x - h) || !fam.domain().contains(x + h)) {
    throw ContractViolation("calibration_curvature: x +/- step leaves the family domain");
  }

  Curvature out;
  out.step = h;
  auto l_at = [&](double y) {
    Sld s = sld(fam, y);
    out.support_warning = out.support_warning || s.support_warning;
    return s.op.matrix();
  };
  const Matrix d_full = (l_at(x + h) - l_at(x - h)) / (2.0 * h);
  const Matrix d_half = (l_at(x + 0.5 * h) - l_at(x - 0.5 * h)) / h;
  Matrix dl = d_half;
  if ((d_full - d_half).norm() > 0.01 * d_half.norm()) {
    dl = (4.0 * d_half - d_full) / 3.0;
    out.refined = true;
  }

  const DensityMatrix rho = fam.state_at(x);
  const Sld l0 = sld(rho, fam.derivative_at(x));
  out.support_warning = out.support_warning || l0.support_warning;
  const Matrix& r = rho.matrix();
  const Matrix& l = l0.op.matrix();

  const double info = real_trace(r * l * l);
  if (!(info > 0.0)) throw NoInformationError("calibration_curvature: QFI vanishes at x");
  const double dl_mean = real_trace(r * dl);
  const double dl_var = real_trace(r * dl * dl) - dl_mean * dl_mean;
  const double dl2_mean = real_trace(r * (l * dl + dl * l));
  out.value = dl_var - dl2_mean * dl2_mean / (4.0 * info);
  return out;
}

double sample_size_bound(const ParamFamily& fam, double x) {
  const double info = qfi(fam, x);
  if (!(info > 1e-14)) throw NoInformationError("sample_size_bound: QFI vanishes at x");
  return calibration_curvature(fam, x).value / (info * info);
}

double pure_unitary_sample_size_bound(const Operator& h, const StateVector& psi) {
  if (!h.is_hermitian()) throw ContractViolation("pure_unitary_sample_size_bound: h must be Hermitian");
  const double m2 = central_moment(psi, h, 2);
  if (!(m2 > 1e-14)) throw NoInformationError("pure_unitary_sample_size_bound: <dh^2> vanishes");
  const double m4 = central_moment(psi, h, 4);
  return (m4 / (m2 * m2) - 1.0) / 4.0;
}

}  // namespace qnsr
