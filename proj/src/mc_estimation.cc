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

#include "qnsr/mc_estimation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "qnsr/errors.h"

namespace qnsr {

namespace {

using std::numbers::pi;

constexpr std::size_t kMinWindowPoints = 5;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (count - 1);
  }
  g.back() = hi;
  return g;
}

// Fritsch-Carlson: zero slopes of the wrong sign and shrink the rest so each
// cubic segment stays monotone.
void limit_monotone(const std::vector<double>& xs, const std::vector<double>& ys,
                    std::vector<double>& d, std::size_t begin, std::size_t end) {
  for (std::size_t k = begin; k < end; ++k) {
    const double secant = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k]);
    if (secant == 0.0) {
      d[k] = d[k + 1] = 0.0;
      continue;
    }
    double a = d[k] / secant;
    double b = d[k + 1] / secant;
    if (a < 0.0) d[k] = a = 0.0;
    if (b < 0.0) d[k + 1] = b = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      d[k] = tau * a * secant;
      d[k + 1] = tau * b * secant;
    }
  }
}

std::vector<double> estimated_slopes(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    d[k] = (ys[hi] - ys[lo]) / (xs[hi] - xs[lo]);
  }
  return d;
}

// Length of the strictly monotone run through `mid` in direction `dir`.
std::pair<std::size_t, std::size_t> monotone_run(const std::vector<double>& ys, std::size_t mid,
                                                 double dir) {
  std::size_t lo = mid;
  while (lo > 0 && dir * (ys[lo] - ys[lo - 1]) > 0.0) --lo;
  std::size_t hi = mid;
  while (hi + 1 < ys.size() && dir * (ys[hi + 1] - ys[hi]) > 0.0) ++hi;
  return {lo, hi};
}

struct HermiteSegment {
  double x0, h, y0, y1, d0, d1;

  double value(double t) const {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
  }
  double derivative(double t) const {  // with respect to t
    const double t2 = t * t;
    return (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * y1 +
           (3 * t2 - 2 * t) * h * d1;
  }
};

// Safeguarded Newton on [0, 1] for value(t) == y, with y between y0 and y1.
double solve_segment(const HermiteSegment& seg, double y) {
  double lo = 0.0;
  double hi = 1.0;
  const double sign_lo = seg.y0 - y;
  double t = (y - seg.y0) / (seg.y1 - seg.y0);
  for (int it = 0; it < 200; ++it) {
    const double f = seg.value(t) - y;
    if (f == 0.0) return t;
    if ((f > 0.0) == (sign_lo > 0.0)) {
      lo = t;
    } else {
      hi = t;
    }
    const double fp = seg.derivative(t);
    double next = fp != 0.0 ? t - f / fp : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-16 || hi - lo <= 1e-16) return next;
    t = next;
  }
  return t;
}

// Window [c - pi/2, c + pi/2] clipped to `domain`.
std::vector<double> phase_window(double center, const Interval& domain, int points) {
  const double lo = std::max(center - 0.5 * pi, domain.lo);
  const double hi = std::min(center + 0.5 * pi, domain.hi);
  if (!(hi - lo > 0.125 * pi)) {
    std::ostringstream os;
    os << "inversion window around " << center << " does not fit the phase domain";
    throw ContractViolation(os.str());
  }
  return linspace(lo, hi, points);
}

}  // namespace

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

MeasurementModel::MeasurementModel(const Operator& m) {
  if (!m.is_hermitian()) throw ContractViolation("MeasurementModel: observable must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("MeasurementModel: eigensolver failed");
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

std::vector<double> MeasurementModel::probabilities(const DensityMatrix& rho) const {
  if (rho.dim() != dim()) throw InvalidDimensionError("MeasurementModel: dimension mismatch");
  const Matrix diag = eigenvectors_.adjoint() * rho.matrix() * eigenvectors_;
  std::vector<double> p(static_cast<std::size_t>(dim()));
  double total = 0.0;
  for (int k = 0; k < dim(); ++k) {
    double v = diag(k, k).real();
    if (v < -1e-12) {
      std::ostringstream os;
      os << "negative outcome probability " << v;
      throw NumericalConsistencyError(os.str());
    }
    v = std::max(0.0, v);
    p[static_cast<std::size_t>(k)] = v;
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "outcome probabilities sum to " << total;
    throw NumericalConsistencyError(os.str());
  }
  return p;
}

OutcomeSampler::OutcomeSampler(const MeasurementModel& model, const DensityMatrix& rho) {
  const std::vector<double> p = model.probabilities(rho);
  values_.assign(model.eigenvalues().data(), model.eigenvalues().data() + model.dim());
  cumulative_.resize(p.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    cumulative_[k] = acc;
  }
  for (double& c : cumulative_) c /= acc;
  cumulative_.back() = 1.0;
}

double OutcomeSampler::draw(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return values_[static_cast<std::size_t>(it - cumulative_.begin())];
}

double OutcomeSampler::sample_mean(std::uint64_t nu, std::mt19937_64& rng) const {
  if (nu == 0) throw ContractViolation("sample_mean: nu must be positive");
  double sum = 0.0;
  for (std::uint64_t k = 0; k < nu; ++k) sum += draw(rng);
  return sum / static_cast<double>(nu);
}

std::vector<double> sample_outcomes(const DensityMatrix& rho, const Operator& m, std::uint64_t nu,
                                    std::uint64_t seed) {
  const OutcomeSampler sampler(MeasurementModel(m), rho);
  std::mt19937_64 rng = make_stream(seed, 0);
  std::vector<double> out(nu);
  for (double& v : out) v = sampler.draw(rng);
  return out;
}

CalibrationCurve make_curve(std::vector<double> xs, std::vector<double> means,
                            std::optional<std::vector<double>> slopes) {
  const std::size_t n = xs.size();
  if (means.size() != n || (slopes && slopes->size() != n)) {
    throw ContractViolation("make_curve: xs, means and slopes must have equal length");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(xs[k] > xs[k - 1])) throw ContractViolation("make_curve: grid must be strictly increasing");
  }
  if (n < kMinWindowPoints) {
    throw NonInvertibleCurveError("calibration curve needs at least 5 grid points");
  }

  const std::size_t mid = (n - 1) / 2;
  const auto up = monotone_run(means, mid, 1.0);
  const auto down = monotone_run(means, mid, -1.0);
  const bool increasing = (up.second - up.first) >= (down.second - down.first);
  const auto [wb, we] = increasing ? up : down;
  if (we - wb + 1 < kMinWindowPoints) {
    std::ostringstream os;
    os << "calibration curve is not invertible: largest monotone window through the midpoint has "
       << (we - wb + 1) << " points";
    throw NonInvertibleCurveError(os.str());
  }

  CalibrationCurve c;
  c.slopes = slopes ? std::move(*slopes) : estimated_slopes(xs, means);
  limit_monotone(xs, means, c.slopes, wb, we);
  c.xs = std::move(xs);
  c.means = std::move(means);
  c.window_begin = wb;
  c.window_end = we;
  c.increasing = increasing;
  return c;
}

CalibrationCurve build_curve(const ParamFamily& fam, const Operator& m,
                             std::span<const double> grid) {
  std::vector<double> xs(grid.begin(), grid.end());
  std::vector<double> means(xs.size());
  std::vector<double> slopes(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const SensitivityReport rep = assess_observable(fam, xs[k], m);
    means[k] = rep.mean;
    slopes[k] = rep.slope;
  }
  return make_curve(std::move(xs), std::move(means), std::move(slopes));
}

Inversion invert_mean(const CalibrationCurve& curve, double observed_mean) {
  const std::size_t wb = curve.window_begin;
  const std::size_t we = curve.window_end;
  const double y_first = curve.means[wb];
  const double y_last = curve.means[we];
  const double y_min = std::min(y_first, y_last);
  const double y_max = std::max(y_first, y_last);

  if (std::isnan(observed_mean)) throw ContractViolation("invert_mean: observed mean is NaN");
  const double x_at_min = curve.increasing ? curve.xs[wb] : curve.xs[we];
  const double x_at_max = curve.increasing ? curve.xs[we] : curve.xs[wb];
  if (observed_mean < y_min) return {x_at_min, true};
  if (observed_mean > y_max) return {x_at_max, true};

  // Segment k with observed between means[k] and means[k+1].
  std::size_t lo = wb;
  std::size_t hi = we;
  const double dir = curve.increasing ? 1.0 : -1.0;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (dir * (curve.means[mid] - observed_mean) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (curve.means[lo] == observed_mean) return {curve.xs[lo], false};
  if (curve.means[hi] == observed_mean) return {curve.xs[hi], false};

  const HermiteSegment seg{curve.xs[lo],     curve.xs[hi] - curve.xs[lo], curve.means[lo],
                           curve.means[hi],  curve.slopes[lo],            curve.slopes[hi]};
  const double t = solve_segment(seg, observed_mean);
  return {seg.x0 + t * seg.h, false};
}

TrialRun run_trials(const PhaseFamilySpec& spec, double phi_true, const TrialConfig& config) {
  if (config.nu == 0 || config.repeats < 2) {
    throw ContractViolation("run_trials: need nu >= 1 and repeats >= 2");
  }
  if (config.curve_points < static_cast<int>(kMinWindowPoints)) {
    throw ContractViolation("run_trials: curve needs at least 5 points");
  }
  const ParamFamily fam = dephasing_family(spec);
  const double phi_exp = config.phi_exp.value_or(optimal_calibration(phi_true));
  const Operator m = quadrature(phi_exp, fam.dim());

  // Monotone half period of the cosine mean, on the branch holding phi_true.
  double center = phi_exp + 0.5 * pi;
  center += 2.0 * pi * std::round((phi_true - center) / (2.0 * pi));
  const std::vector<double> grid = phase_window(center, fam.domain(), config.curve_points);
  const CalibrationCurve curve = build_curve(fam, m, grid);

  const DensityMatrix rho = fam.state_at(phi_true);
  const OutcomeSampler sampler(MeasurementModel(m), rho);

  TrialRun run;
  run.trials.resize(static_cast<std::size_t>(config.repeats));
  for (int k = 0; k < config.repeats; ++k) {
    std::mt19937_64 rng = make_stream(config.seed, static_cast<std::uint64_t>(k));
    TrialReport& t = run.trials[static_cast<std::size_t>(k)];
    t.repeat = k;
    t.nu = config.nu;
    t.sample_mean = sampler.sample_mean(config.nu, rng);
    const Inversion inv = invert_mean(curve, t.sample_mean);
    t.estimate = inv.x;
    t.out_of_range = inv.out_of_range;
  }

  TrialSummary& s = run.summary;
  s.nu = config.nu;
  s.repeats = config.repeats;
  s.seed = config.seed;
  s.phi_true = phi_true;
  s.phi_exp = phi_exp;
  double sum = 0.0;
  for (const TrialReport& t : run.trials) {
    sum += t.estimate;
    if (t.out_of_range) ++s.out_of_range_count;
  }
  s.mean_estimate = sum / config.repeats;
  double ss = 0.0;
  for (const TrialReport& t : run.trials) ss += (t.estimate - s.mean_estimate) * (t.estimate - s.mean_estimate);
  s.empirical_variance = ss / (config.repeats - 1);
  s.sensitivity = assess_observable(rho, fam.derivative_at(phi_true), m);
  s.predicted_variance = s.sensitivity.nsr * s.sensitivity.nsr / static_cast<double>(config.nu);

  const double curvature =
      (dephasing_second_derivative(spec, phi_true).matrix() * m.matrix()).trace().real();
  const double noise = std::sqrt(s.sensitivity.variance / static_cast<double>(config.nu));
  const double slope2 = s.sensitivity.slope * s.sensitivity.slope;
  s.small_noise_ratio = std::abs(curvature) > 1e-12 && slope2 > 0.0
                            ? noise * std::abs(curvature) / (2.0 * slope2)
                            : 0.0;
  return run;
}

AdaptiveRun adaptive_calibrate(const PhaseFamilySpec& spec, double phi_true_hidden,
                               std::uint64_t batch, int rounds, std::uint64_t seed,
                               int curve_points) {
  if (batch == 0 || rounds < 1) throw ContractViolation("adaptive_calibrate: need batch >= 1 and rounds >= 1");
  const ParamFamily fam = dephasing_family(spec);
  const DensityMatrix rho = fam.state_at(phi_true_hidden);
  const Operator drho = fam.derivative_at(phi_true_hidden);
  const int dim = fam.dim();

  AdaptiveRun run;
  run.optimal_fisher =
      assess_observable(rho, drho, quadrature(optimal_calibration(phi_true_hidden), dim)).fisher;

  double phi_exp = fam.domain().midpoint() - 0.5 * pi;
  for (int k = 0; k < rounds; ++k) {
    const Operator m = quadrature(phi_exp, dim);
    AdaptiveRound r;
    r.round = k;
    r.phi_exp = phi_exp;
    r.fisher = assess_observable(rho, drho, m).fisher;

    std::vector<double> grid;
    CalibrationCurve curve;
    try {
      grid = phase_window(phi_exp + 0.5 * pi, fam.domain(), curve_points);
      curve = build_curve(fam, m, grid);
    } catch (const Error&) {
      run.aborted = true;
      run.abort_round = k;
      break;
    }
    const OutcomeSampler sampler(MeasurementModel(m), rho);
    std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(k));
    const Inversion inv = invert_mean(curve, sampler.sample_mean(batch, rng));
    r.estimate = inv.x;
    r.out_of_range = inv.out_of_range;
    run.rounds.push_back(r);
    if (!fam.domain().contains(r.estimate)) {
      run.aborted = true;
      run.abort_round = k;
      break;
    }
    phi_exp = r.estimate - 0.5 * pi;
  }
  run.final_phi_exp = phi_exp;
  run.final_fisher = assess_observable(rho, drho, quadrature(phi_exp, dim)).fisher;
  return run;
}

}  // namespace qnsr
