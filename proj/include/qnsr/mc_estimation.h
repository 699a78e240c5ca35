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

// Monte Carlo check of mean-inversion estimation.
//
// A batch of nu projective measurements of M is averaged and the average is
// mapped back to a parameter value through the tabulated calibration curve
// x -> <M>_x. For large nu the estimator variance approaches nsr^2 / nu.

#ifndef QNSR_MC_ESTIMATION_H_
#define QNSR_MC_ESTIMATION_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qnsr/dephasing_study.h"
#include "qnsr/estimation_core.h"
#include "qnsr/operator_core.h"

namespace qnsr {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Independent generator for stream `stream` of a run seeded with `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

/// Eigendecomposition of an observable used for Born-rule sampling.
class MeasurementModel {
 public:
  explicit MeasurementModel(const Operator& m);

  const RealVector& eigenvalues() const { return eigenvalues_; }
  int dim() const { return static_cast<int>(eigenvalues_.size()); }

  /// p_k = <e_k|rho|e_k>. Entries below -1e-12 raise
  /// NumericalConsistencyError; the rest are clamped to >= 0 and the vector
  /// is checked to sum to 1 within 1e-10.
  std::vector<double> probabilities(const DensityMatrix& rho) const;

 private:
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

/// Inverse-CDF sampler over the eigenvalues of a MeasurementModel.
class OutcomeSampler {
 public:
  OutcomeSampler(const MeasurementModel& model, const DensityMatrix& rho);

  double draw(std::mt19937_64& rng) const;
  /// Mean of `nu` draws.
  double sample_mean(std::uint64_t nu, std::mt19937_64& rng) const;

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

/// nu i.i.d. outcomes of measuring m on rho; deterministic for fixed seed.
std::vector<double> sample_outcomes(const DensityMatrix& rho, const Operator& m, std::uint64_t nu,
                                    std::uint64_t seed);

/// Tabulated x -> <M>_x together with its exact slope, and the index range
/// [window_begin, window_end] (inclusive) on which it is strictly monotone.
struct CalibrationCurve {
  std::vector<double> xs;
  std::vector<double> means;
  std::vector<double> slopes;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  bool increasing = true;

  double window_lo() const { return xs[window_begin]; }
  double window_hi() const { return xs[window_end]; }
};

/// Builds a curve from samples. Without slopes the Fritsch-Carlson
/// estimates are used. Throws NonInvertibleCurveError when the largest
/// monotone run through the midpoint has fewer than 5 points.
CalibrationCurve make_curve(std::vector<double> xs, std::vector<double> means,
                            std::optional<std::vector<double>> slopes = std::nullopt);

/// Tabulates <m>_x and Tr[(d rho/dx) m] over `grid`.
CalibrationCurve build_curve(const ParamFamily& fam, const Operator& m,
                             std::span<const double> grid);

struct Inversion {
  double x = 0.0;
  bool out_of_range = false;
};

/// Inverts the monotone cubic Hermite interpolant of the curve on its
/// window. Observed means beyond the window range are clamped to the nearest
/// window edge and flagged.
Inversion invert_mean(const CalibrationCurve& curve, double observed_mean);

struct TrialConfig {
  std::uint64_t nu = 100000;
  int repeats = 200;
  std::uint64_t seed = kDefaultSeed;
  /// Quadrature angle; defaults to optimal_calibration(phi_true).
  std::optional<double> phi_exp;
  int curve_points = 401;
};

struct TrialReport {
  int repeat = 0;
  std::uint64_t nu = 0;
  double sample_mean = 0.0;
  double estimate = 0.0;
  bool out_of_range = false;
};

struct TrialSummary {
  std::uint64_t nu = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
  double phi_true = 0.0;
  double phi_exp = 0.0;
  double mean_estimate = 0.0;
  double empirical_variance = 0.0;  // unbiased, across repeats
  double predicted_variance = 0.0;  // nsr^2 / nu
  SensitivityReport sensitivity;
  int out_of_range_count = 0;
  /// sqrt(var / nu) divided by 2 slope^2 / |d^2<M>/dphi^2|; the expansion of
  /// the estimator holds when this is << 1. Zero when the curvature vanishes.
  double small_noise_ratio = 0.0;
};

struct TrialRun {
  std::vector<TrialReport> trials;
  TrialSummary summary;
};

/// Repeats the measure-average-invert protocol at phi_true. Repeat k draws
/// from make_stream(seed, k), so results do not depend on evaluation order.
TrialRun run_trials(const PhaseFamilySpec& spec, double phi_true, const TrialConfig& config);

struct AdaptiveRound {
  int round = 0;
  double phi_exp = 0.0;   // calibration used for this round's batch
  double fisher = 0.0;    // information of quadrature(phi_exp) at phi_true
  double estimate = 0.0;
  bool out_of_range = false;
};

struct AdaptiveRun {
  std::vector<AdaptiveRound> rounds;
  double final_phi_exp = 0.0;
  double final_fisher = 0.0;
  double optimal_fisher = 0.0;
  bool aborted = false;
  int abort_round = -1;
};

/// Starts at phi_exp = (domain midpoint) - pi/2 and after every batch moves
/// the calibration to (estimate - pi/2). A round whose inversion window
/// would leave the phase domain aborts the run.
AdaptiveRun adaptive_calibrate(const PhaseFamilySpec& spec, double phi_true_hidden,
                               std::uint64_t batch, int rounds, std::uint64_t seed,
                               int curve_points = 401);

}  // namespace qnsr

#endif  // QNSR_MC_ESTIMATION_H_
