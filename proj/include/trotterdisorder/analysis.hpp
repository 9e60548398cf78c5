// Copyright 2026 The trotterdisorder Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "trotterdisorder/gates.hpp"
#include "trotterdisorder/pauli.hpp"

namespace td {

// ---------------------------------------------------------------------------
// Spectra

struct Spectrum {
  /// Angular frequencies in units of g, ascending, zero at index size()/2.
  std::vector<double> omega;
  std::vector<Complex> amplitude;
  double window_sigma = 0.0;

  std::size_t size() const { return omega.size(); }
  std::vector<double> magnitude() const;
};

// Where the Gaussian window peaks. A middle-anchored window turns an
// exponential envelope into a pure shift of the window, so damping lowers
// the line without widening it; anchor at the start to see decay as width.
enum class WindowAnchor { Middle, Start };

std::string to_string(WindowAnchor a);
WindowAnchor window_anchor_from_string(const std::string &s);

/**
 * dt * sum_k (v_k - mean) w_k e^{-i omega t_k} with a Gaussian window w
 * centred on the middle (or first sample) of the record. `window_sigma` <= 0
 * selects a sixth of the record length. `padding` > 1 appends zeros to
 * refine the grid.
 */
Spectrum windowed_spectrum(std::span<const double> values, double dt, double window_sigma = 0.0, int padding = 1,
                           WindowAnchor anchor = WindowAnchor::Middle);

struct SeriesAverage {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

/// Pointwise mean and standard error of equally long series.
SeriesAverage average_series(const std::vector<std::vector<double>> &runs);

struct SpectrumAverage {
  Spectrum mean;
  /// Standard error of the complex amplitude, sqrt(sum |a - mean|^2 / (k (k-1))).
  std::vector<double> standard_error;
};

SpectrumAverage ensemble_average(const std::vector<Spectrum> &runs);

/// a - b on a common grid.
Spectrum spectral_difference(const Spectrum &a, const Spectrum &b);

struct Peak {
  double omega = 0.0;
  double height = 0.0;
  /// Full width at half maximum from linear interpolation of |A|.
  double fwhm = 0.0;
  int index = 0;
};

/// Largest |A| with omega in [omega_lo, omega_hi], plus its width.
Peak dominant_peak(const Spectrum &spectrum, double omega_lo = 1e-9, double omega_hi = 1e300);

std::string to_csv(const Spectrum &spectrum);

// ---------------------------------------------------------------------------
// Fidelities

struct FidelityReport {
  double delta_phi = 0.0;
  double f_min = 1.0;
  double bures_angle = 0.0;
  bool averaged = false;
};

/// Worst-case fidelity cos(dphi) of an over-rotated gate; needs |dphi| <= pi/2.
FidelityReport fidelity_from_overrotation(double delta_phi);

/// 1 - s^2/2 for angles of standard deviation s.
double averaged_fidelity(double std_dev);
FidelityReport averaged_fidelity_report(double std_dev);
/// Inverse of averaged_fidelity: sqrt(2 (1 - f)).
double std_dev_from_averaged_fidelity(double avg_fidelity);

struct MinFidelityResult {
  /// |<psi|e^{i dphi A}|psi>| at psi = (|l_max> + |l_min>)/sqrt(2).
  double analytic = 1.0;
  /// Smallest value over the random states.
  double sampled = 1.0;
  double minimum = 1.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// False when the generator spectrum does not reach both -1 and +1; the
  /// values above are then specific to this generator and exceed cos(dphi).
  bool spans_unit_interval = false;
};

/// Minimizes the overlap of psi with e^{i dphi A} psi over the analytic
/// minimizer and `samples` Haar-random states.
MinFidelityResult min_fidelity_bruteforce(const Gate &gate, double delta_phi, int samples = 10000,
                                          std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Gate budget

struct GateBudget {
  double avg_fidelity = 0.0;
  int gates_per_step = 1;
  bool unbounded = false;
  /// Worst-case bound on M n, 1/sqrt(2 (1 - F)).
  double total_gates_bound = 0.0;
  /// floor(bound / M).
  long long max_steps = 0;
};

GateBudget gate_budget(double avg_fidelity, int gates_per_step = 1);

nlohmann::json to_json(const FidelityReport &report);
nlohmann::json to_json(const GateBudget &budget);

}  // namespace td
