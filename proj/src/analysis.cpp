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

#include "trotterdisorder/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>

#include "trotterdisorder/errors.hpp"

namespace td {

namespace {

using std::numbers::pi;

// FFTW planning is not thread-safe; execution is.
std::mutex &fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_grids(const Spectrum &a, const Spectrum &b) {
  if (a.size() != b.size()) throw UsageError("spectra have different lengths");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.omega[i] - b.omega[i]) > 1e-12 * (1.0 + std::abs(a.omega[i]))) {
      throw UsageError("spectra are on different frequency grids");
    }
  }
}

// Crossing of `level` between samples i and j by linear interpolation.
double crossing(const std::vector<double> &x, const std::vector<double> &y, std::size_t i, std::size_t j,
                double level) {
  const double t = (level - y[i]) / (y[j] - y[i]);
  return x[i] + t * (x[j] - x[i]);
}

}  // namespace

std::vector<double> Spectrum::magnitude() const {
  std::vector<double> out(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), out.begin(), [](Complex a) { return std::abs(a); });
  return out;
}

std::string to_string(WindowAnchor a) { return a == WindowAnchor::Start ? "start" : "middle"; }

WindowAnchor window_anchor_from_string(const std::string &s) {
  if (s == "middle") return WindowAnchor::Middle;
  if (s == "start") return WindowAnchor::Start;
  throw UsageError("unknown window anchor '" + s + "' (expected middle or start)");
}

Spectrum windowed_spectrum(std::span<const double> values, double dt, double window_sigma, int padding,
                           WindowAnchor anchor) {
  const std::size_t n = values.size();
  if (n < 8) throw UsageError("spectrum needs at least 8 time slices");
  if (!(dt > 0.0)) throw UsageError("time step must be positive");
  if (padding < 1) throw UsageError("padding factor must be at least 1");
  const double length = dt * static_cast<double>(n - 1);
  const double sigma = window_sigma > 0.0 ? window_sigma : length / 6.0;

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  const double centre = anchor == WindowAnchor::Start ? 0.0 : 0.5 * length;
  const std::size_t total = n * static_cast<std::size_t>(padding);

  fftw_complex *buf = fftw_alloc_complex(total);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(total), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < total; ++k) {
    double x = 0.0;
    if (k < n) {
      const double t = dt * static_cast<double>(k) - centre;
      x = (values[k] - mean) * std::exp(-0.5 * t * t / (sigma * sigma));
    }
    buf[k][0] = x;
    buf[k][1] = 0.0;
  }
  fftw_execute(plan);

  Spectrum s;
  s.window_sigma = sigma;
  s.omega.resize(total);
  s.amplitude.resize(total);
  // fftshift: output index i holds FFT bin (i + total/2) mod total.
  const std::size_t half = total / 2;
  const double domega = 2.0 * pi / (static_cast<double>(total) * dt);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t bin = (i + total - half) % total;
    s.omega[i] = domega * (static_cast<double>(i) - static_cast<double>(half));
    s.amplitude[i] = dt * Complex(buf[bin][0], buf[bin][1]);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return s;
}

SeriesAverage average_series(const std::vector<std::vector<double>> &runs) {
  if (runs.empty()) throw UsageError("nothing to average");
  const std::size_t len = runs.front().size();
  SeriesAverage avg{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (const auto &r : runs) {
    if (r.size() != len) throw UsageError("series have different lengths");
    for (std::size_t i = 0; i < len; ++i) avg.mean[i] += r[i];
  }
  const double k = static_cast<double>(runs.size());
  for (double &v : avg.mean) v /= k;
  if (runs.size() > 1) {
    for (const auto &r : runs) {
      for (std::size_t i = 0; i < len; ++i) avg.standard_error[i] += (r[i] - avg.mean[i]) * (r[i] - avg.mean[i]);
    }
    for (double &v : avg.standard_error) v = std::sqrt(v / (k * (k - 1)));
  }
  return avg;
}

SpectrumAverage ensemble_average(const std::vector<Spectrum> &runs) {
  if (runs.empty()) throw UsageError("nothing to average");
  for (const auto &r : runs) check_grids(runs.front(), r);
  const std::size_t len = runs.front().size();
  SpectrumAverage avg;
  avg.mean = runs.front();
  std::fill(avg.mean.amplitude.begin(), avg.mean.amplitude.end(), Complex(0.0));
  for (const auto &r : runs) {
    for (std::size_t i = 0; i < len; ++i) avg.mean.amplitude[i] += r.amplitude[i];
  }
  const double k = static_cast<double>(runs.size());
  for (auto &a : avg.mean.amplitude) a /= k;
  avg.standard_error.assign(len, 0.0);
  if (runs.size() > 1) {
    for (const auto &r : runs) {
      for (std::size_t i = 0; i < len; ++i) avg.standard_error[i] += std::norm(r.amplitude[i] - avg.mean.amplitude[i]);
    }
    for (double &v : avg.standard_error) v = std::sqrt(v / (k * (k - 1)));
  }
  return avg;
}

Spectrum spectral_difference(const Spectrum &a, const Spectrum &b) {
  check_grids(a, b);
  Spectrum d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d.amplitude[i] -= b.amplitude[i];
  return d;
}

Peak dominant_peak(const Spectrum &spectrum, double omega_lo, double omega_hi) {
  const std::vector<double> mag = spectrum.magnitude();
  Peak p;
  p.index = -1;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double w = spectrum.omega[i];
    if (w < omega_lo || w > omega_hi) continue;
    if (p.index < 0 || mag[i] > p.height) {
      p.index = static_cast<int>(i);
      p.height = mag[i];
    }
  }
  if (p.index < 0) throw UsageError("no frequencies inside the peak search window");
  const auto i0 = static_cast<std::size_t>(p.index);

  // Parabolic refinement of the peak position.
  p.omega = spectrum.omega[i0];
  if (i0 > 0 && i0 + 1 < mag.size()) {
    const double denom = mag[i0 - 1] - 2 * mag[i0] + mag[i0 + 1];
    if (denom < 0) {
      const double shift = 0.5 * (mag[i0 - 1] - mag[i0 + 1]) / denom;
      p.omega += shift * (spectrum.omega[i0 + 1] - spectrum.omega[i0]);
    }
  }

  const double half = 0.5 * p.height;
  std::size_t lo = i0;
  while (lo > 0 && mag[lo - 1] > half) --lo;
  std::size_t hi = i0;
  while (hi + 1 < mag.size() && mag[hi + 1] > half) ++hi;
  if (lo == 0 || hi + 1 == mag.size()) {
    p.fwhm = std::numeric_limits<double>::infinity();
    return p;
  }
  const double left = crossing(spectrum.omega, mag, lo - 1, lo, half);
  const double right = crossing(spectrum.omega, mag, hi, hi + 1, half);
  p.fwhm = right - left;
  return p;
}

std::string to_csv(const Spectrum &spectrum) {
  std::string out = "omega,re,im,abs\n";
  char line[128];
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const Complex a = spectrum.amplitude[i];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", spectrum.omega[i], a.real(), a.imag(), std::abs(a));
    out += line;
  }
  return out;
}

FidelityReport fidelity_from_overrotation(double delta_phi) {
  if (!(std::abs(delta_phi) <= pi / 2)) throw UsageError("over-rotation must satisfy |dphi| <= pi/2");
  return {delta_phi, std::cos(delta_phi), std::abs(delta_phi), false};
}

double averaged_fidelity(double std_dev) {
  if (!(std_dev >= 0.0)) throw UsageError("standard deviation must be non-negative");
  return 1.0 - 0.5 * std_dev * std_dev;
}

FidelityReport averaged_fidelity_report(double std_dev) {
  const double f = averaged_fidelity(std_dev);
  return {std_dev, f, std::acos(std::clamp(f, -1.0, 1.0)), true};
}

double std_dev_from_averaged_fidelity(double avg_fidelity) {
  if (!(avg_fidelity > 0.0 && avg_fidelity <= 1.0)) throw UsageError("averaged fidelity must lie in (0, 1]");
  return std::sqrt(2.0 * (1.0 - avg_fidelity));
}

MinFidelityResult min_fidelity_bruteforce(const Gate &gate, double delta_phi, int samples, std::uint64_t seed) {
  if (samples < 0) throw UsageError("sample count must be non-negative");
  const Eigen::MatrixXcd a = to_dense(gate.generator, gate.n_qubits()).matrix;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success) throw InternalError("generator eigendecomposition failed");
  const Eigen::MatrixXcd u = exp_hermitian(a, delta_phi);

  MinFidelityResult r;
  const auto dim = a.rows();
  r.lambda_min = es.eigenvalues()(0);
  r.lambda_max = es.eigenvalues()(dim - 1);
  r.spans_unit_interval = std::abs(r.lambda_min + 1.0) < 1e-9 && std::abs(r.lambda_max - 1.0) < 1e-9;

  const Eigen::VectorXcd psi_min = (es.eigenvectors().col(0) + es.eigenvectors().col(dim - 1)) / std::sqrt(2.0);
  r.analytic = std::abs(psi_min.dot(u * psi_min));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  r.sampled = 1.0;
  Eigen::VectorXcd psi(dim);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < dim; ++i) psi(i) = Complex(normal(rng), normal(rng));
    psi.normalize();
    r.sampled = std::min(r.sampled, std::abs(psi.dot(u * psi)));
  }
  r.minimum = std::min(r.analytic, r.sampled);
  return r;
}

GateBudget gate_budget(double avg_fidelity, int gates_per_step) {
  if (gates_per_step < 1) throw UsageError("gates per step must be positive");
  if (!(avg_fidelity > 0.0 && avg_fidelity <= 1.0)) throw UsageError("averaged fidelity must lie in (0, 1]");
  GateBudget b;
  b.avg_fidelity = avg_fidelity;
  b.gates_per_step = gates_per_step;
  if (avg_fidelity == 1.0) {
    b.unbounded = true;
    b.total_gates_bound = std::numeric_limits<double>::infinity();
    b.max_steps = std::numeric_limits<long long>::max();
    return b;
  }
  b.total_gates_bound = 1.0 / std::sqrt(2.0 * (1.0 - avg_fidelity));
  b.max_steps = static_cast<long long>(std::floor(b.total_gates_bound / gates_per_step));
  return b;
}

nlohmann::json to_json(const FidelityReport &report) {
  return {{"delta_phi", report.delta_phi},
          {"f_min", report.f_min},
          {"bures_angle", report.bures_angle},
          {"averaged", report.averaged}};
}

nlohmann::json to_json(const GateBudget &budget) {
  nlohmann::json j = {{"avg_fidelity", budget.avg_fidelity},
                      {"gates_per_step", budget.gates_per_step},
                      {"unbounded", budget.unbounded}};
  if (budget.unbounded) {
    j["total_gates_bound"] = nullptr;
    j["max_steps"] = nullptr;
  } else {
    j["total_gates_bound"] = budget.total_gates_bound;
    j["max_steps"] = budget.max_steps;
  }
  return j;
}

}  // namespace td
