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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trotterdisorder/analysis.hpp"
#include "trotterdisorder/evolve.hpp"
#include "trotterdisorder/gates.hpp"

namespace td {

extern const char *const kVersion;

/**
 * One simulation setup. JSON schema (all fields optional, defaults shown):
 *
 *   {
 *     "name": "experiment",
 *     "model": {"U": 1, "t1": 1, "t2": 1},
 *     "variant": "cz_chain",
 *     "tau": 1000, "dt": 0.05,
 *     "noise": {"std_dev": 0, "mode": "per_step_iid", "seed": 1},
 *     "ensemble_size": 1,
 *     "initial_state": [2, 1],
 *     "observables": ["n1", "sigma2"],
 *     "positions": [0, 1, 2, 1],
 *     "backends": ["faulty_circuit", "effective_hamiltonian", "ideal_exact"],
 *     "window": {"sigma": 0, "padding": 4, "anchor": "middle"},
 *     "workers": 0
 *   }
 *
 * dt is g tau / n. window.sigma 0 means tau/6; workers 0 means TD_WORKERS or
 * the hardware concurrency.
 */
struct ExperimentConfig {
  std::string name = "experiment";
  ModelParams model;
  Variant variant = Variant::CzChain;
  double tau = 1000.0;
  double dt = 0.05;
  NoiseModel noise{0.0, TemporalMode::PerStepIid, 1};
  int ensemble_size = 1;
  std::vector<int> initial_state{2, 1};
  bool observe_n1 = true;
  bool observe_sigma2 = true;
  std::vector<double> positions = default_positions();
  std::vector<Backend> backends{Backend::FaultyCircuit, Backend::EffectiveHamiltonian, Backend::IdealExact};
  double window_sigma = 0.0;
  int padding = 4;
  WindowAnchor window_anchor = WindowAnchor::Middle;
  int workers = 0;

  bool has_backend(Backend b) const;
  /// Rounded tau / dt; validate() checks that the ratio is integral.
  int n_steps() const;
};

/// Throws UsageError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ExperimentConfig &config);

struct Diagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  nlohmann::json to_json() const;
};

Diagnostics validate(const ExperimentConfig &config);

/// Worker count: explicit value if positive, else TD_WORKERS, else hardware.
int resolve_workers(int requested);

struct BackendResult {
  SeriesAverage n1;
  SeriesAverage sigma2;
  std::optional<SpectrumAverage> spectrum;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<double> times;
  std::map<Backend, BackendResult> backends;
  /// Ensemble mean of the per-run difference faulty - effective.
  std::optional<SpectrumAverage> difference;
  nlohmann::json summary;
};

/// Runs the ensemble; results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig &config);

/// Writes manifest.json, trajectories.csv, spectrum.csv and summary.json.
void write_results(const ExperimentResult &result, const std::filesystem::path &dir);

/// Named reproduction setups: fig4, fig6, fig8. Each yields one config per
/// panel or curve.
std::vector<std::string> preset_names();
std::vector<ExperimentConfig> preset(const std::string &name);

}  // namespace td
