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

#include "trotterdisorder/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "trotterdisorder/effective.hpp"
#include "trotterdisorder/errors.hpp"

namespace td {

const char *const kVersion = "0.3.0";

namespace {

using nlohmann::json;

// Lowest angular frequency searched for the dominant peak; keeps the
// residual of the mean subtraction out of the search.
constexpr double kPeakSearchFloor = 0.05;

template <typename T>
T field(const json &j, const char *key, const std::string &path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw UsageError("config field '" + path + key + "' has the wrong type");
  }
}

void reject_unknown(const json &j, std::initializer_list<const char *> known, const std::string &path) {
  if (!j.is_object()) throw UsageError("config field '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
  for (const auto &item : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char *k) { return item.key() == k; })) {
      throw UsageError("unknown config field '" + path + item.key() + "'");
    }
  }
}

// Pointwise running mean and M2 (Welford), fed in run order.
template <typename T>
class Accumulator {
 public:
  void add(const std::vector<T> &x) {
    if (count_ == 0) {
      mean_.assign(x.size(), T{});
      m2_.assign(x.size(), 0.0);
    } else if (x.size() != mean_.size()) {
      throw InternalError("accumulator length mismatch");
    }
    ++count_;
    const double k = static_cast<double>(count_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const T delta = x[i] - mean_[i];
      mean_[i] += delta / k;
      m2_[i] += std::real(std::conj(delta) * (x[i] - mean_[i]));
    }
  }

  int count() const { return count_; }
  const std::vector<T> &mean() const { return mean_; }
  std::vector<double> standard_error() const {
    std::vector<double> se(m2_.size(), 0.0);
    if (count_ < 2) return se;
    const double k = static_cast<double>(count_);
    for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt(std::max(m2_[i], 0.0) / (k * (k - 1)));
    return se;
  }

 private:
  int count_ = 0;
  std::vector<T> mean_;
  std::vector<double> m2_;
};

struct SeriesAcc {
  Accumulator<double> n1, sigma2;
  Accumulator<Complex> spectrum;
  std::vector<double> omega;
  double window_sigma = 0.0;
};

struct RunOutput {
  std::map<Backend, Trajectory> trajectories;
  std::map<Backend, Spectrum> spectra;
  std::optional<Spectrum> difference;
};

SeriesAverage finish(const Accumulator<double> &acc) {
  if (acc.count() == 0) return {};
  return {acc.mean(), acc.standard_error()};
}

SpectrumAverage finish(const Accumulator<Complex> &acc, const std::vector<double> &omega, double sigma) {
  SpectrumAverage out;
  out.mean.omega = omega;
  out.mean.amplitude = acc.mean();
  out.mean.window_sigma = sigma;
  out.standard_error = acc.standard_error();
  return out;
}

double tail_mean(const std::vector<double> &v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t start = v.size() - std::max<std::size_t>(1, v.size() / 4);
  double s = 0;
  for (std::size_t i = start; i < v.size(); ++i) s += v[i];
  return s / static_cast<double>(v.size() - start);
}

json peak_json(const Peak &p) {
  return {{"omega", p.omega}, {"height", p.height}, {"fwhm", std::isfinite(p.fwhm) ? json(p.fwhm) : json(nullptr)}};
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string format_row(const std::vector<double> &values) {
  std::string line;
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) line += ',';
    line += buf;
  }
  line += '\n';
  return line;
}

}  // namespace

bool ExperimentConfig::has_backend(Backend b) const {
  return std::find(backends.begin(), backends.end(), b) != backends.end();
}

int ExperimentConfig::n_steps() const { return static_cast<int>(std::llround(tau / dt)); }

ExperimentConfig config_from_json(const json &j) {
  reject_unknown(j,
                 {"name", "model", "variant", "tau", "dt", "noise", "ensemble_size", "initial_state", "observables",
                  "positions", "backends", "window", "workers"},
                 "");
  ExperimentConfig c;
  c.name = field<std::string>(j, "name", "", c.name);
  if (j.contains("model")) {
    const json &m = j.at("model");
    reject_unknown(m, {"U", "t1", "t2"}, "model.");
    c.model.U = field<double>(m, "U", "model.", c.model.U);
    c.model.t1 = field<double>(m, "t1", "model.", c.model.t1);
    c.model.t2 = field<double>(m, "t2", "model.", c.model.t2);
  }
  if (j.contains("variant")) {
    try {
      c.variant = variant_from_string(field<std::string>(j, "variant", "", ""));
    } catch (const UsageError &e) {
      throw UsageError(std::string("config field 'variant': ") + e.what());
    }
  }
  c.tau = field<double>(j, "tau", "", c.tau);
  c.dt = field<double>(j, "dt", "", c.dt);
  if (j.contains("noise")) {
    const json &n = j.at("noise");
    reject_unknown(n, {"std_dev", "mode", "seed"}, "noise.");
    c.noise.std_dev = field<double>(n, "std_dev", "noise.", c.noise.std_dev);
    if (n.contains("mode")) {
      try {
        c.noise.mode = temporal_mode_from_string(field<std::string>(n, "mode", "noise.", ""));
      } catch (const UsageError &e) {
        throw UsageError(std::string("config field 'noise.mode': ") + e.what());
      }
    }
    c.noise.seed = field<std::uint64_t>(n, "seed", "noise.", c.noise.seed);
  }
  c.ensemble_size = field<int>(j, "ensemble_size", "", c.ensemble_size);
  c.initial_state = field<std::vector<int>>(j, "initial_state", "", c.initial_state);
  if (j.contains("observables")) {
    c.observe_n1 = c.observe_sigma2 = false;
    for (const auto &o : field<std::vector<std::string>>(j, "observables", "", {})) {
      if (o == "n1") {
        c.observe_n1 = true;
      } else if (o == "sigma2") {
        c.observe_sigma2 = true;
      } else {
        throw UsageError("config field 'observables': unknown observable '" + o + "'");
      }
    }
  }
  c.positions = field<std::vector<double>>(j, "positions", "", c.positions);
  if (j.contains("backends")) {
    c.backends.clear();
    for (const auto &b : field<std::vector<std::string>>(j, "backends", "", {})) {
      try {
        c.backends.push_back(backend_from_string(b));
      } catch (const UsageError &e) {
        throw UsageError(std::string("config field 'backends': ") + e.what());
      }
    }
  }
  if (j.contains("window")) {
    const json &w = j.at("window");
    reject_unknown(w, {"sigma", "padding", "anchor"}, "window.");
    c.window_sigma = field<double>(w, "sigma", "window.", c.window_sigma);
    c.padding = field<int>(w, "padding", "window.", c.padding);
    const std::string anchor = field<std::string>(w, "anchor", "window.", to_string(c.window_anchor));
    try {
      c.window_anchor = window_anchor_from_string(anchor);
    } catch (const UsageError &e) {
      throw UsageError(std::string("config field 'window.anchor': ") + e.what());
    }
  }
  c.workers = field<int>(j, "workers", "", c.workers);
  return c;
}

json to_json(const ExperimentConfig &c) {
  json observables = json::array();
  if (c.observe_n1) observables.push_back("n1");
  if (c.observe_sigma2) observables.push_back("sigma2");
  json backends = json::array();
  for (Backend b : c.backends) backends.push_back(to_string(b));
  return {{"name", c.name},
          {"model", {{"U", c.model.U}, {"t1", c.model.t1}, {"t2", c.model.t2}}},
          {"variant", to_string(c.variant)},
          {"tau", c.tau},
          {"dt", c.dt},
          {"noise", {{"std_dev", c.noise.std_dev}, {"mode", to_string(c.noise.mode)}, {"seed", c.noise.seed}}},
          {"ensemble_size", c.ensemble_size},
          {"initial_state", c.initial_state},
          {"observables", observables},
          {"positions", c.positions},
          {"backends", backends},
          {"window", {{"sigma", c.window_sigma}, {"padding", c.padding}, {"anchor", to_string(c.window_anchor)}}},
          {"workers", c.workers}};
}

json Diagnostics::to_json() const { return {{"ok", ok()}, {"errors", errors}, {"warnings", warnings}}; }

Diagnostics validate(const ExperimentConfig &c) {
  Diagnostics d;
  auto err = [&](const std::string &s) { d.errors.push_back(s); };
  if (!(c.dt > 0)) err("dt: step size g tau/n must be positive");
  if (!(c.tau > 0)) err("tau: total time must be positive");
  if (c.dt > 0 && c.tau > 0) {
    const double ratio = c.tau / c.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      err("tau/dt = " + std::to_string(ratio) + " is not an integer step count");
    } else if (std::round(ratio) < 1 || ratio > 1e8) {
      err("tau/dt must give between 1 and 1e8 steps");
    }
  }
  if (!(c.noise.std_dev >= 0)) err("noise.std_dev must be non-negative");
  if (c.ensemble_size < 1) err("ensemble_size must be at least 1");
  if (c.padding < 1) err("window.padding must be at least 1");
  if (c.window_sigma < 0) err("window.sigma must be non-negative");
  if (c.workers < 0) err("workers must be non-negative");
  if (c.positions.size() != 4) err("positions: exactly 4 coordinates required");
  if (c.backends.empty()) err("backends: at least one backend required");
  if (!c.observe_n1 && !c.observe_sigma2) err("observables: choose n1, sigma2 or both");
  std::set<int> seen;
  for (int m : c.initial_state) {
    if (m < 1 || m > 4) err("initial_state: mode " + std::to_string(m) + " outside 1..4");
    if (!seen.insert(m).second) err("initial_state: mode " + std::to_string(m) + " created twice");
  }
  if (c.observe_sigma2 && c.initial_state.empty()) err("observables: sigma2 needs at least one particle");
  if (c.observe_n1 && c.dt > 0 && c.tau > 0 && c.n_steps() + 1 < 8) err("observables: n1 spectrum needs at least 8 slices");

  if (c.dt > 0 && c.noise.std_dev > c.dt) {
    d.warnings.push_back("noise.std_dev = " + std::to_string(c.noise.std_dev) + " exceeds the step angle g tau/n = " +
                         std::to_string(c.dt) + "; first-order disorder description may not hold");
  }
  if (c.noise.std_dev == 0 && c.ensemble_size > 1) d.warnings.push_back("ensemble of noiseless runs repeats one result");
  return d;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("TD_WORKERS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
  const Diagnostics diag = validate(config);
  if (!diag.ok()) {
    std::string msg = "invalid config:";
    for (const auto &e : diag.errors) msg += "\n  " + e;
    throw UsageError(msg);
  }

  const int n_steps = config.n_steps();
  const TrotterProgram program = make_program(config.model, config.tau, n_steps, config.variant);
  const OperatorSum h = model_hamiltonian(config.model);
  const Eigen::VectorXcd psi0 = InitialState{config.initial_state}.vector(program.n_qubits());
  ObservableOptions obs;
  obs.positions = config.positions;
  obs.sigma2 = config.observe_sigma2;

  auto spectrum_of = [&](const Trajectory &t) {
    return windowed_spectrum(t.n1, program.step_time(), config.window_sigma, config.padding, config.window_anchor);
  };

  ExperimentResult result;
  result.config = config;

  std::map<Backend, SeriesAcc> acc;
  Accumulator<Complex> diff_acc;
  std::vector<double> omega;
  double window_sigma = 0;

  if (config.has_backend(Backend::IdealExact)) {
    const Trajectory t = evolve_ideal(h, psi0, config.tau, n_steps, obs);
    result.times = t.times;
    SeriesAcc &a = acc[Backend::IdealExact];
    a.n1.add(t.n1);
    a.sigma2.add(t.sigma2);
    if (config.observe_n1) {
      const Spectrum s = spectrum_of(t);
      a.spectrum.add(s.amplitude);
      omega = s.omega;
      window_sigma = s.window_sigma;
    }
  }

  const bool faulty = config.has_backend(Backend::FaultyCircuit);
  const bool effective = config.has_backend(Backend::EffectiveHamiltonian);
  if (faulty || effective) {
    auto one_run = [&](int run) {
      RunOutput out;
      const ErrorRealization r = sample_errors(program, config.noise, static_cast<std::uint64_t>(run));
      if (faulty) out.trajectories.emplace(Backend::FaultyCircuit, evolve_faulty(program, r, psi0, obs));
      if (effective) {
        out.trajectories.emplace(Backend::EffectiveHamiltonian, evolve_effective(h, derive_trace(program, r), psi0, obs));
      }
      if (config.observe_n1) {
        for (const auto &[b, t] : out.trajectories) out.spectra.emplace(b, spectrum_of(t));
        if (faulty && effective) {
          out.difference = spectral_difference(out.spectra.at(Backend::FaultyCircuit),
                                               out.spectra.at(Backend::EffectiveHamiltonian));
        }
      }
      return out;
    };

    // Runs are computed in parallel batches and reduced strictly in run
    // order, so the sums do not depend on the worker count.
    const int workers = std::min(resolve_workers(config.workers), config.ensemble_size);
    const int batch = std::max(1, workers * 2);
    for (int start = 0; start < config.ensemble_size; start += batch) {
      const int count = std::min(batch, config.ensemble_size - start);
      std::vector<RunOutput> slots(count);
      std::atomic<int> next{0};
      std::exception_ptr failure;
      std::mutex failure_mutex;
      auto work = [&] {
        for (int i = next++; i < count; i = next++) {
          try {
            slots[i] = one_run(start + i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      };
      if (workers <= 1) {
        work();
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < std::min(workers, count); ++w) pool.emplace_back(work);
        for (auto &t : pool) t.join();
      }
      if (failure) std::rethrow_exception(failure);

      for (RunOutput &out : slots) {
        for (auto &[b, t] : out.trajectories) {
          SeriesAcc &a = acc[b];
          a.n1.add(t.n1);
          a.sigma2.add(t.sigma2);
          if (result.times.empty()) result.times = t.times;
        }
        for (auto &[b, s] : out.spectra) {
          acc[b].spectrum.add(s.amplitude);
          if (omega.empty()) {
            omega = s.omega;
            window_sigma = s.window_sigma;
          }
        }
        if (out.difference) diff_acc.add(out.difference->amplitude);
      }
    }
  }

  json summary = {{"name", config.name},
                  {"n_steps", n_steps},
                  {"gates_per_step", program.step_gates.size()},
                  {"ensemble_size", config.ensemble_size},
                  {"window_sigma", window_sigma},
                  {"backends", json::object()}};
  for (Backend b : config.backends) {
    const SeriesAcc &a = acc.at(b);
    BackendResult br;
    if (config.observe_n1) br.n1 = finish(a.n1);
    if (config.observe_sigma2) br.sigma2 = finish(a.sigma2);
    json js = json::object();
    if (config.observe_n1) {
      br.spectrum = finish(a.spectrum, omega, window_sigma);
      js["peak"] = peak_json(dominant_peak(br.spectrum->mean, kPeakSearchFloor));
    }
    if (config.observe_sigma2) js["sigma2_final_quarter_mean"] = tail_mean(br.sigma2.mean);
    summary["backends"][to_string(b)] = js;
    result.backends.emplace(b, std::move(br));
  }
  if (diff_acc.count() > 0) {
    result.difference = finish(diff_acc, omega, window_sigma);
    const std::vector<double> mag = result.difference->mean.magnitude();
    const double max_diff = *std::max_element(mag.begin(), mag.end());
    const double peak = dominant_peak(result.backends.at(Backend::FaultyCircuit).spectrum->mean, kPeakSearchFloor).height;
    summary["difference"] = {{"max_abs", max_diff}, {"relative_to_faulty_peak", peak > 0 ? max_diff / peak : 0.0}};
  }
  result.summary = summary;
  return result;
}

void write_results(const ExperimentResult &result, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  const ExperimentConfig &c = result.config;
  const TrotterProgram program = make_program(c.model, c.tau, c.n_steps(), c.variant);
  json seeds = {{"base", c.noise.seed}, {"runs", {0, c.ensemble_size - 1}}};
  json manifest = {{"version", kVersion},
                   {"config", to_json(c)},
                   {"program", to_json(program)},
                   {"seeds", seeds},
                   {"rng", "mt19937_64 seeded by seed_seq{seed_lo, seed_hi, run_lo, run_hi}; standard normal draws "
                           "step-major, gate-minor"}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  // Trajectories: t, then mean and standard error per backend and observable.
  std::string header = "t";
  for (Backend b : c.backends) {
    const std::string name = to_string(b);
    if (c.observe_n1) header += "," + name + "_n1," + name + "_n1_se";
    if (c.observe_sigma2) header += "," + name + "_sigma2," + name + "_sigma2_se";
  }
  std::string traj = header + "\n";
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    std::vector<double> row{result.times[i]};
    for (Backend b : c.backends) {
      const BackendResult &br = result.backends.at(b);
      if (c.observe_n1) {
        row.push_back(br.n1.mean[i]);
        row.push_back(br.n1.standard_error[i]);
      }
      if (c.observe_sigma2) {
        row.push_back(br.sigma2.mean[i]);
        row.push_back(br.sigma2.standard_error[i]);
      }
    }
    traj += format_row(row);
  }
  write_file(dir / "trajectories.csv", traj);

  if (c.observe_n1) {
    std::string spectrum_csv = "omega";
    for (Backend b : c.backends) spectrum_csv += "," + to_string(b) + "_abs," + to_string(b) + "_se";
    if (result.difference) spectrum_csv += ",difference_abs,difference_se";
    spectrum_csv += "\n";
    const Spectrum &grid = result.backends.at(c.backends.front()).spectrum->mean;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<double> row{grid.omega[i]};
      for (Backend b : c.backends) {
        const SpectrumAverage &s = *result.backends.at(b).spectrum;
        row.push_back(std::abs(s.mean.amplitude[i]));
        row.push_back(s.standard_error[i]);
      }
      if (result.difference) {
        row.push_back(std::abs(result.difference->mean.amplitude[i]));
        row.push_back(result.difference->standard_error[i]);
      }
      spectrum_csv += format_row(row);
    }
    write_file(dir / "spectrum.csv", spectrum_csv);
  }

  write_file(dir / "summary.json", result.summary.dump(2) + "\n");
}

std::vector<std::string> preset_names() { return {"fig4", "fig6", "fig8"}; }

std::vector<ExperimentConfig> preset(const std::string &name) {
  ExperimentConfig base;
  base.model = {1, 1, 1};
  base.tau = 1000;
  base.dt = 0.05;

  if (name == "fig4") {
    // Single run with strong errors, all three backends.
    ExperimentConfig c = base;
    c.name = "fig4";
    c.variant = Variant::CzChain;
    c.noise = {0.5 * c.dt, TemporalMode::PerStepIid, 4};
    c.initial_state = {2, 1};
    c.observe_sigma2 = false;
    return {c};
  }
  if (name == "fig6") {
    std::vector<ExperimentConfig> out;
    for (double f : {0.1, 0.25, 0.5, 1.0}) {
      ExperimentConfig c = base;
      char label[32];
      std::snprintf(label, sizeof label, "fig6_std%.2fdt", f);
      c.name = label;
      c.variant = Variant::CzChain;
      c.noise = {f * c.dt, TemporalMode::PerStepIid, 6};
      c.ensemble_size = 200;
      // Damping is what broadens the averaged line; see WindowAnchor.
      c.window_anchor = WindowAnchor::Start;
      c.initial_state = {2, 1};
      c.observe_sigma2 = false;
      out.push_back(c);
    }
    return out;
  }
  if (name == "fig8") {
    std::vector<ExperimentConfig> out;
    for (double dt : {0.05, 0.1}) {
      for (Variant v : {Variant::ISwapChain, Variant::CnotChain}) {
        ExperimentConfig c = base;
        char label[48];
        std::snprintf(label, sizeof label, "fig8_%s_dt%.2f", to_string(v).c_str(), dt);
        c.name = label;
        c.variant = v;
        c.tau = 200;
        c.dt = dt;
        c.noise = {0.025, TemporalMode::QuasiStatic, 8};
        c.ensemble_size = 200;
        c.initial_state = {1};
        c.observe_n1 = false;
        c.backends = {Backend::FaultyCircuit, Backend::IdealExact};
        out.push_back(c);
      }
    }
    return out;
  }
  throw UsageError("unknown preset '" + name + "' (known: fig4, fig6, fig8)");
}

}  // namespace td
