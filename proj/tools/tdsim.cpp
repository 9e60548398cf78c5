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

// tdsim: command-line front end over the C interface.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "trotterdisorder/c_api.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct Failure {
  int code;
  std::string message;
};

int exit_code(td_status s) { return s == TD_ERR_USAGE ? kExitUsage : kExitRuntime; }

void check(td_status s, const std::string &context) {
  if (s != TD_OK) throw Failure{exit_code(s), context + ": " + td_last_error()};
}

std::string take(char *s) {
  std::string out(s);
  td_string_free(s);
  return out;
}

json read_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot read config '" + path + "'"};
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw Failure{kExitUsage, "config '" + path + "' is not valid JSON: " + e.what()};
  }
}

struct Overrides {
  std::optional<std::string> variant;
  std::optional<double> tau, dt, std_dev;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<int> ensemble;

  void add_to(CLI::App *cmd) {
    cmd->add_option("--variant", variant, "cz_chain, cnot_chain or iswap_chain");
    cmd->add_option("--tau", tau, "Total time in units of 1/g");
    cmd->add_option("--dt", dt, "Step size g tau/n");
    cmd->add_option("--std-dev", std_dev, "Standard deviation of the over-rotations (radians)");
    cmd->add_option("--noise-mode", mode, "per_step_iid or quasi_static");
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--ensemble", ensemble, "Number of runs");
  }

  void apply(json &c) const {
    if (variant) c["variant"] = *variant;
    if (tau) c["tau"] = *tau;
    if (dt) c["dt"] = *dt;
    if (std_dev) c["noise"]["std_dev"] = *std_dev;
    if (mode) c["noise"]["mode"] = *mode;
    if (seed) c["noise"]["seed"] = *seed;
    if (ensemble) c["ensemble_size"] = *ensemble;
  }
};

using Experiment = std::unique_ptr<td_experiment, decltype(&td_experiment_destroy)>;

Experiment create(const json &config) {
  td_experiment *raw = nullptr;
  check(td_experiment_create(config.dump().c_str(), &raw), "config");
  return Experiment(raw, &td_experiment_destroy);
}

// Prints diagnostics; returns false if the config has errors.
bool report(const td_experiment *exp, const std::string &label, bool quiet_ok) {
  char *raw = nullptr;
  check(td_experiment_validate(exp, &raw), "validate");
  const json d = json::parse(take(raw));
  for (const auto &w : d["warnings"]) std::cerr << label << ": warning: " << w.get<std::string>() << "\n";
  for (const auto &e : d["errors"]) std::cerr << label << ": error: " << e.get<std::string>() << "\n";
  if (!quiet_ok && d["ok"].get<bool>()) std::cout << label << ": ok\n";
  return d["ok"].get<bool>();
}

void run_one(const json &config, const std::string &out_dir, int workers) {
  const std::string label = config.value("name", std::string("experiment"));
  Experiment exp = create(config);
  if (!report(exp.get(), label, true)) throw Failure{kExitUsage, label + ": invalid configuration"};
  check(td_experiment_run(exp.get(), workers), label);
  check(td_experiment_write(exp.get(), out_dir.c_str()), label);
  char *raw = nullptr;
  check(td_experiment_summary(exp.get(), &raw), label);
  std::cout << label << " -> " << out_dir << "\n" << json::parse(take(raw)).dump(2) << "\n";
}

void print_budget(double fidelity, int gates_per_step, bool as_json) {
  double bound = 0;
  long long steps = 0;
  int unbounded = 0;
  check(td_budget(fidelity, gates_per_step, &bound, &steps, &unbounded), "budget");
  // Standard deviation of the over-rotations with this averaged fidelity.
  const double std_dev = std::sqrt(2 * (1 - fidelity));
  if (as_json) {
    json j = {{"avg_fidelity", fidelity}, {"gates_per_step", gates_per_step}, {"unbounded", unbounded != 0},
              {"std_dev", std_dev}};
    j["total_gates_bound"] = unbounded ? json(nullptr) : json(bound);
    j["max_steps"] = unbounded ? json(nullptr) : json(steps);
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::printf("averaged fidelity      %.8g\n", fidelity);
  std::printf("equivalent std dev     %.6g rad\n", std_dev);
  std::printf("gates per step M       %d\n", gates_per_step);
  if (unbounded) {
    std::printf("total gates M n        unbounded\n");
    std::printf("Trotter steps n        unbounded\n");
  } else {
    std::printf("total gates M n        < %.6g\n", bound);
    std::printf("Trotter steps n        <= %lld\n", steps);
  }
  std::printf("(worst-case estimate: disorder stays below the model energy scale)\n");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Trotterized Hubbard simulation with coherent gate errors"};
  app.set_version_flag("--version", std::string(td_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir = "td_out";
  int workers = 0;
  Overrides over;

  CLI::App *simulate = app.add_subcommand("simulate", "Run one experiment from a JSON config");
  simulate->add_option("-c,--config", config_path, "Config file (JSON)");
  simulate->add_option("-o,--out", out_dir, "Output directory");
  simulate->add_option("-j,--workers", workers, "Worker threads (default: TD_WORKERS or all cores)");
  over.add_to(simulate);

  double fidelity = 0.99;
  int gates_per_step = 1;
  bool as_json = false;
  CLI::App *budget = app.add_subcommand("budget", "Worst-case gate budget for an averaged fidelity");
  budget->add_option("-f,--fidelity", fidelity, "Averaged minimal gate fidelity")->required();
  budget->add_option("-M,--gates-per-step", gates_per_step, "Noisy gates per Trotter step");
  budget->add_flag("--json", as_json, "Print JSON");

  CLI::App *validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("-c,--config", config_path, "Config file (JSON)")->required();
  over.add_to(validate);

  std::string preset_name;
  bool print_only = false;
  CLI::App *preset = app.add_subcommand("preset", "Run a named reproduction setup (fig4, fig6, fig8)");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("-o,--out", out_dir, "Output directory; one subdirectory per curve");
  preset->add_option("-j,--workers", workers, "Worker threads");
  preset->add_flag("--print", print_only, "Print the configs instead of running them");
  over.add_to(preset);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      json config = config_path.empty() ? json::object() : read_config(config_path);
      over.apply(config);
      run_one(config, out_dir, workers);
    } else if (budget->parsed()) {
      print_budget(fidelity, gates_per_step, as_json);
    } else if (validate->parsed()) {
      json config = read_config(config_path);
      over.apply(config);
      Experiment exp = create(config);
      if (!report(exp.get(), config_path, false)) return kExitUsage;
    } else if (preset->parsed()) {
      char *raw = nullptr;
      check(td_preset_json(preset_name.c_str(), &raw), "preset");
      json configs = json::parse(take(raw));
      for (auto &c : configs) over.apply(c);
      if (print_only) {
        std::cout << configs.dump(2) << "\n";
        return 0;
      }
      for (const auto &c : configs) run_one(c, out_dir + "/" + c["name"].get<std::string>(), workers);
    }
  } catch (const Failure &f) {
    std::cerr << "tdsim: " << f.message << "\n";
    return f.code;
  } catch (const std::exception &e) {
    std::cerr << "tdsim: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
