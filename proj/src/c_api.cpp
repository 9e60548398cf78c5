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

#include "trotterdisorder/c_api.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "trotterdisorder/analysis.hpp"
#include "trotterdisorder/effective.hpp"
#include "trotterdisorder/errors.hpp"
#include "trotterdisorder/experiment.hpp"

struct td_experiment {
  td::ExperimentConfig config;
  std::optional<td::ExperimentResult> result;
};

namespace {

thread_local std::string last_error;

td_status fail(td_status status, const std::string &message) {
  last_error = message;
  return status;
}

// Maps exceptions escaping `body` to status codes.
template <typename F>
td_status guarded(F &&body) {
  try {
    body();
    return TD_OK;
  } catch (const td::UsageError &e) {
    return fail(TD_ERR_USAGE, e.what());
  } catch (const td::DomainError &e) {
    return fail(TD_ERR_DOMAIN, e.what());
  } catch (const td::IoError &e) {
    return fail(TD_ERR_IO, e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(TD_ERR_USAGE, std::string("JSON: ") + e.what());
  } catch (const std::bad_alloc &) {
    return fail(TD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(TD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TD_ERR_INTERNAL, "unknown error");
  }
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void *p, const char *what) {
  if (!p) throw td::UsageError(std::string(what) + " must not be NULL");
}

td::ExperimentConfig parse_config(const char *json) {
  need(json, "config_json");
  return td::config_from_json(nlohmann::json::parse(json));
}

}  // namespace

extern "C" {

const char *td_version(void) { return td::kVersion; }

const char *td_last_error(void) { return last_error.c_str(); }

const char *td_status_name(td_status status) {
  switch (status) {
    case TD_OK:
      return "ok";
    case TD_ERR_USAGE:
      return "usage error";
    case TD_ERR_DOMAIN:
      return "domain error";
    case TD_ERR_IO:
      return "I/O error";
    case TD_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void td_string_free(char *s) { std::free(s); }

td_status td_experiment_create(const char *config_json, td_experiment **out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto exp = std::make_unique<td_experiment>();
    exp->config = parse_config(config_json);
    *out = exp.release();
  });
}

void td_experiment_destroy(td_experiment *exp) { delete exp; }

td_status td_experiment_validate(const td_experiment *exp, char **diagnostics_json) {
  return guarded([&] {
    need(exp, "experiment");
    need(diagnostics_json, "diagnostics_json");
    *diagnostics_json = dup(td::validate(exp->config).to_json().dump());
  });
}

td_status td_experiment_config(const td_experiment *exp, char **config_json) {
  return guarded([&] {
    need(exp, "experiment");
    need(config_json, "config_json");
    *config_json = dup(td::to_json(exp->config).dump());
  });
}

td_status td_experiment_run(td_experiment *exp, int workers) {
  return guarded([&] {
    need(exp, "experiment");
    td::ExperimentConfig config = exp->config;
    if (workers > 0) config.workers = workers;
    exp->result = td::run_experiment(config);
  });
}

td_status td_experiment_summary(const td_experiment *exp, char **summary_json) {
  return guarded([&] {
    need(exp, "experiment");
    need(summary_json, "summary_json");
    if (!exp->result) throw td::UsageError("experiment has not been run");
    *summary_json = dup(exp->result->summary.dump());
  });
}

td_status td_experiment_write(const td_experiment *exp, const char *directory) {
  return guarded([&] {
    need(exp, "experiment");
    need(directory, "directory");
    if (!exp->result) throw td::UsageError("experiment has not been run");
    td::write_results(*exp->result, directory);
  });
}

td_status td_preset_json(const char *name, char **configs_json) {
  return guarded([&] {
    need(name, "name");
    need(configs_json, "configs_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &c : td::preset(name)) arr.push_back(td::to_json(c));
    *configs_json = dup(arr.dump());
  });
}

td_status td_program_json(const char *config_json, char **program_json) {
  return guarded([&] {
    need(program_json, "program_json");
    const td::ExperimentConfig c = parse_config(config_json);
    const td::Diagnostics d = td::validate(c);
    if (!d.ok()) throw td::UsageError(d.errors.front());
    *program_json = dup(td::to_json(td::make_program(c.model, c.tau, c.n_steps(), c.variant)).dump());
  });
}

td_status td_trace_json(const char *config_json, unsigned long long run, int expand_step, char **trace_json) {
  return guarded([&] {
    need(trace_json, "trace_json");
    const td::ExperimentConfig c = parse_config(config_json);
    const td::Diagnostics d = td::validate(c);
    if (!d.ok()) throw td::UsageError(d.errors.front());
    const td::TrotterProgram program = td::make_program(c.model, c.tau, c.n_steps(), c.variant);
    const td::DisorderTrace trace = td::derive_trace(program, td::sample_errors(program, c.noise, run));
    if (expand_step >= program.n_steps) throw td::UsageError("expand_step beyond the last step");
    std::vector<int> steps;
    if (expand_step >= 0) steps.push_back(expand_step);
    *trace_json = dup(trace.to_json(steps).dump());
  });
}

td_status td_budget(double avg_fidelity, int gates_per_step, double *bound, long long *max_steps, int *unbounded) {
  return guarded([&] {
    need(bound, "bound");
    need(max_steps, "max_steps");
    need(unbounded, "unbounded");
    const td::GateBudget b = td::gate_budget(avg_fidelity, gates_per_step);
    *unbounded = b.unbounded ? 1 : 0;
    if (!b.unbounded) {
      *bound = b.total_gates_bound;
      *max_steps = b.max_steps;
    }
  });
}

td_status td_fidelity(double delta_phi, double *f_min, double *bures_angle) {
  return guarded([&] {
    need(f_min, "f_min");
    need(bures_angle, "bures_angle");
    const td::FidelityReport r = td::fidelity_from_overrotation(delta_phi);
    *f_min = r.f_min;
    *bures_angle = r.bures_angle;
  });
}

td_status td_averaged_fidelity(double std_dev, double *f_avg) {
  return guarded([&] {
    need(f_avg, "f_avg");
    *f_avg = td::averaged_fidelity(std_dev);
  });
}

}  // extern "C"
