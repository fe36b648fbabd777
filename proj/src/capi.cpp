#include "novikov/novikov.h"

#include <algorithm>
#include <exception>
#include <iostream>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "novikov/commands.hpp"
#include "novikov/config.hpp"
#include "novikov/datum.hpp"
#include "novikov/error.hpp"
#include "novikov/integrator.hpp"
#include "novikov/lagrangian.hpp"

struct nv_datum {
  novikov::InitialDatum value;
};
struct nv_state {
  novikov::LagrangianState value;
};
struct nv_config {
  novikov::RunConfig value;
};

namespace {

thread_local std::string last_error;

nv_status status_of(novikov::ErrorCode code) {
  using novikov::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return NV_INVALID_ARGUMENT;
    case ErrorCode::invalid_data: return NV_INVALID_DATA;
    case ErrorCode::window_too_small: return NV_WINDOW_TOO_SMALL;
    case ErrorCode::non_monotone: return NV_NON_MONOTONE;
    case ErrorCode::nan_detected: return NV_NAN_DETECTED;
    case ErrorCode::monitor_violation: return NV_MONITOR_VIOLATION;
    case ErrorCode::consistency_failure: return NV_CONSISTENCY_FAILURE;
    case ErrorCode::out_of_window: return NV_OUT_OF_WINDOW;
    case ErrorCode::pre_breaking_only: return NV_PRE_BREAKING_ONLY;
    case ErrorCode::config: return NV_CONFIG;
    case ErrorCode::io: return NV_IO;
  }
  return NV_INTERNAL;
}

template <class F>
nv_status guarded(F&& f) {
  try {
    f();
    return NV_OK;
  } catch (const novikov::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return NV_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return NV_INTERNAL;
  }
}

nv_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return NV_INVALID_ARGUMENT;
}

template <class F>
nv_status make_datum(nv_datum** out, F&& build) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new nv_datum{build()}; });
}

int command(const char* name, const nv_config* config, const char* out_dir) {
  if (!config) {
    last_error = "null config";
    std::cerr << "error: " << last_error << "\n";
    return novikov::exit_config;
  }
  const std::string dir = out_dir ? out_dir : config->value.out_dir;
  try {
    return novikov::run_command(name, config->value, dir, std::cerr);
  } catch (const std::exception& e) {
    last_error = e.what();
    std::cerr << "error: " << e.what() << "\n";
    return novikov::exit_failure;
  }
}

}  // namespace

extern "C" {

const char* nv_version(void) { return "1.0.0"; }

const char* nv_status_string(nv_status status) {
  switch (status) {
    case NV_OK: return "ok";
    case NV_INVALID_ARGUMENT: return "invalid argument";
    case NV_INVALID_DATA: return "invalid data";
    case NV_WINDOW_TOO_SMALL: return "window too small";
    case NV_NON_MONOTONE: return "non-monotone";
    case NV_NAN_DETECTED: return "NaN detected";
    case NV_MONITOR_VIOLATION: return "monitor violation";
    case NV_CONSISTENCY_FAILURE: return "consistency failure";
    case NV_OUT_OF_WINDOW: return "out of window";
    case NV_PRE_BREAKING_ONLY: return "valid before breaking only";
    case NV_CONFIG: return "config error";
    case NV_IO: return "I/O error";
    case NV_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nv_last_error(void) { return last_error.c_str(); }

nv_status nv_datum_peakon(double speed, double crest, int sign, nv_datum** out) {
  return make_datum(out, [&] { return novikov::InitialDatum::peakon(speed, crest, sign); });
}

nv_status nv_datum_antipeakon_pair(double speed, double separation, double center, nv_datum** out) {
  return make_datum(out, [&] {
    return novikov::InitialDatum::antipeakon_pair(speed, separation, center);
  });
}

nv_status nv_datum_gaussian(double amplitude, double width, double center, nv_datum** out) {
  return make_datum(out, [&] { return novikov::InitialDatum::gaussian(amplitude, width, center); });
}

nv_status nv_datum_tabulated(const double* xs, const double* us, size_t n, nv_datum** out) {
  if (n > 0 && (!xs || !us)) return null_argument("samples");
  return make_datum(out, [&] {
    return novikov::InitialDatum::tabulated(std::vector<double>(xs, xs + n),
                                            std::vector<double>(us, us + n));
  });
}

nv_status nv_datum_perturbed(const nv_datum* datum, double delta, double center, double width,
                             nv_datum** out) {
  if (!datum) return null_argument("datum");
  return make_datum(out, [&] { return datum->value.perturbed(delta, center, width); });
}

nv_status nv_datum_value(const nv_datum* datum, double x, double* u) {
  if (!datum || !u) return null_argument("datum or u");
  return guarded([&] { *u = datum->value.value(x); });
}

void nv_datum_free(nv_datum* datum) { delete datum; }

nv_status nv_state_build(const nv_datum* datum, double x_lo, double x_hi, size_t n, nv_state** out) {
  if (!datum || !out) return null_argument("datum or out");
  *out = nullptr;
  return guarded([&] {
    novikov::GridSpec grid;
    grid.x_lo = x_lo;
    grid.x_hi = x_hi;
    grid.n = n;
    *out = new nv_state{novikov::build_initial_state(datum->value, grid)};
  });
}

nv_status nv_state_copy(const nv_state* state, nv_state** out) {
  if (!state || !out) return null_argument("state or out");
  *out = nullptr;
  return guarded([&] { *out = new nv_state{state->value}; });
}

size_t nv_state_size(const nv_state* state) { return state ? state->value.size() : 0; }

double nv_state_time(const nv_state* state) { return state ? state->value.T : 0.0; }

nv_status nv_state_step(nv_state* state, double dt) {
  if (!state) return null_argument("state");
  if (!(dt > 0.0)) {
    last_error = "dt must be positive";
    return NV_INVALID_ARGUMENT;
  }
  return guarded([&] { state->value = novikov::rk4_step(state->value, dt); });
}

nv_status nv_state_energies(const nv_state* state, double* E, double* F) {
  if (!state) return null_argument("state");
  return guarded([&] {
    if (E) *E = novikov::energy_E(state->value);
    if (F) *F = novikov::energy_F(state->value);
  });
}

nv_status nv_state_arrays(const nv_state* state, double* u, double* v, double* xi, double* x) {
  if (!state) return null_argument("state");
  const auto& s = state->value;
  auto copy = [](const std::vector<double>& src, double* dst) {
    if (dst) std::copy(src.begin(), src.end(), dst);
  };
  copy(s.u, u);
  copy(s.v, v);
  copy(s.xi, xi);
  copy(s.x, x);
  return NV_OK;
}

void nv_state_free(nv_state* state) { delete state; }

nv_status nv_config_load(const char* path, nv_config** out) {
  if (!path || !out) return null_argument("path or out");
  *out = nullptr;
  return guarded([&] { *out = new nv_config{novikov::load_config(path)}; });
}

nv_status nv_config_parse(const char* text, nv_config** out) {
  if (!text || !out) return null_argument("text or out");
  *out = nullptr;
  return guarded([&] { *out = new nv_config{novikov::parse_config(text)}; });
}

size_t nv_config_warning_count(const nv_config* config) {
  return config ? config->value.warnings.size() : 0;
}

const char* nv_config_warning(const nv_config* config, size_t index) {
  if (!config || index >= config->value.warnings.size()) return nullptr;
  return config->value.warnings[index].c_str();
}

void nv_config_free(nv_config* config) { delete config; }

int nv_cmd_run(const nv_config* config, const char* out_dir) { return command("run", config, out_dir); }
int nv_cmd_trace(const nv_config* config, const char* out_dir) {
  return command("trace", config, out_dir);
}
int nv_cmd_compare(const nv_config* config, const char* out_dir) {
  return command("compare", config, out_dir);
}
int nv_cmd_perturb(const nv_config* config, const char* out_dir) {
  return command("perturb", config, out_dir);
}

}  // extern "C"
