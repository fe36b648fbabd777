/* C interface to the novikov simulator.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every call that can fail returns an nv_status;
 * nv_last_error() then describes the failure (per thread, valid until the
 * next failing call on that thread). The nv_cmd_* drivers return process exit
 * statuses instead: 0 pass, 1 monitor or tolerance failure, 2 config error.
 */
#ifndef NOVIKOV_H
#define NOVIKOV_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NOVIKOV_BUILDING_LIBRARY)
#    define NV_API __declspec(dllexport)
#  else
#    define NV_API __declspec(dllimport)
#  endif
#else
#  define NV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nv_status {
  NV_OK = 0,
  NV_INVALID_ARGUMENT,
  NV_INVALID_DATA,
  NV_WINDOW_TOO_SMALL,
  NV_NON_MONOTONE,
  NV_NAN_DETECTED,
  NV_MONITOR_VIOLATION,
  NV_CONSISTENCY_FAILURE,
  NV_OUT_OF_WINDOW,
  NV_PRE_BREAKING_ONLY,
  NV_CONFIG,
  NV_IO,
  NV_INTERNAL
} nv_status;

typedef struct nv_datum nv_datum;
typedef struct nv_state nv_state;
typedef struct nv_config nv_config;

NV_API const char* nv_version(void);
NV_API const char* nv_status_string(nv_status status);
NV_API const char* nv_last_error(void);

/* Initial data. */
NV_API nv_status nv_datum_peakon(double speed, double crest, int sign, nv_datum** out);
NV_API nv_status nv_datum_antipeakon_pair(double speed, double separation, double center,
                                          nv_datum** out);
NV_API nv_status nv_datum_gaussian(double amplitude, double width, double center, nv_datum** out);
NV_API nv_status nv_datum_tabulated(const double* xs, const double* us, size_t n, nv_datum** out);
NV_API nv_status nv_datum_perturbed(const nv_datum* datum, double delta, double center,
                                    double width, nv_datum** out);
NV_API nv_status nv_datum_value(const nv_datum* datum, double x, double* u);
NV_API void nv_datum_free(nv_datum* datum);

/* Characteristic-coordinate state on n labels covering [x_lo, x_hi]. */
NV_API nv_status nv_state_build(const nv_datum* datum, double x_lo, double x_hi, size_t n,
                                nv_state** out);
NV_API nv_status nv_state_copy(const nv_state* state, nv_state** out);
NV_API size_t nv_state_size(const nv_state* state);
NV_API double nv_state_time(const nv_state* state);
/* One RK4 step of length dt, in place. */
NV_API nv_status nv_state_step(nv_state* state, double dt);
NV_API nv_status nv_state_energies(const nv_state* state, double* E, double* F);
/* Copies the arrays into caller buffers of nv_state_size() entries; any may be NULL. */
NV_API nv_status nv_state_arrays(const nv_state* state, double* u, double* v, double* xi,
                                 double* x);
NV_API void nv_state_free(nv_state* state);

/* Run configuration (flat section.key = value text). */
NV_API nv_status nv_config_load(const char* path, nv_config** out);
NV_API nv_status nv_config_parse(const char* text, nv_config** out);
NV_API size_t nv_config_warning_count(const nv_config* config);
NV_API const char* nv_config_warning(const nv_config* config, size_t index);
NV_API void nv_config_free(nv_config* config);

/* Drivers. out_dir NULL means the config's output.dir. Diagnostics go to stderr. */
NV_API int nv_cmd_run(const nv_config* config, const char* out_dir);
NV_API int nv_cmd_trace(const nv_config* config, const char* out_dir);
NV_API int nv_cmd_compare(const nv_config* config, const char* out_dir);
NV_API int nv_cmd_perturb(const nv_config* config, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* NOVIKOV_H */
