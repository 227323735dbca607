/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the boundary-current library. Handles are opaque; every
 * call returns a bc_status. Strings handed out by the library are freed with
 * bc_string_free. A context is not safe for concurrent calls.
 */

#ifndef BCURRENT_BCURRENT_H
#define BCURRENT_BCURRENT_H

#include <stddef.h>

#if defined(BCURRENT_BUILDING_LIBRARY)
#define BC_API __attribute__((visibility("default")))
#else
#define BC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bc_status {
  BC_OK = 0,
  BC_ERR_INVALID_ARGUMENT = 1,
  BC_ERR_CONFIG_PARSE = 2,
  BC_ERR_GEOMETRY_INVALID = 3,
  BC_ERR_UNSUPPORTED = 4,
  BC_ERR_NO_CONVERGENCE = 5,
  BC_ERR_OUTSIDE_DOMAIN = 6,
  BC_ERR_NO_OUTWARD_VECTOR = 7,
  BC_ERR_COVER_INCOMPLETE = 8,
  BC_ERR_POLE_INSIDE = 9,
  BC_ERR_POLE_ON_BOUNDARY = 10,
  BC_ERR_BUDGET_EXCEEDED = 11,
  BC_ERR_NOT_L1 = 12,
  BC_ERR_FORM_NOT_CLOSED = 13,
  BC_ERR_TOO_FEW_SAMPLES = 14,
  BC_ERR_INTERNAL = 99
} bc_status;

typedef struct bc_context bc_context;
typedef struct bc_scenario bc_scenario;

BC_API const char* bc_version(void);
BC_API const char* bc_status_name(bc_status status);

BC_API bc_status bc_context_create(unsigned threads, bc_context** out);
BC_API void bc_context_destroy(bc_context* ctx);
/* Message of the last failed call on ctx ("" if none). Owned by ctx. */
BC_API const char* bc_last_error(const bc_context* ctx);
/* Write per-chart diagnostics CSVs from pair runs. */
BC_API bc_status bc_context_set_diagnostics(bc_context* ctx, int enabled);

BC_API bc_status bc_scenario_load_file(bc_context* ctx, const char* path, bc_scenario** out);
BC_API bc_status bc_scenario_load_json(bc_context* ctx, const char* json, bc_scenario** out);
BC_API bc_status bc_scenario_builtin(bc_context* ctx, const char* name, bc_scenario** out);
BC_API void bc_scenario_destroy(bc_scenario* scenario);
BC_API bc_status bc_scenario_set_schedule(bc_context* ctx, bc_scenario* scenario, double eps0, double ratio, int steps);
BC_API bc_status bc_scenario_set_tolerance(bc_context* ctx, bc_scenario* scenario, double rel_tol);
BC_API bc_status bc_scenario_to_json(bc_context* ctx, const bc_scenario* scenario, char** out_json);

/*
 * Subcommands. out_dir may be NULL (scenario default). On return
 * *exit_code holds the process exit code of the matching CLI command and
 * *report_json the JSON report (also when the command itself failed).
 */
BC_API bc_status bc_run_classify(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                                 char** report_json);
BC_API bc_status bc_run_pair(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                             char** report_json);
BC_API bc_status bc_run_weinstock(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                                  char** report_json);
BC_API bc_status bc_run_growth(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                               char** report_json);
/* scenario may be NULL; input_csv (may be NULL) selects fitting a pairing CSV. */
BC_API bc_status bc_run_asymptotics(bc_context* ctx, const bc_scenario* scenario, const char* input_csv,
                                    const char* out_dir, int* exit_code, char** report_json);
BC_API bc_status bc_run_reproduce_paper(bc_context* ctx, const char* out_dir, int* exit_code, char** report_json);

BC_API void bc_string_free(char* s);

/* Closed-form oracles. */
BC_API bc_status bc_closed_form_I(double eps, double* out);
BC_API bc_status bc_closed_form_II(double eps, double* out);
BC_API bc_status bc_closed_form_segment(double eps, double* out_re, double* out_im);

#ifdef __cplusplus
}
#endif

#endif /* BCURRENT_BCURRENT_H */
