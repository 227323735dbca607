// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/bcurrent.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <new>
#include <string>

#include "bcurrent/asymptotics.hpp"
#include "commands.hpp"

struct bc_context {
  unsigned threads = 1;
  bool diagnostics = false;
  std::string last_error;
};

struct bc_scenario {
  bcurrent::Scenario value;
};

namespace {

bc_status status_of(bcurrent::ErrorCode code) { return static_cast<bc_status>(static_cast<int>(code) + 1); }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
bc_status guarded(bc_context* ctx, F&& body) {
  try {
    if (ctx) ctx->last_error.clear();
    return body();
  } catch (const bcurrent::Error& e) {
    if (ctx) ctx->last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    if (ctx) ctx->last_error = "out of memory";
    return BC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    if (ctx) ctx->last_error = e.what();
    return BC_ERR_INTERNAL;
  }
}

bc_status run(bc_context* ctx, const char* command, const bc_scenario* scenario, const char* out_dir,
              const char* input, int* exit_code, char** report_json) {
  if (!ctx || !exit_code || !report_json) return BC_ERR_INVALID_ARGUMENT;
  return guarded(ctx, [&] {
    bcurrent::CommandOptions o;
    o.threads = ctx->threads;
    o.diagnostics = ctx->diagnostics;
    if (out_dir) o.out_dir = out_dir;
    if (input) o.input = input;
    const bcurrent::CommandResult r = bcurrent::run_command(command, scenario ? &scenario->value : nullptr, o);
    *exit_code = r.exit_code;
    *report_json = dup_string(r.report.dump(2));
    if (!*report_json) return BC_ERR_INTERNAL;
    if (r.error) {
      ctx->last_error = r.report["error"]["message"].get<std::string>();
      return status_of(*r.error);
    }
    if (r.internal_error) {
      ctx->last_error = r.report["error"]["message"].get<std::string>();
      return BC_ERR_INTERNAL;
    }
    return BC_OK;
  });
}

bc_status load(bc_context* ctx, bc_scenario** out, const std::function<bcurrent::Scenario()>& make) {
  if (!ctx || !out) return BC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded(ctx, [&] {
    *out = new bc_scenario{make()};
    return BC_OK;
  });
}

}  // namespace

extern "C" {

const char* bc_version(void) { return BCURRENT_VERSION; }

const char* bc_status_name(bc_status status) {
  if (status == BC_OK) return "OK";
  if (status == BC_ERR_INTERNAL) return "INTERNAL";
  const int c = static_cast<int>(status) - 1;
  if (c < 0 || c > static_cast<int>(bcurrent::ErrorCode::TooFewSamples)) return "UNKNOWN";
  return bcurrent::error_code_name(static_cast<bcurrent::ErrorCode>(c));
}

bc_status bc_context_create(unsigned threads, bc_context** out) {
  if (!out) return BC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  if (threads == 0) return BC_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) bc_context;
  if (!*out) return BC_ERR_INTERNAL;
  (*out)->threads = threads;
  return BC_OK;
}

void bc_context_destroy(bc_context* ctx) { delete ctx; }

const char* bc_last_error(const bc_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }

bc_status bc_context_set_diagnostics(bc_context* ctx, int enabled) {
  if (!ctx) return BC_ERR_INVALID_ARGUMENT;
  ctx->diagnostics = enabled != 0;
  return BC_OK;
}

bc_status bc_scenario_load_file(bc_context* ctx, const char* path, bc_scenario** out) {
  if (!path) return BC_ERR_INVALID_ARGUMENT;
  return load(ctx, out, [&] { return bcurrent::Scenario::load(path); });
}

bc_status bc_scenario_load_json(bc_context* ctx, const char* json, bc_scenario** out) {
  if (!json) return BC_ERR_INVALID_ARGUMENT;
  return load(ctx, out, [&] { return bcurrent::Scenario::from_json(json); });
}

bc_status bc_scenario_builtin(bc_context* ctx, const char* name, bc_scenario** out) {
  if (!name) return BC_ERR_INVALID_ARGUMENT;
  return load(ctx, out, [&] { return bcurrent::builtin_scenario(name); });
}

void bc_scenario_destroy(bc_scenario* scenario) { delete scenario; }

bc_status bc_scenario_set_schedule(bc_context* ctx, bc_scenario* scenario, double eps0, double ratio, int steps) {
  if (!ctx || !scenario) return BC_ERR_INVALID_ARGUMENT;
  return guarded(ctx, [&] {
    bcurrent::Schedule s{eps0, ratio, steps};
    s.validate();
    scenario->value.schedule = s;
    return BC_OK;
  });
}

bc_status bc_scenario_set_tolerance(bc_context* ctx, bc_scenario* scenario, double rel_tol) {
  if (!ctx || !scenario) return BC_ERR_INVALID_ARGUMENT;
  return guarded(ctx, [&] {
    bcurrent::QuadratureSpec q = scenario->value.quadrature;
    q.rel_tol = rel_tol;
    q.validate();
    scenario->value.quadrature = q;
    return BC_OK;
  });
}

bc_status bc_scenario_to_json(bc_context* ctx, const bc_scenario* scenario, char** out_json) {
  if (!ctx || !scenario || !out_json) return BC_ERR_INVALID_ARGUMENT;
  return guarded(ctx, [&] {
    *out_json = dup_string(scenario->value.to_json());
    return *out_json ? BC_OK : BC_ERR_INTERNAL;
  });
}

bc_status bc_run_classify(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                          char** report_json) {
  if (!scenario) return BC_ERR_INVALID_ARGUMENT;
  return run(ctx, "classify", scenario, out_dir, nullptr, exit_code, report_json);
}

bc_status bc_run_pair(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                      char** report_json) {
  if (!scenario) return BC_ERR_INVALID_ARGUMENT;
  return run(ctx, "pair", scenario, out_dir, nullptr, exit_code, report_json);
}

bc_status bc_run_weinstock(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                           char** report_json) {
  if (!scenario) return BC_ERR_INVALID_ARGUMENT;
  return run(ctx, "weinstock", scenario, out_dir, nullptr, exit_code, report_json);
}

bc_status bc_run_growth(bc_context* ctx, const bc_scenario* scenario, const char* out_dir, int* exit_code,
                        char** report_json) {
  if (!scenario) return BC_ERR_INVALID_ARGUMENT;
  return run(ctx, "growth", scenario, out_dir, nullptr, exit_code, report_json);
}

bc_status bc_run_asymptotics(bc_context* ctx, const bc_scenario* scenario, const char* input_csv, const char* out_dir,
                             int* exit_code, char** report_json) {
  return run(ctx, "asymptotics", scenario, out_dir, input_csv, exit_code, report_json);
}

bc_status bc_run_reproduce_paper(bc_context* ctx, const char* out_dir, int* exit_code, char** report_json) {
  return run(ctx, "reproduce-paper", nullptr, out_dir, nullptr, exit_code, report_json);
}

void bc_string_free(char* s) { std::free(s); }

bc_status bc_closed_form_I(double eps, double* out) {
  if (!out || !(eps > 0.0)) return BC_ERR_INVALID_ARGUMENT;
  *out = bcurrent::closed_form_I(eps);
  return BC_OK;
}

bc_status bc_closed_form_II(double eps, double* out) {
  if (!out || !(eps > 0.0)) return BC_ERR_INVALID_ARGUMENT;
  *out = bcurrent::closed_form_II(eps);
  return BC_OK;
}

bc_status bc_closed_form_segment(double eps, double* out_re, double* out_im) {
  if (!out_re || !out_im || !(eps > 0.0)) return BC_ERR_INVALID_ARGUMENT;
  const bcurrent::cplx c = bcurrent::closed_form_segment(eps);
  *out_re = c.real();
  *out_im = c.imag();
  return BC_OK;
}

}  // extern "C"
