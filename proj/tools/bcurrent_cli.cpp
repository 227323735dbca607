// SPDX-License-Identifier: Apache-2.0
//
// bcurrent: command-line front end over the C API.

#include <bcurrent/bcurrent.h>

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 9;

int fail(int code, const std::string& message) {
  std::fprintf(stderr, "bcurrent: %s\n", message.c_str());
  return code;
}

struct Flags {
  std::string scenario;
  std::string out;
  std::string input;
  double eps0 = 0.0, ratio = 0.0, tol = 0.0;
  int steps = 0;
  unsigned threads = 1;
  bool diagnostics = false;
};

int load_scenario(bc_context* ctx, const Flags& f, bc_scenario** out) {
  bc_status st;
  const std::string prefix = "builtin:";
  if (f.scenario.rfind(prefix, 0) == 0)
    st = bc_scenario_builtin(ctx, f.scenario.substr(prefix.size()).c_str(), out);
  else
    st = bc_scenario_load_file(ctx, f.scenario.c_str(), out);
  if (st == BC_ERR_INVALID_ARGUMENT) return fail(kExitUsage, bc_last_error(ctx));
  if (st != BC_OK) return fail(kExitConfig, bc_last_error(ctx));

  if (f.eps0 > 0.0 || f.ratio > 0.0 || f.steps > 0) {
    char* text = nullptr;
    if (bc_scenario_to_json(ctx, *out, &text) != BC_OK) return fail(kExitInternal, bc_last_error(ctx));
    const auto j = nlohmann::json::parse(text);
    bc_string_free(text);
    const auto& s = j.at("schedule");
    const double eps0 = f.eps0 > 0.0 ? f.eps0 : s.at("eps0").get<double>();
    const double ratio = f.ratio > 0.0 ? f.ratio : s.at("ratio").get<double>();
    const int steps = f.steps > 0 ? f.steps : s.at("steps").get<int>();
    if (bc_scenario_set_schedule(ctx, *out, eps0, ratio, steps) != BC_OK) return fail(kExitUsage, bc_last_error(ctx));
  }
  if (f.tol > 0.0 && bc_scenario_set_tolerance(ctx, *out, f.tol) != BC_OK) return fail(kExitUsage, bc_last_error(ctx));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary-current pairings of holomorphic functions on piecewise-smooth domains"};
  app.set_version_flag("--version", bc_version());
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", f.scenario, "scenario JSON file, or builtin:NAME");
    if (needs_scenario) opt->required();
    sub->add_option("--eps0", f.eps0, "first epsilon")->check(CLI::PositiveNumber);
    sub->add_option("--ratio", f.ratio, "epsilon ratio in (0, 1)")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--steps", f.steps, "number of epsilons")->check(CLI::PositiveNumber);
    sub->add_option("--tol", f.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "output directory");
    sub->add_flag("--diagnostics", f.diagnostics, "write per-chart CSVs");
    sub->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
  };
  auto* classify = app.add_subcommand("classify", "corner strata and genericity verdicts");
  add_common(classify, true);
  auto* pair = app.add_subcommand("pair", "pairing sequence, asymptotic fit and existence verdict");
  add_common(pair, true);
  auto* asym = app.add_subcommand("asymptotics", "fit a pairing CSV, or run the closed-form oracle suite");
  add_common(asym, false);
  asym->add_option("--input", f.input, "pairing CSV (epsilon,re,im,err_est)")->check(CLI::ExistingFile);
  auto* weinstock = app.add_subcommand("weinstock", "Weinstock condition against dbar-closed forms");
  add_common(weinstock, true);
  auto* growth = app.add_subcommand("growth", "polynomial growth exponent near the boundary");
  add_common(growth, true);
  auto* reproduce = app.add_subcommand("reproduce-paper", "end-to-end reproduction with oracle cross-checks");
  add_common(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  bc_context* ctx = nullptr;
  if (bc_context_create(f.threads, &ctx) != BC_OK) return fail(kExitInternal, "cannot create context");
  bc_context_set_diagnostics(ctx, f.diagnostics ? 1 : 0);

  bc_scenario* scenario = nullptr;
  if (!f.scenario.empty()) {
    const int rc = load_scenario(ctx, f, &scenario);
    if (rc != 0) {
      bc_scenario_destroy(scenario);
      bc_context_destroy(ctx);
      return rc;
    }
  }

  const char* out = f.out.empty() ? nullptr : f.out.c_str();
  int exit_code = kExitInternal;
  char* report = nullptr;
  if (classify->parsed())
    bc_run_classify(ctx, scenario, out, &exit_code, &report);
  else if (pair->parsed())
    bc_run_pair(ctx, scenario, out, &exit_code, &report);
  else if (asym->parsed())
    bc_run_asymptotics(ctx, scenario, f.input.empty() ? nullptr : f.input.c_str(), out, &exit_code, &report);
  else if (weinstock->parsed())
    bc_run_weinstock(ctx, scenario, out, &exit_code, &report);
  else if (growth->parsed())
    bc_run_growth(ctx, scenario, out, &exit_code, &report);
  else if (reproduce->parsed())
    bc_run_reproduce_paper(ctx, out, &exit_code, &report);

  if (report) {
    std::fputs(report, stdout);
    std::fputs("\n", stdout);
    bc_string_free(report);
  }
  if (exit_code != 0 && *bc_last_error(ctx)) std::fprintf(stderr, "bcurrent: %s\n", bc_last_error(ctx));
  bc_scenario_destroy(scenario);
  bc_context_destroy(ctx);
  return exit_code;
}
