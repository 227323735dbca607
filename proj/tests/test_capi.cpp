// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library through its C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bcurrent/bcurrent.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Context {
  bc_context* ctx = nullptr;
  explicit Context(unsigned threads = 1) { REQUIRE(bc_context_create(threads, &ctx) == BC_OK); }
  ~Context() { bc_context_destroy(ctx); }
};

struct Scenario {
  bc_scenario* s = nullptr;
  ~Scenario() { bc_scenario_destroy(s); }
};

struct Run {
  bc_status status = BC_ERR_INTERNAL;
  int exit_code = -1;
  nlohmann::json report;
};

using Runner = bc_status (*)(bc_context*, const bc_scenario*, const char*, int*, char**);

Run run(bc_context* ctx, Runner fn, const bc_scenario* s, const fs::path& out) {
  Run r;
  char* text = nullptr;
  const std::string dir = out.string();
  r.status = fn(ctx, s, dir.c_str(), &r.exit_code, &text);
  if (text) {
    r.report = nlohmann::json::parse(text);
    bc_string_free(text);
  }
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "bcurrent_capi" / name;
  fs::remove_all(p);
  return p;
}

nlohmann::json builtin_json(bc_context* ctx, const char* name) {
  Scenario s;
  REQUIRE(bc_scenario_builtin(ctx, name, &s.s) == BC_OK);
  char* text = nullptr;
  REQUIRE(bc_scenario_to_json(ctx, s.s, &text) == BC_OK);
  auto j = nlohmann::json::parse(text);
  bc_string_free(text);
  return j;
}

bc_status load(bc_context* ctx, const nlohmann::json& j, Scenario& s) {
  return bc_scenario_load_json(ctx, j.dump().c_str(), &s.s);
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(bc_version()) > 0);
  CHECK(std::string(bc_status_name(BC_OK)) == "OK");
  CHECK(std::string(bc_status_name(BC_ERR_CONFIG_PARSE)) == "CONFIG_PARSE");
  CHECK(std::string(bc_status_name(BC_ERR_FORM_NOT_CLOSED)) == "FORM_NOT_CLOSED");
  CHECK(std::string(bc_status_name(BC_ERR_INTERNAL)) == "INTERNAL");
  CHECK(std::string(bc_status_name(static_cast<bc_status>(57))) == "UNKNOWN");
}

TEST_CASE("argument checks") {
  bc_context* ctx = nullptr;
  CHECK(bc_context_create(0, &ctx) == BC_ERR_INVALID_ARGUMENT);
  CHECK(ctx == nullptr);
  CHECK(bc_context_create(1, nullptr) == BC_ERR_INVALID_ARGUMENT);
  Context c;
  int code = 0;
  char* text = nullptr;
  CHECK(bc_run_pair(c.ctx, nullptr, nullptr, &code, &text) == BC_ERR_INVALID_ARGUMENT);
  CHECK(bc_scenario_builtin(c.ctx, nullptr, nullptr) == BC_ERR_INVALID_ARGUMENT);
  double v = 0.0;
  CHECK(bc_closed_form_I(0.0, &v) == BC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(bc_last_error(nullptr)).empty());
  bc_context_destroy(nullptr);
  bc_scenario_destroy(nullptr);
  bc_string_free(nullptr);
}

TEST_CASE("closed forms through the C API") {
  double I = 0.0, II = 0.0, re = 0.0, im = 0.0;
  REQUIRE(bc_closed_form_I(0.1, &I) == BC_OK);
  REQUIRE(bc_closed_form_II(0.1, &II) == BC_OK);
  REQUIRE(bc_closed_form_segment(0.1, &re, &im) == BC_OK);
  CHECK(I == doctest::Approx(0.7479275928080033305).epsilon(1e-12));
  CHECK(II == doctest::Approx(0.40586999501635721191).epsilon(1e-12));
  CHECK(std::abs(re - (I + II)) < 1e-10);
}

TEST_CASE("scenario loading errors") {
  Context c;
  Scenario s;
  CHECK(bc_scenario_load_json(c.ctx, "{ not json", &s.s) == BC_ERR_CONFIG_PARSE);
  CHECK(s.s == nullptr);
  CHECK(std::string(bc_last_error(c.ctx)).find("CONFIG_PARSE") != std::string::npos);
  CHECK(bc_scenario_load_file(c.ctx, "/nonexistent.json", &s.s) == BC_ERR_CONFIG_PARSE);
  CHECK(bc_scenario_builtin(c.ctx, "nope", &s.s) == BC_ERR_INVALID_ARGUMENT);
  REQUIRE(bc_scenario_builtin(c.ctx, "square", &s.s) == BC_OK);
  CHECK(std::string(bc_last_error(c.ctx)).empty());
  CHECK(bc_scenario_set_schedule(c.ctx, s.s, 0.1, 2.0, 5) == BC_ERR_INVALID_ARGUMENT);
  CHECK(bc_scenario_set_tolerance(c.ctx, s.s, -1.0) == BC_ERR_INVALID_ARGUMENT);
  CHECK(bc_scenario_set_schedule(c.ctx, s.s, 0.05, 0.5, 6) == BC_OK);
  char* text = nullptr;
  REQUIRE(bc_scenario_to_json(c.ctx, s.s, &text) == BC_OK);
  const auto j = nlohmann::json::parse(text);
  bc_string_free(text);
  CHECK(j["schedule"]["eps0"] == 0.05);
  CHECK(j["schedule"]["steps"] == 6);
}

TEST_CASE("classify writes a report") {
  Context c;
  Scenario s;
  REQUIRE(bc_scenario_builtin(c.ctx, "bidisc", &s.s) == BC_OK);
  const auto dir = scratch("classify");
  const Run r = run(c.ctx, bc_run_classify, s.s, dir);
  CHECK(r.status == BC_OK);
  CHECK(r.exit_code == 0);
  CHECK(r.report["generic_corners"] == true);
  CHECK(fs::exists(dir / "classify.json"));
}

TEST_CASE("exit 3: empty domain") {
  Context c;
  auto j = builtin_json(c.ctx, "square");
  j["domain"]["pieces"][1]["value"] = -1.0;
  Scenario s;
  const bc_status st = load(c.ctx, j, s);
  if (st == BC_OK) {
    const Run r = run(c.ctx, bc_run_classify, s.s, scratch("empty"));
    CHECK(r.status == BC_ERR_GEOMETRY_INVALID);
    CHECK(r.exit_code == 3);
    CHECK(r.report.contains("error"));
  } else {
    CHECK(st == BC_ERR_GEOMETRY_INVALID);
  }
}

TEST_CASE("exit 4: corner vector pointing inward") {
  Context c;
  auto j = builtin_json(c.ctx, "square_f=1/z");
  j["cover"]["corner_vectors"] = nlohmann::json::array({{{"coord", "z"}, {"at", {0.0, 0.0}}, {"v", {1.0, 1.0}}}});
  Scenario s;
  REQUIRE(load(c.ctx, j, s) == BC_OK);
  const Run r = run(c.ctx, bc_run_pair, s.s, scratch("inward"));
  CHECK(r.status == BC_ERR_NO_OUTWARD_VECTOR);
  CHECK(r.exit_code == 4);
}

TEST_CASE("exit 5: quadrature budget too small, CSV still written") {
  Context c;
  auto j = builtin_json(c.ctx, "square_f=1/z^2");
  j["quadrature"]["max_subdivisions"] = 20;
  j["schedule"]["steps"] = 6;
  Scenario s;
  REQUIRE(load(c.ctx, j, s) == BC_OK);
  const auto dir = scratch("budget");
  const Run r = run(c.ctx, bc_run_pair, s.s, dir);
  CHECK(r.exit_code == 5);
  CHECK(fs::exists(dir / "pairing_0.csv"));
}

TEST_CASE("exit 6: non-closed form in the Weinstock test") {
  Context c;
  Scenario s;
  REQUIRE(bc_scenario_builtin(c.ctx, "bidisc_control", &s.s) == BC_OK);
  const Run r = run(c.ctx, bc_run_weinstock, s.s, scratch("control"));
  CHECK(r.status == BC_ERR_FORM_NOT_CLOSED);
  CHECK(r.exit_code == 6);
}

TEST_CASE("exit 7: pole inside for growth") {
  Context c;
  auto j = builtin_json(c.ctx, "square_f=1");
  j["function"] = "1/(z-1-i)";
  Scenario s;
  REQUIRE(load(c.ctx, j, s) == BC_OK);
  const Run r = run(c.ctx, bc_run_growth, s.s, scratch("inside"));
  CHECK(r.status == BC_ERR_POLE_INSIDE);
  CHECK(r.exit_code == 7);
}

TEST_CASE("growth and Weinstock succeed on the shipped scenarios") {
  Context c;
  Scenario s;
  REQUIRE(bc_scenario_builtin(c.ctx, "square_f=1/z^2", &s.s) == BC_OK);
  const auto dir = scratch("growth");
  const Run g = run(c.ctx, bc_run_growth, s.s, dir);
  CHECK(g.exit_code == 0);
  CHECK(std::abs(g.report["k_hat"].get<double>() - 2.0) < 0.2);
  CHECK(fs::exists(dir / "growth.csv"));

  Scenario b;
  REQUIRE(bc_scenario_builtin(c.ctx, "bidisc", &b.s) == BC_OK);
  const Run w = run(c.ctx, bc_run_weinstock, b.s, scratch("weinstock"));
  CHECK(w.exit_code == 0);
  CHECK(w.report["verdict"] == "PASS");
}

TEST_CASE("asymptotics fits a CSV and reports too few samples") {
  Context c;
  const auto dir = scratch("asym");
  fs::create_directories(dir);
  {
    FILE* f = std::fopen((dir / "seq.csv").string().c_str(), "w");
    REQUIRE(f);
    std::fputs("epsilon,re,im,err_est\n", f);
    for (int k = 0; k < 10; ++k) {
      const double e = 0.1 * std::pow(0.5, k);
      std::fprintf(f, "%.17g,%.17g,0,0\n", e, 2.0 - std::log(e));
    }
    std::fclose(f);
  }
  int code = -1;
  char* text = nullptr;
  const std::string in = (dir / "seq.csv").string(), out = (dir / "o").string();
  CHECK(bc_run_asymptotics(c.ctx, nullptr, in.c_str(), out.c_str(), &code, &text) == BC_OK);
  CHECK(code == 0);
  auto j = nlohmann::json::parse(text);
  bc_string_free(text);
  CHECK(j["fit"]["classification"] == "LOG_DIVERGENT");

  {
    FILE* f = std::fopen((dir / "short.csv").string().c_str(), "w");
    std::fputs("epsilon,re,im\n0.1,1,0\n0.05,1,0\n", f);
    std::fclose(f);
  }
  const std::string shortin = (dir / "short.csv").string();
  CHECK(bc_run_asymptotics(c.ctx, nullptr, shortin.c_str(), out.c_str(), &code, &text) == BC_ERR_TOO_FEW_SAMPLES);
  CHECK(code == 1);
  bc_string_free(text);
}
