// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bcurrent/asymptotics.hpp"
#include "bcurrent/strata.hpp"

namespace bcurrent {

namespace fs = std::filesystem;

namespace {

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

ordered_json cplx_json(cplx c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json header(const std::string& command, const Scenario* scenario) {
  ordered_json j;
  j["tool"] = "bcurrent";
  j["version"] = BCURRENT_VERSION;
  j["command"] = command;
  if (scenario) j["scenario"] = ordered_json::parse(scenario->to_json());
  return j;
}

fs::path output_dir(const Scenario* scenario, const CommandOptions& options, const std::string& fallback) {
  fs::path p = !options.out_dir.empty()                    ? fs::path(options.out_dir)
               : (scenario && !scenario->output_dir.empty()) ? fs::path(scenario->output_dir)
                                                             : fs::path(fallback);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "cannot create output directory " + p.string());
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << content;
}

ordered_json fit_json(const AsymptoticFit& fit) {
  ordered_json j;
  j["model"] = model_name(fit.model);
  j["classification"] = classification_name(fit.classification);
  j["residual"] = fit.residual;
  j["scale"] = fit.scale;
  j["window"] = fit.window;
  ordered_json ch = ordered_json::array();
  const char* names[] = {"re", "im"};
  for (int k = 0; k < 2; ++k) {
    const ChannelFit& c = fit.channels[static_cast<std::size_t>(k)];
    ch.push_back(ordered_json{{"channel", names[k]},
                              {"model", model_name(c.model)},
                              {"a", c.a},
                              {"b", c.b},
                              {"c", c.c},
                              {"residual", c.residual},
                              {"classification", classification_name(c.classification)}});
  }
  j["channels"] = ch;
  j["limit"] = fit.limit ? cplx_json(*fit.limit) : ordered_json(nullptr);
  return j;
}

ordered_json samples_json(const std::vector<PairingSample>& samples) {
  ordered_json a = ordered_json::array();
  for (const auto& s : samples)
    a.push_back(ordered_json{{"epsilon", s.epsilon},
                             {"value", cplx_json(s.value)},
                             {"err_est", s.err_est},
                             {"cells", s.cells_used},
                             {"converged", s.converged}});
  return a;
}

ordered_json cover_json(const ChartCover& cover) {
  ordered_json charts = ordered_json::array();
  for (const auto& c : cover.charts()) {
    ordered_json v = ordered_json::array();
    for (int k = 0; k < 2 * c.dim; ++k) v.push_back(c.v[static_cast<std::size_t>(k)]);
    charts.push_back(ordered_json{{"label", c.label}, {"v", v}, {"margin", c.margin}, {"corner", c.corner}});
  }
  return ordered_json{{"partition_defect", cover.partition_defect()},
                      {"partition_samples", cover.partition_samples()},
                      {"charts", charts}};
}

std::string per_chart_csv(const std::vector<PairingSample>& samples, const ChartCover& cover) {
  std::string out = "epsilon,chart,re,im\n";
  for (const auto& s : samples)
    for (std::size_t i = 0; i < s.per_chart.size(); ++i)
      out += format_double(s.epsilon) + "," + cover.charts()[i].label + "," + format_double(s.per_chart[i].real()) +
             "," + format_double(s.per_chart[i].imag()) + "\n";
  return out;
}

ordered_json strata_json(const PiecewiseDomain& domain, const std::vector<CornerStratum>& strata) {
  ordered_json a = ordered_json::array();
  for (const auto& s : strata) {
    ordered_json pieces = ordered_json::array();
    for (int j : s.subset) {
      const auto& spec = domain.specs()[static_cast<std::size_t>(j)];
      pieces.push_back(spec.label.empty() ? std::to_string(j) : spec.label);
    }
    ordered_json e{{"pieces", pieces}, {"verdict", verdict_name(s.verdict)}, {"samples", s.samples.size()}};
    if (!s.samples.empty()) {
      ordered_json p = ordered_json::array();
      for (int k = 0; k < domain.dim(); ++k) p.push_back(cplx_json(s.samples[0][static_cast<std::size_t>(k)]));
      e["sample"] = p;
      e["real_rank"] = s.rank_data[0].real_rank;
      e["complex_rank"] = s.rank_data[0].complex_rank;
    }
    a.push_back(e);
  }
  return a;
}

struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check check_close(const std::string& name, double value, double expected, double tol) {
  return {name, value, expected, tol, std::abs(value - expected) <= tol};
}

Check check_flag(const std::string& name, bool ok) { return {name, ok ? 1.0 : 0.0, 1.0, 0.0, ok}; }

std::vector<double> default_x_grid() { return {1e-3, 1e-2, 0.1, 0.25, 0.5, 0.75, 1.0}; }
std::vector<double> default_eps_grid() { return {1e-1, 1e-2, 1e-3}; }

ordered_json antiderivatives_json(const std::vector<AntiderivativeCheck>& checks) {
  ordered_json a = ordered_json::array();
  for (const auto& c : checks)
    a.push_back(ordered_json{{"candidate", c.name},
                             {"target", c.target},
                             {"max_rel_error", c.max_rel_error},
                             {"verdict", c.pass ? "PASS" : "FAIL"}});
  return a;
}

ordered_json conflicts_json(const std::vector<OracleConflict>& conflicts) {
  ordered_json a = ordered_json::array();
  for (const auto& c : conflicts) {
    ordered_json e;
    e["quantity"] = c.quantity;
    if (c.epsilon > 0.0) e["epsilon"] = c.epsilon;
    e["as_given"] = c.as_given;
    e["rederived"] = c.rederived;
    e["quadrature"] = c.quadrature;
    e["agrees_with"] = c.agrees_with;
    a.push_back(e);
  }
  return a;
}

std::string closed_forms_csv(const std::vector<double>& epss, const QuadratureSpec& spec) {
  std::string out = "epsilon,I,II,I_plus_ln_eps,segment_re,segment_im,I_quadrature,II_quadrature\n";
  for (double e : epss) {
    const double I = closed_form_I(e), II = closed_form_II(e);
    const cplx s = closed_form_segment(e);
    out += format_double(e) + "," + format_double(I) + "," + format_double(II) + "," +
           format_double(I + std::log(e)) + "," + format_double(s.real()) + "," + format_double(s.imag()) + "," +
           format_double(quadrature_I(e, spec)) + "," + format_double(quadrature_II(e, spec)) + "\n";
  }
  return out;
}

}  // namespace

std::string pairing_csv(const std::vector<PairingSample>& samples) {
  std::string out = "epsilon,re,im,err_est\n";
  for (const auto& s : samples)
    out += format_double(s.epsilon) + "," + format_double(s.value.real()) + "," + format_double(s.value.imag()) +
           "," + format_double(s.err_est) + "\n";
  return out;
}

std::vector<PairingSample> parse_pairing_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ConfigParse, "empty pairing CSV");
  if (line.rfind("epsilon,re,im", 0) != 0) throw Error(ErrorCode::ConfigParse, "pairing CSV header must start with epsilon,re,im");
  std::vector<PairingSample> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigParse, "pairing CSV row " + std::to_string(row) + ": bad number '" + cell + "'");
      }
    }
    if (v.size() < 3) throw Error(ErrorCode::ConfigParse, "pairing CSV row " + std::to_string(row) + ": too few columns");
    if (!(v[0] > 0.0)) throw Error(ErrorCode::ConfigParse, "pairing CSV row " + std::to_string(row) + ": epsilon must be positive");
    PairingSample s;
    s.epsilon = v[0];
    s.value = {v[1], v[2]};
    if (v.size() > 3) s.err_est = v[3];
    out.push_back(s);
  }
  return out;
}

int exit_code_for(ErrorCode code, const std::string& command) {
  switch (code) {
    case ErrorCode::ConfigParse: return kExitConfig;
    case ErrorCode::GeometryInvalid:
    case ErrorCode::OutsideDomain: return kExitGeometry;
    case ErrorCode::NoOutwardVector:
    case ErrorCode::CoverIncomplete: return kExitNoOutwardVector;
    case ErrorCode::BudgetExceeded: return kExitBudget;
    case ErrorCode::InvalidArgument:
    case ErrorCode::TooFewSamples: return kExitUsage;
    default: break;
  }
  if (command == "weinstock") return kExitWeinstock;
  if (command == "growth") return kExitGrowth;
  if (code == ErrorCode::Unsupported || code == ErrorCode::PoleInside || code == ErrorCode::PoleOnBoundary)
    return kExitGeometry;
  return kExitInternal;
}

CommandResult cmd_classify(const Scenario& scenario, const CommandOptions& options) {
  const PiecewiseDomain domain = scenario.domain();
  std::vector<std::string> log;
  const auto strata = classify_domain(domain, StrataOptions{}, &log);
  CommandResult r;
  r.report = header("classify", &scenario);
  r.report["strata"] = strata_json(domain, strata);
  int nonempty = 0;
  for (const auto& s : strata) nonempty += s.verdict != Verdict::Empty;
  r.report["nonempty_strata"] = nonempty;
  const bool generic = has_generic_corners(strata);
  r.report["generic_corners"] = generic;
  r.report["domain_verdict"] = generic ? "generic corners" : "non-generic corners";
  r.report["log"] = log;
  write_file(output_dir(&scenario, options, ".") / "classify.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_pair(const Scenario& scenario, const CommandOptions& options) {
  const PiecewiseDomain domain = scenario.domain();
  const HolomorphicFunction f = scenario.holomorphic();
  const auto forms = scenario.test_forms();
  if (forms.empty()) throw Error(ErrorCode::ConfigParse, "scenario has no test forms");
  if (scenario.schedule.eps0 > 0.1 * domain.diameter())
    throw Error(ErrorCode::InvalidArgument, "eps0 must not exceed 0.1 times the domain diameter");
  const ChartCover cover = build_chart_cover(domain, scenario.cover);
  const fs::path dir = output_dir(&scenario, options, ".");

  CommandResult r;
  r.report = header("pair", &scenario);
  r.report["cover"] = cover_json(cover);
  ordered_json entries = ordered_json::array();
  std::vector<AsymptoticFit> fits;
  bool converged = true;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const auto seq = pairing_sequence(domain, f, forms[i], cover, scenario.schedule, scenario.quadrature, options.threads);
    const std::string csv = "pairing_" + std::to_string(i) + ".csv";
    write_file(dir / csv, pairing_csv(seq));
    if (options.diagnostics)
      write_file(dir / ("pairing_" + std::to_string(i) + "_charts.csv"), per_chart_csv(seq, cover));
    ordered_json e;
    e["form"] = forms[i].label;
    e["csv"] = csv;
    e["samples"] = samples_json(seq);
    for (const auto& s : seq) converged = converged && s.converged;
    if (seq.size() >= 6) {
      fits.push_back(fit_models(seq, scenario.fit_window));
      e["fit"] = fit_json(fits.back());
    } else {
      e["fit"] = nullptr;
    }
    if (domain.dim() == 1) {
      try {
        const StokesResult st = stokes_oracle(domain, f, forms[i], scenario.quadrature);
        e["stokes"] = ordered_json{{"status", "OK"}, {"value", cplx_json(st.value)}, {"err_est", st.integral.err_est}};
        if (fits.size() && fits.back().limit)
          e["stokes"]["limit_difference"] = std::abs(*fits.back().limit - st.value);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::NotL1) throw;
        e["stokes"] = ordered_json{{"status", "NOT_L1"}};
      }
    }
    entries.push_back(e);
  }
  r.report["forms"] = entries;
  r.report["existence"] = existence_name(classify_bc_existence(fits));
  r.report["converged"] = converged;
  if (!converged) {
    r.exit_code = kExitBudget;
    r.report["error"] = ordered_json{{"code", "BUDGET_EXCEEDED"}, {"message", "quadrature budget exhausted; partial results written"}};
  }
  write_file(dir / "pair.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_asymptotics(const Scenario* scenario, const CommandOptions& options) {
  CommandResult r;
  r.report = header("asymptotics", scenario);
  const fs::path dir = output_dir(scenario, options, ".");
  if (!options.input.empty()) {
    std::ifstream in(options.input);
    if (!in) throw Error(ErrorCode::ConfigParse, "cannot read " + options.input);
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto samples = parse_pairing_csv(ss.str());
    const AsymptoticFit fit = fit_models(samples, scenario ? scenario->fit_window : 8);
    r.report["input"] = options.input;
    r.report["fit"] = fit_json(fit);
    r.report["existence"] = existence_name(classify_bc_existence({fit}));
  } else {
    const QuadratureSpec spec = scenario ? scenario->quadrature : QuadratureSpec{};
    r.report["antiderivatives"] = antiderivatives_json(verify_antiderivatives(default_x_grid(), default_eps_grid()));
    const std::vector<double> epss{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    write_file(dir / "closed_forms.csv", closed_forms_csv(epss, spec));
    r.report["closed_forms_csv"] = "closed_forms.csv";
    r.report["oracle_conflicts"] = conflicts_json(oracle_conflicts(spec));
  }
  write_file(dir / "asymptotics.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_weinstock(const Scenario& scenario, const CommandOptions& options) {
  const PiecewiseDomain domain = scenario.domain();
  const HolomorphicFunction f = scenario.holomorphic();
  const auto forms = scenario.weinstock_test_forms();
  std::optional<ChartCover> cover;
  if (pole_distance_to_closure(f, domain) <= 1e-9) cover = build_chart_cover(domain, scenario.cover);
  WeinstockOptions wo;
  wo.schedule = scenario.schedule;
  wo.threads = options.threads;
  const WeinstockReport rep = weinstock_test(domain, f, forms, cover ? &*cover : nullptr, scenario.quadrature, wo);
  CommandResult r;
  r.report = header("weinstock", &scenario);
  r.report["route"] = rep.route;
  r.report["scale"] = rep.scale;
  r.report["tolerance"] = rep.tolerance;
  ordered_json entries = ordered_json::array();
  for (const auto& e : rep.entries)
    entries.push_back(ordered_json{{"form", e.label},
                                   {"closed", e.closed},
                                   {"closure_defect", e.closure_defect},
                                   {"pairing", cplx_json(e.pairing)},
                                   {"abs", std::abs(e.pairing)},
                                   {"err_est", e.err_est},
                                   {"converged", e.converged}});
  r.report["entries"] = entries;
  r.report["verdict"] = rep.pass ? "PASS" : "FAIL";
  if (!rep.pass) r.exit_code = kExitWeinstock;
  write_file(output_dir(&scenario, options, ".") / "weinstock.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_growth(const Scenario& scenario, const CommandOptions& options) {
  const PiecewiseDomain domain = scenario.domain();
  const HolomorphicFunction f = scenario.holomorphic();
  const GrowthEstimate g = estimate_growth(f, domain, scenario.growth_rays);
  CommandResult r;
  r.report = header("growth", &scenario);
  r.report["k_hat"] = g.k_hat;
  r.report["C_hat"] = g.C_hat;
  r.report["r2"] = g.r2;
  r.report["samples_used"] = g.samples_used;
  const fs::path dir = output_dir(&scenario, options, ".");
  std::string csv = "distance,envelope\n";
  for (std::size_t i = 0; i < g.distances.size(); ++i)
    csv += format_double(g.distances[i]) + "," + format_double(g.envelope[i]) + "\n";
  write_file(dir / "growth.csv", csv);
  r.report["csv"] = "growth.csv";
  write_file(dir / "growth.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult cmd_reproduce_paper(const CommandOptions& options) {
  const fs::path dir = output_dir(nullptr, options, "reproduce");
  const double kPi = std::numbers::pi;
  CommandResult r;
  r.report = header("reproduce-paper", nullptr);
  std::vector<Check> checks;
  std::ostringstream text;
  text << "bcurrent " << BCURRENT_VERSION << " reproduce-paper\n\n";

  // 1. Corner strata of the square.
  {
    const Scenario s = builtin_scenario("square");
    const PiecewiseDomain domain = s.domain();
    const auto strata = classify_domain(domain, StrataOptions{});
    int nonempty = 0, cardinality = 0;
    for (const auto& st : strata) {
      nonempty += st.verdict != Verdict::Empty;
      cardinality += st.verdict == Verdict::NonGenericCardinality;
    }
    r.report["classify_square"] = ordered_json{{"strata", strata_json(domain, strata)},
                                               {"domain_verdict", has_generic_corners(strata) ? "generic corners" : "non-generic corners"}};
    checks.push_back(check_flag("square: 4 corner strata, all NON_GENERIC_CARDINALITY", nonempty == 4 && cardinality == 4));
    text << "[1] square corner strata: " << nonempty << " nonempty, " << cardinality << " NON_GENERIC_CARDINALITY\n";
  }

  // 2. Antiderivative candidates.
  {
    const auto ad = verify_antiderivatives(default_x_grid(), default_eps_grid());
    r.report["antiderivatives"] = antiderivatives_json(ad);
    text << "[2] antiderivative candidates (5-point differences, FAIL above 1e-5):\n";
    for (const auto& c : ad) {
      text << "    " << c.name << " max rel error " << format_double(c.max_rel_error) << " " << (c.pass ? "PASS" : "FAIL") << "\n";
      if (c.name == "I.rederived" || c.name == "II.rederived") checks.push_back(check_flag(c.name + " passes", c.pass));
      if (c.name == "II.as_given") checks.push_back(check_flag("II.as_given flagged inconsistent", !c.pass));
    }
  }

  // 3. Closed-form tables.
  {
    const QuadratureSpec spec;
    const std::vector<double> epss{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    write_file(dir / "closed_forms.csv", closed_forms_csv(epss, spec));
    const double c_inf = -(0.5 * std::log(2.0) + kPi / 2.0);
    const double e4 = 1e-4;
    checks.push_back(check_close("I(1e-4) + ln(1e-4) vs -(ln2/2 + pi/2)", closed_form_I(e4) + std::log(e4), c_inf, 1e-3));
    for (double e : {1e-1, 1e-2}) {
      const double lhs = closed_form_segment(e).real(), rhs = closed_form_I(e) + closed_form_II(e);
      checks.push_back(check_close("Re segment = I + II at eps " + eps_label(e), lhs, rhs, 1e-10));
    }
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double I = closed_form_I(e), II = closed_form_II(e);
      checks.push_back(check_close("quadrature I at eps " + eps_label(e), quadrature_I(e, spec), I, 1e-8 * std::abs(I)));
      checks.push_back(check_close("quadrature II at eps " + eps_label(e), quadrature_II(e, spec), II, 1e-8 * std::abs(II)));
    }
    text << "[3] closed forms written to closed_forms.csv; I(1e-4) + ln(1e-4) = "
         << format_double(closed_form_I(e4) + std::log(e4)) << " (limit " << format_double(c_inf) << ")\n";
  }

  // 4. Counterexample pairing.
  {
    const Scenario s = builtin_scenario("square_f=1/z^2");
    const PiecewiseDomain domain = s.domain();
    const ChartCover cover = build_chart_cover(domain, s.cover);
    const auto seq = pairing_sequence(domain, s.holomorphic(), s.test_forms()[0], cover, s.schedule, s.quadrature,
                                      options.threads);
    write_file(dir / "pairing_square_f_inv_z2.csv", pairing_csv(seq));
    const AsymptoticFit fit = fit_models(seq, s.fit_window);
    r.report["square_f_inv_z2"] = ordered_json{{"scenario", ordered_json::parse(s.to_json())},
                                              {"fit", fit_json(fit)},
                                              {"existence", existence_name(classify_bc_existence({fit}))}};
    checks.push_back(check_flag("square 1/z^2: real channel LOG_DIVERGENT",
                                fit.channels[0].classification == Classification::LogDivergent));
    checks.push_back(check_close("square 1/z^2: fitted ln(eps) coefficient", fit.channels[0].b, -1.0, 0.05));
    const std::size_t n = seq.size();
    for (std::size_t k = n - 4; k < n; ++k) {
      const double d = seq[k].value.real() - seq[k - 1].value.real();
      checks.push_back(check_close("square 1/z^2: Re F(eps/2) - Re F(eps) at eps " + eps_label(seq[k - 1].epsilon),
                                   d, std::log(2.0), 0.05 * std::log(2.0)));
    }
    bool conv = true;
    for (const auto& x : seq) conv = conv && x.converged;
    checks.push_back(check_flag("square 1/z^2: all quadratures converged", conv));
    text << "[4] square, f = 1/z^2, psi = x dz: real channel " << classification_name(fit.channels[0].classification)
         << ", b = " << format_double(fit.channels[0].b) << "; bc f "
         << existence_name(classify_bc_existence({fit})) << "\n";
  }

  // 5. II limit by quadrature.
  {
    std::vector<PairingSample> ii;
    for (int k = 0; k < 10; ++k) {
      PairingSample p;
      p.epsilon = 1e-2 * std::ldexp(1.0, -k);
      p.value = quadrature_II(p.epsilon);
      ii.push_back(p);
    }
    write_file(dir / "ii_sequence.csv", pairing_csv(ii));
    const double lim = richardson_limit(ii).real();
    const double at4 = quadrature_II(1e-4);
    const auto conflicts = oracle_conflicts();
    r.report["ii_limit"] = ordered_json{{"richardson_limit", lim},
                                        {"as_given_limit", kPi / 2.0},
                                        {"rederived_limit", kPi / 2.0 - 1.0},
                                        {"quadrature_at_1e-4", at4}};
    r.report["oracle_conflicts"] = conflicts_json(conflicts);
    checks.push_back(check_close("II quadrature at 1e-4 vs Richardson limit", at4, lim, 1e-3));
    checks.push_back(check_close("II Richardson limit vs pi/2 - 1", lim, kPi / 2.0 - 1.0, 1e-6));
    text << "[5] II limit: quadrature/Richardson " << format_double(lim) << ", as given " << format_double(kPi / 2.0)
         << ", re-derived " << format_double(kPi / 2.0 - 1.0) << "\n";
    for (const auto& c : conflicts)
      text << "    " << c.quantity << (c.epsilon > 0.0 ? " at eps " + eps_label(c.epsilon) : std::string())
           << ": as given " << format_double(c.as_given) << ", re-derived " << format_double(c.rederived)
           << ", quadrature " << format_double(c.quadrature) << " -> " << c.agrees_with << "\n";
  }

  // 6. Omega x C.
  {
    const Scenario s = builtin_scenario("square-cross-plane");
    const PiecewiseDomain domain = s.domain();
    const auto strata = classify_domain(domain, StrataOptions{});
    bool complex_rank = false;
    for (const auto& st : strata) complex_rank = complex_rank || st.verdict == Verdict::NonGenericComplexRank;
    const ChartCover cover = build_chart_cover(domain, s.cover);
    const auto seq = pairing_sequence(domain, s.holomorphic(), s.test_forms()[0], cover, s.schedule, s.quadrature,
                                      options.threads);
    write_file(dir / "pairing_square-cross-plane.csv", pairing_csv(seq));
    const AsymptoticFit fit = fit_models(seq, s.fit_window);
    const Existence ex = classify_bc_existence({fit});
    r.report["square_cross_plane"] = ordered_json{{"scenario", ordered_json::parse(s.to_json())},
                                                  {"strata", strata_json(domain, strata)},
                                                  {"fit", fit_json(fit)},
                                                  {"existence", existence_name(ex)}};
    checks.push_back(check_flag("Omega x C: NON_GENERIC_COMPLEX_RANK stratum", complex_rank));
    checks.push_back(check_flag("Omega x C: bc f FAILS_NUMERICALLY", ex == Existence::FailsNumerically));
    text << "[6] Omega x C, f = 1/z1^2: " << classification_name(fit.classification) << ", bc f " << existence_name(ex) << "\n";
  }

  ordered_json cj = ordered_json::array();
  bool all = true;
  text << "\nchecks:\n";
  for (const auto& c : checks) {
    cj.push_back(ordered_json{{"name", c.name}, {"value", c.value}, {"expected", c.expected}, {"tolerance", c.tolerance},
                              {"pass", c.pass}});
    all = all && c.pass;
    text << (c.pass ? "  PASS " : "  FAIL ") << c.name << " (value " << format_double(c.value) << ")\n";
  }
  r.report["checks"] = cj;
  r.report["verdict"] = all ? "PASS" : "FAIL";
  text << "\nverdict: " << (all ? "PASS" : "FAIL") << "\n";
  if (!all) r.exit_code = kExitReproduce;
  write_file(dir / "report.txt", text.str());
  write_file(dir / "report.json", r.report.dump(2) + "\n");
  return r;
}

CommandResult run_command(const std::string& command, const Scenario* scenario, const CommandOptions& options) {
  try {
    if (command == "reproduce-paper") return cmd_reproduce_paper(options);
    if (command == "asymptotics") return cmd_asymptotics(scenario, options);
    if (!scenario) throw Error(ErrorCode::InvalidArgument, command + " needs a scenario");
    if (command == "classify") return cmd_classify(*scenario, options);
    if (command == "pair") return cmd_pair(*scenario, options);
    if (command == "weinstock") return cmd_weinstock(*scenario, options);
    if (command == "growth") return cmd_growth(*scenario, options);
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e.code(), command);
    r.error = e.code();
    r.report = header(command, scenario);
    r.report["error"] = ordered_json{{"code", error_code_name(e.code())}, {"message", e.what()}};
    return r;
  } catch (const std::exception& e) {
    CommandResult r;
    r.exit_code = kExitInternal;
    r.internal_error = true;
    r.report = header(command, scenario);
    r.report["error"] = ordered_json{{"code", "INTERNAL"}, {"message", e.what()}};
    return r;
  }
}

}  // namespace bcurrent
