// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/scenario.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bcurrent {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigParse, where + ": " + what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(where, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) bad(where, "unknown key '" + k + "'");
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where, std::string("missing '") + key + "'");
  return j.at(key);
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

cplx complex_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where, "expected [re, im]");
  return {num(j[0], where), num(j[1], where)};
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

int coord_of(const json& j, int dim, const std::string& where) {
  const std::string s = str(j, where);
  if (dim == 1 && (s == "z" || s == "z1")) return 0;
  if (dim == 2 && s == "z1") return 0;
  if (dim == 2 && s == "z2") return 1;
  bad(where, "unknown coordinate '" + s + "'");
}

std::string coord_name(int k, int dim) { return dim == 1 ? "z" : (k == 0 ? "z1" : "z2"); }

int axis_of(const std::string& s, int dim, const std::string& where) {
  if (dim == 1) {
    if (s == "x") return 0;
    if (s == "y") return 1;
  } else {
    static const char* names[] = {"x1", "y1", "x2", "y2"};
    for (int a = 0; a < 4; ++a)
      if (s == names[a]) return a;
  }
  bad(where, "unknown real coordinate '" + s + "'");
}

std::string axis_name(int a, int dim) {
  if (dim == 1) return a == 0 ? "x" : "y";
  static const char* names[] = {"x1", "y1", "x2", "y2"};
  return names[a];
}

PieceSpec piece_of(const json& j, int dim, const std::string& where) {
  PieceSpec p;
  const std::string kind = str(need(j, "kind", where), where + ".kind");
  if (kind == "halfplane") {
    allow_keys(j, where, {"kind", "normal", "offset", "scale", "label"});
    p.kind = PieceKind::HalfPlane;
    const json& n = need(j, "normal", where);
    if (!n.is_array() || static_cast<int>(n.size()) != 2 * dim) bad(where + ".normal", "expected 2n numbers");
    for (int a = 0; a < 2 * dim; ++a) p.normal[static_cast<std::size_t>(a)] = num(n[static_cast<std::size_t>(a)], where + ".normal");
    p.offset = num(need(j, "offset", where), where + ".offset");
  } else if (kind == "box-side") {
    allow_keys(j, where, {"kind", "coord", "bound", "value", "scale", "label"});
    p.kind = PieceKind::BoxSide;
    p.axis = axis_of(str(need(j, "coord", where), where + ".coord"), dim, where + ".coord");
    const std::string b = str(need(j, "bound", where), where + ".bound");
    if (b != "lower" && b != "upper") bad(where + ".bound", "expected 'lower' or 'upper'");
    p.upper = b == "upper";
    p.value = num(need(j, "value", where), where + ".value");
  } else if (kind == "disc" || kind == "polydisc-factor") {
    allow_keys(j, where, {"kind", "coord", "center", "radius", "scale", "label"});
    p.kind = kind == "disc" ? PieceKind::Disc : PieceKind::PolydiscFactor;
    if (j.contains("coord"))
      p.coord = coord_of(j.at("coord"), dim, where + ".coord");
    else if (kind == "polydisc-factor")
      bad(where, "missing 'coord'");
    p.center = complex_of(need(j, "center", where), where + ".center");
    p.radius = num(need(j, "radius", where), where + ".radius");
  } else {
    bad(where + ".kind", "unknown piece kind '" + kind + "'");
  }
  if (j.contains("scale")) p.scale = num(j.at("scale"), where + ".scale");
  if (j.contains("label")) p.label = str(j.at("label"), where + ".label");
  return p;
}

json piece_json(const PieceSpec& p, int dim) {
  json j;
  switch (p.kind) {
    case PieceKind::HalfPlane: {
      j["kind"] = "halfplane";
      json n = json::array();
      for (int a = 0; a < 2 * dim; ++a) n.push_back(p.normal[static_cast<std::size_t>(a)]);
      j["normal"] = n;
      j["offset"] = p.offset;
      break;
    }
    case PieceKind::BoxSide:
      j["kind"] = "box-side";
      j["coord"] = axis_name(p.axis, dim);
      j["bound"] = p.upper ? "upper" : "lower";
      j["value"] = p.value;
      break;
    case PieceKind::Disc:
    case PieceKind::PolydiscFactor:
      j["kind"] = p.kind == PieceKind::Disc ? "disc" : "polydisc-factor";
      j["coord"] = coord_name(p.coord, dim);
      j["center"] = complex_json(p.center);
      j["radius"] = p.radius;
      break;
  }
  j["scale"] = p.scale;
  if (!p.label.empty()) j["label"] = p.label;
  return j;
}

Cutoff cutoff_of(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of cutoff factors");
  Cutoff c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    allow_keys(j[i], w, {"coord", "center", "inner", "outer"});
    Cutoff::Factor f;
    f.coord = coord_of(need(j[i], "coord", w), dim, w + ".coord");
    f.center = complex_of(need(j[i], "center", w), w + ".center");
    f.inner = num(need(j[i], "inner", w), w + ".inner");
    f.outer = num(need(j[i], "outer", w), w + ".outer");
    c.factors.push_back(f);
  }
  try {
    c.validate(dim);
  } catch (const Error& e) {
    bad(where, e.what());
  }
  return c;
}

json cutoff_json(const Cutoff& c, int dim) {
  json a = json::array();
  for (const auto& f : c.factors)
    a.push_back(json{{"coord", coord_name(f.coord, dim)}, {"center", complex_json(f.center)}, {"inner", f.inner},
                     {"outer", f.outer}});
  return a;
}

std::vector<FormSpec> forms_of(const json& j, int dim, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of forms");
  std::vector<FormSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    allow_keys(j[i], w, {"label", "coefficients", "cutoff"});
    FormSpec f;
    if (j[i].contains("label")) f.label = str(j[i].at("label"), w + ".label");
    const json& c = need(j[i], "coefficients", w);
    if (!c.is_array() || c.empty() || static_cast<int>(c.size()) > dim) bad(w + ".coefficients", "expected 1..n strings");
    for (const auto& s : c) f.coefficients.push_back(str(s, w + ".coefficients"));
    if (j[i].contains("cutoff")) f.cutoff = cutoff_of(j[i].at("cutoff"), dim, w + ".cutoff");
    out.push_back(f);
  }
  return out;
}

json forms_json(const std::vector<FormSpec>& forms, int dim) {
  json a = json::array();
  for (const auto& f : forms) {
    json j;
    j["label"] = f.label;
    j["coefficients"] = f.coefficients;
    j["cutoff"] = cutoff_json(f.cutoff, dim);
    a.push_back(j);
  }
  return a;
}

PieceSpec box_side(int axis, bool upper, double value, const std::string& label) {
  PieceSpec p;
  p.kind = PieceKind::BoxSide;
  p.axis = axis;
  p.upper = upper;
  p.value = value;
  p.label = label;
  return p;
}

PieceSpec polydisc(int coord, const std::string& label) {
  PieceSpec p;
  p.kind = PieceKind::PolydiscFactor;
  p.coord = coord;
  p.center = 0.0;
  p.radius = 1.0;
  p.label = label;
  return p;
}

Scenario square(const std::string& name, const std::string& f) {
  Scenario s;
  s.name = name;
  s.dim = 1;
  s.pieces = {box_side(0, false, 0.0, "x>0"), box_side(0, true, 2.0, "x<2"), box_side(1, false, 0.0, "y>0"),
              box_side(1, true, 2.0, "y<2")};
  s.bounding_box = Box{{-0.5, -0.5, 0, 0}, {2.5, 2.5, 0, 0}};
  s.function = f;
  Cutoff corner;
  corner.factors.push_back({0, cplx(0.0, 0.0), 1.0, 1.5});
  Cutoff whole;
  whole.factors.push_back({0, cplx(1.0, 1.0), 2.0, 3.0});
  s.forms = {{"x dz", {"x"}, f == "1" ? whole : corner}};
  for (int k = 0; k <= 5; ++k) {
    const std::string c = k == 0 ? "1" : k == 1 ? "z" : "z^" + std::to_string(k);
    s.weinstock_forms.push_back({c + " dz", {c}, whole});
  }
  s.output_dir = "out/" + sanitize_name(name);
  return s;
}

Scenario bidisc(bool control) {
  Scenario s;
  s.name = control ? "bidisc_control" : "bidisc";
  s.dim = 2;
  s.pieces = {polydisc(0, "|z1|<1"), polydisc(1, "|z2|<1")};
  s.function = control ? "1" : "z1*z2 + 2*z1 - 1";
  Cutoff c;
  c.factors.push_back({0, cplx(0.0), 1.5, 2.0});
  c.factors.push_back({1, cplx(0.0), 1.5, 2.0});
  const FormSpec a{"zb1 z2 dz1^dz2^dzb1", {"zb1*z2", "0"}, c};
  const FormSpec b{"zb2 dz1^dz2^dzb2", {"0", "zb2"}, c};
  const FormSpec ctl{"zb2 dz1^dz2^dzb1", {"zb2", "0"}, c};
  s.forms = {a, b};
  s.weinstock_forms = control ? std::vector<FormSpec>{ctl} : std::vector<FormSpec>{a, b};
  s.schedule.steps = 8;
  s.quadrature.rel_tol = 1e-8;
  s.quadrature.abs_tol = 1e-10;
  s.quadrature.max_subdivisions = 1000000;
  s.output_dir = "out/" + s.name;
  return s;
}

Scenario square_cross_plane() {
  Scenario s;
  s.name = "square-cross-plane";
  s.dim = 2;
  s.pieces = {box_side(0, false, 0.0, "x1>0"), box_side(0, true, 2.0, "x1<2"), box_side(1, false, 0.0, "y1>0"),
              box_side(1, true, 2.0, "y1<2")};
  s.bounding_box = Box{{-0.5, -0.5, -2.0, -2.0}, {2.5, 2.5, 2.0, 2.0}};
  s.function = "1/z1^2";
  Cutoff c;
  c.factors.push_back({0, cplx(0.0), 1.0, 1.5});
  c.factors.push_back({1, cplx(0.0), 1.0, 1.5});
  s.forms = {{"x1 dz1^dz2^dzb2", {"0", "x1"}, c}};
  s.schedule.steps = 8;
  s.quadrature.rel_tol = 1e-6;
  s.quadrature.abs_tol = 1e-9;
  s.quadrature.max_subdivisions = 400000;
  s.output_dir = "out/square-cross-plane";
  return s;
}

}  // namespace

Scenario Scenario::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, std::string("malformed JSON: ") + e.what());
  }
  allow_keys(j, "scenario",
             {"name", "dim", "domain", "function", "forms", "weinstock_forms", "cover", "schedule", "quadrature",
              "asymptotics", "growth", "output"});
  Scenario s;
  s.name = str(need(j, "name", "scenario"), "name");
  s.dim = j.contains("dim") ? integer(j.at("dim"), "dim") : 1;
  if (s.dim < 1 || s.dim > 2) bad("dim", "must be 1 or 2");

  const json& d = need(j, "domain", "scenario");
  allow_keys(d, "domain", {"pieces", "bounding_box"});
  const json& pieces = need(d, "pieces", "domain");
  if (!pieces.is_array() || pieces.empty()) bad("domain.pieces", "expected a nonempty list");
  for (std::size_t i = 0; i < pieces.size(); ++i)
    s.pieces.push_back(piece_of(pieces[i], s.dim, "domain.pieces[" + std::to_string(i) + "]"));
  if (d.contains("bounding_box")) {
    const json& b = d.at("bounding_box");
    allow_keys(b, "domain.bounding_box", {"lo", "hi"});
    Box box;
    for (const char* key : {"lo", "hi"}) {
      const json& a = need(b, key, "domain.bounding_box");
      if (!a.is_array() || static_cast<int>(a.size()) != 2 * s.dim) bad(std::string("domain.bounding_box.") + key, "expected 2n numbers");
      RVec& r = std::string(key) == "lo" ? box.lo : box.hi;
      for (int k = 0; k < 2 * s.dim; ++k) r[static_cast<std::size_t>(k)] = num(a[static_cast<std::size_t>(k)], "domain.bounding_box");
    }
    s.bounding_box = box;
  }

  if (j.contains("function")) s.function = str(j.at("function"), "function");
  if (j.contains("forms")) s.forms = forms_of(j.at("forms"), s.dim, "forms");
  if (j.contains("weinstock_forms")) s.weinstock_forms = forms_of(j.at("weinstock_forms"), s.dim, "weinstock_forms");

  if (j.contains("cover")) {
    const json& c = j.at("cover");
    allow_keys(c, "cover", {"corner_radius", "arc_pieces_per_circle", "min_validation_samples", "corner_vectors"});
    if (c.contains("corner_radius")) s.cover.corner_radius = num(c.at("corner_radius"), "cover.corner_radius");
    if (c.contains("arc_pieces_per_circle"))
      s.cover.arc_pieces_per_circle = integer(c.at("arc_pieces_per_circle"), "cover.arc_pieces_per_circle");
    if (c.contains("min_validation_samples"))
      s.cover.min_validation_samples = integer(c.at("min_validation_samples"), "cover.min_validation_samples");
    if (c.contains("corner_vectors")) {
      const json& cv = c.at("corner_vectors");
      if (!cv.is_array()) bad("cover.corner_vectors", "expected a list");
      for (std::size_t i = 0; i < cv.size(); ++i) {
        const std::string w = "cover.corner_vectors[" + std::to_string(i) + "]";
        allow_keys(cv[i], w, {"coord", "at", "v"});
        CoverOptions::CornerVector v;
        v.coord = coord_of(need(cv[i], "coord", w), s.dim, w + ".coord");
        v.at = complex_of(need(cv[i], "at", w), w + ".at");
        v.v = complex_of(need(cv[i], "v", w), w + ".v");
        s.cover.corner_vectors.push_back(v);
      }
    }
    if (!(s.cover.corner_radius > 0.0)) bad("cover.corner_radius", "must be positive");
    if (s.cover.arc_pieces_per_circle < 1) bad("cover.arc_pieces_per_circle", "must be positive");
  }
  if (j.contains("schedule")) {
    const json& c = j.at("schedule");
    allow_keys(c, "schedule", {"eps0", "ratio", "steps"});
    if (c.contains("eps0")) s.schedule.eps0 = num(c.at("eps0"), "schedule.eps0");
    if (c.contains("ratio")) s.schedule.ratio = num(c.at("ratio"), "schedule.ratio");
    if (c.contains("steps")) s.schedule.steps = integer(c.at("steps"), "schedule.steps");
    try {
      s.schedule.validate();
    } catch (const Error& e) {
      bad("schedule", e.what());
    }
  }
  if (j.contains("quadrature")) {
    const json& c = j.at("quadrature");
    allow_keys(c, "quadrature", {"rel_tol", "abs_tol", "max_subdivisions", "corner_refine_depth"});
    if (c.contains("rel_tol")) s.quadrature.rel_tol = num(c.at("rel_tol"), "quadrature.rel_tol");
    if (c.contains("abs_tol")) s.quadrature.abs_tol = num(c.at("abs_tol"), "quadrature.abs_tol");
    if (c.contains("max_subdivisions"))
      s.quadrature.max_subdivisions = integer(c.at("max_subdivisions"), "quadrature.max_subdivisions");
    if (c.contains("corner_refine_depth"))
      s.quadrature.corner_refine_depth = integer(c.at("corner_refine_depth"), "quadrature.corner_refine_depth");
    try {
      s.quadrature.validate();
    } catch (const Error& e) {
      bad("quadrature", e.what());
    }
  }
  if (j.contains("asymptotics")) {
    allow_keys(j.at("asymptotics"), "asymptotics", {"window"});
    if (j.at("asymptotics").contains("window")) s.fit_window = integer(j.at("asymptotics").at("window"), "asymptotics.window");
    if (s.fit_window < 3) bad("asymptotics.window", "must be at least 3");
  }
  if (j.contains("growth")) {
    allow_keys(j.at("growth"), "growth", {"rays"});
    if (j.at("growth").contains("rays")) s.growth_rays = integer(j.at("growth").at("rays"), "growth.rays");
    if (s.growth_rays < 1) bad("growth.rays", "must be positive");
  }
  if (j.contains("output")) {
    allow_keys(j.at("output"), "output", {"dir"});
    if (j.at("output").contains("dir")) s.output_dir = str(j.at("output").at("dir"), "output.dir");
  }
  try {
    make_function(s.function, s.dim);
  } catch (const Error& e) {
    bad("function", e.what());
  }
  for (const auto* list : {&s.forms, &s.weinstock_forms})
    for (const FormSpec& f : *list) {
      try {
        make_form(f, s.dim);
      } catch (const Error& e) {
        bad("form " + f.label, e.what());
      }
    }
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot read scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string Scenario::to_json(int indent) const {
  json j;
  j["name"] = name;
  j["dim"] = dim;
  json d;
  json pieces = json::array();
  for (const auto& p : this->pieces) pieces.push_back(piece_json(p, dim));
  d["pieces"] = pieces;
  if (bounding_box) {
    json lo = json::array(), hi = json::array();
    for (int k = 0; k < 2 * dim; ++k) {
      lo.push_back(bounding_box->lo[static_cast<std::size_t>(k)]);
      hi.push_back(bounding_box->hi[static_cast<std::size_t>(k)]);
    }
    d["bounding_box"] = json{{"lo", lo}, {"hi", hi}};
  }
  j["domain"] = d;
  j["function"] = function;
  j["forms"] = forms_json(forms, dim);
  if (!weinstock_forms.empty()) j["weinstock_forms"] = forms_json(weinstock_forms, dim);
  json cv = json::array();
  for (const auto& v : cover.corner_vectors)
    cv.push_back(json{{"coord", coord_name(v.coord, dim)}, {"at", complex_json(v.at)}, {"v", complex_json(v.v)}});
  j["cover"] = json{{"corner_radius", cover.corner_radius},
                    {"arc_pieces_per_circle", cover.arc_pieces_per_circle},
                    {"min_validation_samples", cover.min_validation_samples},
                    {"corner_vectors", cv}};
  j["schedule"] = json{{"eps0", schedule.eps0}, {"ratio", schedule.ratio}, {"steps", schedule.steps}};
  j["quadrature"] = json{{"rel_tol", quadrature.rel_tol},
                         {"abs_tol", quadrature.abs_tol},
                         {"max_subdivisions", quadrature.max_subdivisions},
                         {"corner_refine_depth", quadrature.corner_refine_depth}};
  j["asymptotics"] = json{{"window", fit_window}};
  j["growth"] = json{{"rays", growth_rays}};
  j["output"] = json{{"dir", output_dir}};
  return j.dump(indent);
}

PiecewiseDomain Scenario::domain() const { return PiecewiseDomain(dim, pieces, bounding_box); }

HolomorphicFunction Scenario::holomorphic() const { return make_function(function, dim); }

TestForm make_form(const FormSpec& spec, int dim) {
  return make_polynomial_form(dim, spec.coefficients, spec.cutoff, spec.label);
}

std::vector<TestForm> Scenario::test_forms() const {
  std::vector<TestForm> out;
  for (const auto& f : forms) out.push_back(make_form(f, dim));
  return out;
}

std::vector<TestForm> Scenario::weinstock_test_forms() const {
  std::vector<TestForm> out;
  for (const auto& f : weinstock_forms.empty() ? forms : weinstock_forms) out.push_back(make_form(f, dim));
  return out;
}

std::vector<std::string> builtin_scenario_names() {
  return {"square",           "square_f=1/z^2", "square_f=1/z",       "square_f=1",
          "square_f=1/(z-1)", "bidisc",         "bidisc_control",     "square-cross-plane"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "square") return square("square", "1/z^2");
  if (name == "square_f=1/z^2") return square(name, "1/z^2");
  if (name == "square_f=1/z") return square(name, "1/z");
  if (name == "square_f=1") return square(name, "1");
  if (name == "square_f=1/(z-1)") return square(name, "1/(z-1)");
  if (name == "bidisc") return bidisc(false);
  if (name == "bidisc_control") return bidisc(true);
  if (name == "square-cross-plane") return square_cross_plane();
  throw Error(ErrorCode::InvalidArgument, "unknown built-in scenario '" + name + "'");
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == '1' && i + 1 < name.size() && name[i + 1] == '/' && (i == 0 || !std::isalnum(static_cast<unsigned char>(name[i - 1])))) {
      out += "inv_";
      ++i;
    } else if (c == '=' || c == '/' || c == ' ') {
      out += '_';
    } else if (c == '^' || c == '(' || c == ')' || c == '*') {
      continue;
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace bcurrent
