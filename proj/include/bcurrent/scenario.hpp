// SPDX-License-Identifier: Apache-2.0
//
// Scenario files: domain, function, test forms, cover, schedule and
// quadrature settings for one run. JSON on disk.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcurrent/cover.hpp"
#include "bcurrent/forms.hpp"
#include "bcurrent/functions.hpp"
#include "bcurrent/pairing.hpp"

namespace bcurrent {

struct FormSpec {
  std::string label;
  std::vector<std::string> coefficients;
  Cutoff cutoff;
};

struct Scenario {
  std::string name;
  int dim = 1;
  std::vector<PieceSpec> pieces;
  std::optional<Box> bounding_box;
  std::string function = "1";
  std::vector<FormSpec> forms;
  std::vector<FormSpec> weinstock_forms;  // falls back to forms when empty
  CoverOptions cover;
  Schedule schedule;
  QuadratureSpec quadrature;
  int fit_window = 8;
  int growth_rays = 8;
  std::string output_dir;

  /// Throws ConfigParse for malformed text or fields.
  static Scenario from_json(const std::string& text);
  static Scenario load(const std::string& path);
  /// Stable key order; from_json(to_json()) reproduces the scenario.
  std::string to_json(int indent = 2) const;

  PiecewiseDomain domain() const;
  HolomorphicFunction holomorphic() const;
  std::vector<TestForm> test_forms() const;
  std::vector<TestForm> weinstock_test_forms() const;
};

/// Shipped scenarios, keyed by name ("square", "square_f=1/z^2", "bidisc", ...).
std::vector<std::string> builtin_scenario_names();
/// Throws InvalidArgument for an unknown name.
Scenario builtin_scenario(const std::string& name);

/// File-system friendly form of a scenario name: "square_f=1/z^2" ->
/// "square_f_inv_z2".
std::string sanitize_name(const std::string& name);

TestForm make_form(const FormSpec& spec, int dim);

}  // namespace bcurrent
