// SPDX-License-Identifier: Apache-2.0
//
// Test forms of bidegree (n, n-1):
//   n = 1: psi = g dz
//   n = 2: psi = g1 dz1^dz2^dzb1 + g2 dz1^dz2^dzb2

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcurrent/expression.hpp"
#include "bcurrent/geometry.hpp"

namespace bcurrent {

/// Product of radial plateaus: chi(z) = prod_k h_k(|z_k - c_k|) with h_k = 1
/// for r <= inner, 0 for r >= outer. Coordinates without a factor are
/// unrestricted.
struct Cutoff {
  struct Factor {
    int coord = 0;
    cplx center{};
    double inner = 1.0;
    double outer = 2.0;
  };
  std::vector<Factor> factors;

  double value(const CPoint& z) const;
  /// d chi / d zb_k.
  cplx dbar(const CPoint& z, int k) const;
  bool in_support(const CPoint& z) const;
  void validate(int dim) const;
};

using CoefficientFn = std::function<cplx(const CPoint&, int)>;
using DbarFn = std::function<cplx(const CPoint&, int, int)>;

class TestForm {
 public:
  int dim = 1;
  std::string label;
  /// Coefficient g_i, i < dim.
  CoefficientFn coefficient;
  /// d g_i / d zb_k.
  DbarFn dbar;
  /// Closed support region (everything when empty).
  std::function<bool(const CPoint&)> support;
  /// Source text when built from polynomials.
  std::vector<std::string> coefficient_text;
  std::optional<Cutoff> cutoff;

  std::array<cplx, 2> coefficients(const CPoint& z) const;
  /// dbar psi as a multiple of dx1^dy1(^dx2^dy2).
  cplx dbar_density(const CPoint& z) const;
};

/// Coefficients are polynomial expressions in z, zb, x, y (z1, zb1, ...).
TestForm make_polynomial_form(int dim, const std::vector<std::string>& coefficients, const Cutoff& cutoff,
                              const std::string& label = "");

/// Plug-in coefficients; without `dbar` a central finite difference is used.
TestForm make_plugin_form(int dim, CoefficientFn coefficient, DbarFn dbar = nullptr, const std::string& label = "");

cplx finite_difference_dbar(const CoefficientFn& g, const CPoint& z, int i, int k, double h = 1e-5);

/// (dzb_k ^ basis_i)(e_1, ..., e_2n).
cplx dbar_basis_factor(int dim, int i, int k);

/// Max |dbar - finite difference| / (1 + |dbar|) over `points` random points
/// in the bounding box (fixed seed).
double dbar_consistency(const TestForm& form, const PiecewiseDomain& domain, int points = 50);

/// Max |coefficient| at random points outside the support (0 when the form
/// has no support predicate).
double support_violation(const TestForm& form, const PiecewiseDomain& domain, int points = 200);

}  // namespace bcurrent
