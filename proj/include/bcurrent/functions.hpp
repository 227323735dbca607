// SPDX-License-Identifier: Apache-2.0
//
// Holomorphic evaluators, eps-translates and growth-exponent estimation.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bcurrent/expression.hpp"
#include "bcurrent/geometry.hpp"

namespace bcurrent {

struct HolomorphicFunction {
  int dim = 1;
  std::function<cplx(const CPoint&)> evaluator;
  std::vector<PoleLocus> poles;
  std::string label;

  cplx operator()(const CPoint& z) const { return evaluator(z); }
};

/// Compiles a rational expression in z (or z1, z2). Throws ConfigParse.
HolomorphicFunction make_function(const std::string& text, int dim);

/// z -> f(z - eps v), poles shifted by +eps v.
HolomorphicFunction translate(const HolomorphicFunction& f, const RVec& v, double eps);

/// Distance from z to the nearest pole locus (infinity when there is none).
double pole_distance(const HolomorphicFunction& f, const CPoint& z);

/// Minimum over the closure of Omega of the pole distance; 0 when a pole
/// touches the closure.
double pole_distance_to_closure(const HolomorphicFunction& f, const PiecewiseDomain& domain);

/// Max relative mismatch of df/dx and -i df/dy over `points` random interior
/// points (fixed seed).
double cauchy_riemann_defect(const HolomorphicFunction& f, const PiecewiseDomain& domain, int points = 20);

struct GrowthEstimate {
  double k_hat = 0.0;
  double C_hat = 0.0;
  double r2 = 0.0;
  int samples_used = 0;
  std::vector<double> distances;
  std::vector<double> envelope;
};

/// Fits log|f| = log C - k log d over d = 2^-m, m = 3..12, using the max over
/// n_rays inward rays toward the poles on the boundary (patch centers when f
/// has none). Throws PoleInside.
GrowthEstimate estimate_growth(const HolomorphicFunction& f, const PiecewiseDomain& domain, int n_rays = 8);

}  // namespace bcurrent
