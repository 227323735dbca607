// SPDX-License-Identifier: Apache-2.0
//
// Boundary-current pairing F(eps) = sum_i int_{dOmega} f(z - eps v_i) chi_i psi,
// the Stokes and face-distribution oracles, and the Weinstock test.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bcurrent/cover.hpp"
#include "bcurrent/forms.hpp"
#include "bcurrent/functions.hpp"
#include "bcurrent/quadrature.hpp"

namespace bcurrent {

/// Sign between int_Omega f dbar(psi) and the boundary pairing, calibrated on
/// f = 1 (see calibrate_stokes_sign) and frozen here.
inline constexpr double kStokesSign = 1.0;

struct PairingSample {
  double epsilon = 0.0;
  cplx value{};
  double err_est = 0.0;
  std::vector<cplx> per_chart;
  long cells_used = 0;
  bool converged = true;
};

struct Schedule {
  double eps0 = 0.1;
  double ratio = 0.5;
  int steps = 14;

  void validate() const;
  double epsilon(int k) const;
};

/// Throws PoleOnBoundary if a translated pole comes within 1e-9 of the
/// boundary inside a chart region.
PairingSample pairing_at_epsilon(const PiecewiseDomain& domain, const HolomorphicFunction& f, const TestForm& psi,
                                 const ChartCover& cover, double eps, const QuadratureSpec& spec,
                                 unsigned threads = 1, std::vector<CellRecord>* history = nullptr);

std::vector<PairingSample> pairing_sequence(const PiecewiseDomain& domain, const HolomorphicFunction& f,
                                            const TestForm& psi, const ChartCover& cover, const Schedule& schedule,
                                            const QuadratureSpec& spec, unsigned threads = 1);

/// int_{dOmega} psi against int_Omega dbar(psi) for f = 1: +1 or -1.
double calibrate_stokes_sign(const PiecewiseDomain& domain, const TestForm& psi, const QuadratureSpec& spec);

struct StokesResult {
  cplx value{};
  IntegralResult integral;
  IntegralResult abs_check;
};

/// kStokesSign * int_Omega f dbar(psi). Throws NotL1 when int |f| does not
/// converge within the check budget.
StokesResult stokes_oracle(const PiecewiseDomain& domain, const HolomorphicFunction& f, const TestForm& psi,
                           const QuadratureSpec& spec, int l1_budget = 40000);

struct FaceDistribution {
  int face_index = 0;  // piece index j
  std::function<cplx(const CPoint&)> density;
  std::function<bool(const CPoint&)> support_mask;  // defaults to the closure of Omega
};

/// alpha_j = f restricted to each face.
std::vector<FaceDistribution> restrict_to_faces(const PiecewiseDomain& domain, const HolomorphicFunction& f);

IntegralResult face_distribution_pairing(const PiecewiseDomain& domain, const std::vector<FaceDistribution>& dists,
                                         const TestForm& psi, const QuadratureSpec& spec);

/// max |dbar psi| over samples of the closure, relative to max(1, max |g_i|).
double closure_defect(const TestForm& psi, const PiecewiseDomain& domain);

struct WeinstockEntry {
  std::string label;
  bool closed = true;
  double closure_defect = 0.0;
  cplx pairing{};
  double err_est = 0.0;
  bool converged = true;
};

struct WeinstockReport {
  std::string route;  // "face-distribution" or "pairing-limit"
  double scale = 1.0;
  double tolerance = 0.0;
  std::vector<WeinstockEntry> entries;
  bool pass = false;
};

struct WeinstockOptions {
  bool force = false;  // pair non-closed forms instead of throwing FormNotClosed
  Schedule schedule;
  unsigned threads = 1;
};

WeinstockReport weinstock_test(const PiecewiseDomain& domain, const HolomorphicFunction& f,
                               const std::vector<TestForm>& forms, const ChartCover* cover,
                               const QuadratureSpec& spec, const WeinstockOptions& options = {});

}  // namespace bcurrent
