// SPDX-License-Identifier: Apache-2.0
//
// Adaptive cubature on parameter boxes: tensor Gauss-Kronrod 15/7 for up to
// three dimensions, 7/3 for four. Cells are split along the dimension with
// the largest embedded-rule difference.

#pragma once

#include <functional>
#include <vector>

#include "bcurrent/geometry.hpp"

namespace bcurrent {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  int max_subdivisions = 200000;
  int corner_refine_depth = 8;

  void validate() const;
};

struct IntegralResult {
  cplx value{};
  double err_est = 0.0;
  long cells_used = 0;
  bool converged = true;

  IntegralResult& operator+=(const IntegralResult& o);
};

/// Dims in `mask` pinned to `value`; cells touching it are bisected along
/// those dims `depth` times before adaptation.
struct RefineTarget {
  RVec value{};
  unsigned mask = 0;
  int depth = 0;
};

/// Per-cell log entry (creation order).
struct CellRecord {
  RVec lo{}, hi{};
  double err = 0.0;
  int generation = 0;
};

using BoxIntegrand = std::function<cplx(const RVec&)>;

IntegralResult integrate_box(int dim, const RVec& lo, const RVec& hi, const BoxIntegrand& f,
                             const QuadratureSpec& spec, const std::vector<RefineTarget>& targets = {},
                             std::vector<CellRecord>* history = nullptr);

/// Integrand on a face patch: point, tangent frame, params -> value of the
/// pulled-back form (orientation not yet applied).
using FaceIntegrand = std::function<cplx(const CPoint&, const std::array<RVec, 3>&, const RVec&)>;

/// Integrates over a face patch (masked points contribute 0), multiplied by
/// the patch orientation sign. `lo`/`hi` may narrow the parameter box.
IntegralResult integrate_face(const FacePatch& patch, const FaceIntegrand& integrand, const QuadratureSpec& spec,
                              std::vector<RefineTarget> extra_targets = {}, const RVec* lo = nullptr,
                              const RVec* hi = nullptr, std::vector<CellRecord>* history = nullptr);

/// Sum of integrate_face over all face patches in patch order.
IntegralResult integrate_boundary(const PiecewiseDomain& domain, const FaceIntegrand& integrand,
                                  const QuadratureSpec& spec);

/// Integrates a density (w.r.t. Lebesgue measure on R^{2n}) over Omega via
/// the solid patches.
IntegralResult integrate_volume(const PiecewiseDomain& domain, const std::function<cplx(const CPoint&)>& density,
                                const QuadratureSpec& spec, std::vector<RefineTarget> extra_targets = {});

/// Pullback of the (n, n-1)-form sum_i g_i * basis_i on a tangent frame:
/// n = 1 basis dz; n = 2 basis dz1^dz2^dzb1, dz1^dz2^dzb2.
cplx form_on_frame(int dim, const std::array<cplx, 2>& coefficients, const std::array<RVec, 3>& frame);

}  // namespace bcurrent
