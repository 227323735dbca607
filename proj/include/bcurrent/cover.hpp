// SPDX-License-Identifier: Apache-2.0
//
// Translation charts with outward vectors and a smooth partition of unity
// near the boundary. Every chart is a product of planar factor bumps.

#pragma once

#include <string>
#include <vector>

#include "bcurrent/geometry.hpp"

namespace bcurrent {

/// 0 for t <= 0, 1 for t >= 1, exp(-1/t)-based in between.
double smooth_step(double t);
double smooth_step_derivative(double t);
/// 1 for s <= 1/2, 0 for s >= 1.
double plateau(double s);

/// Bump on one planar factor.
struct FactorBump {
  enum class Kind { Interior, Corner, Strip };
  Kind kind = Kind::Interior;
  int coord = 0;
  cplx v{};  // outward vector in this factor; 0 for Interior
  // Corner: ball.
  cplx center{};
  double radius = 0.0;
  // Strip: tube of `radius` around arc([ta, tb]).
  PlanarArc arc;
  double ta = 0.0, tb = 0.0;
  // Interior: product of smooth steps of the normalized defining functions.
  std::vector<SmoothPiece> pieces;
  double delta = 0.0;
  std::string label;

  /// Unnormalized bump value at w (the coord-th coordinate of z).
  double raw(cplx w) const;
};

struct TranslationChart {
  std::string label;
  int dim = 1;
  std::array<FactorBump, 2> parts;  // parts[f] acts on z_f
  std::array<int, 2> part_index{-1, -1};
  RVec v{};
  double margin = 0.0;
  bool corner = false;

  bool in_region(const CPoint& z) const;
};

struct CoverOptions {
  double corner_radius = 0.3;
  struct CornerVector {
    int coord = 0;
    cplx at{};
    cplx v{};
  };
  std::vector<CornerVector> corner_vectors;
  int arc_pieces_per_circle = 8;
  int min_validation_samples = 200;
};

class ChartCover {
 public:
  const std::vector<TranslationChart>& charts() const { return charts_; }
  /// Partition-of-unity weight chi_i(z).
  double weight(std::size_t chart, const CPoint& z) const;
  /// Max |sum_i chi_i - 1| over the boundary samples used for the check.
  double partition_defect() const { return partition_defect_; }
  std::size_t partition_samples() const { return partition_samples_; }
  const std::vector<FactorBump>& factor_bumps(int f) const { return bumps_[static_cast<std::size_t>(f)]; }
  /// Normalized weight of bump `index` of factor f at w.
  double factor_weight(int f, int index, cplx w) const;

 private:
  friend ChartCover build_chart_cover(const PiecewiseDomain& domain, const CoverOptions& options);

  int dim_ = 1;
  std::vector<std::vector<FactorBump>> bumps_;
  std::vector<TranslationChart> charts_;
  double partition_defect_ = 0.0;
  std::size_t partition_samples_ = 0;
};

/// Throws Error(NoOutwardVector) if a corner chart fails validation and
/// Error(CoverIncomplete) if a boundary sample is not covered.
ChartCover build_chart_cover(const PiecewiseDomain& domain, const CoverOptions& options = {});

/// min over >= min_samples boundary points in the chart region, over pieces
/// active there, of grad rho_j . v, with v taken as given.
double validate_outward(const TranslationChart& chart, const PiecewiseDomain& domain, int min_samples = 200);

}  // namespace bcurrent
