// SPDX-License-Identifier: Apache-2.0
//
// Piecewise-smooth domains Omega = intersection of smooth pieces {rho_j < 0}
// in C^n, n in {1, 2}, with parametrized boundary faces and solid patches.
//
// In C^2 every piece must depend on a single complex coordinate, so Omega is a
// product D_1 x D_2 of planar factors (a factor without pieces is C, truncated
// to the bounding box). Faces are then (boundary arc of D_k) x (solid chart of
// the other factor).

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcurrent/common.hpp"

namespace bcurrent {

enum class PieceKind { HalfPlane, BoxSide, Disc, PolydiscFactor };

const char* piece_kind_name(PieceKind kind);

/// Analytic description of one smooth piece. Every kind reduces to either an
/// affine rho = scale * (normal . p - offset) or a round
/// rho = scale * (|z_coord - center|^2 - radius^2).
struct PieceSpec {
  PieceKind kind = PieceKind::HalfPlane;
  RVec normal{};       // HalfPlane
  double offset = 0.0; // HalfPlane
  int axis = 0;        // BoxSide: real coordinate index into (x1, y1, x2, y2)
  bool upper = false;  // BoxSide: true for p[axis] < value, false for p[axis] > value
  double value = 0.0;  // BoxSide
  int coord = 0;       // Disc / PolydiscFactor: complex coordinate
  cplx center{};       // Disc / PolydiscFactor
  double radius = 1.0; // Disc / PolydiscFactor
  double scale = 1.0;  // rho -> scale * rho, scale > 0
  std::string label;

  bool operator==(const PieceSpec&) const = default;
};

class SmoothPiece {
 public:
  SmoothPiece(PieceSpec spec, int dim);

  double rho(const CPoint& z) const;
  RVec grad_rho(const CPoint& z) const;
  /// Components of the complex differential d rho = sum_j (d rho / d z_j) dz_j,
  /// with d rho / d z_j = (d rho/d x_j - i d rho/d y_j) / 2.
  CPoint del_rho(const CPoint& z) const;

  const PieceSpec& spec() const { return spec_; }
  bool round() const { return round_; }
  /// Bit k set iff rho depends on z_k.
  unsigned coordinate_mask() const;
  /// Affine data (unscaled); valid when !round().
  const RVec& affine_normal() const { return normal_; }
  double affine_offset() const { return offset_; }

 private:
  PieceSpec spec_;
  int dim_;
  bool round_ = false;
  RVec normal_{};
  double offset_ = 0.0;
};

struct Box {
  RVec lo{};
  RVec hi{};
};

/// Parameter-space refinement target: the dims in `mask` are pinned to `value`.
struct Hotspot {
  RVec value{};
  unsigned mask = 0;
};

/// One boundary curve of a planar factor, t in [t0, t1].
struct PlanarArc {
  int piece = 0;
  bool round = false;
  cplx origin{}, direction{};  // line: origin + t * direction, |direction| = 1
  cplx center{};               // circle: center + radius * exp(i t)
  double radius = 0.0;
  double t0 = 0.0, t1 = 0.0;
  bool corner_at_t0 = false, corner_at_t1 = false;

  cplx point(double t) const;
  cplx tangent(double t) const;
};

/// Solid parametrization of a planar factor by a 2-parameter box.
struct SolidChart {
  enum class Kind { Rectangle, Polar, ClippedBox };
  Kind kind = Kind::Rectangle;
  double lo[2]{}, hi[2]{};
  cplx center{};
  /// Param values that lie on a genuine piece boundary (not a truncation).
  std::vector<std::pair<int, double>> boundary_sides;
  /// Param points that are corners of the factor.
  std::vector<std::array<double, 2>> corner_params;

  cplx point(double u, double w) const;
  void partials(double u, double w, cplx& du, cplx& dw) const;
  double jacobian(double u, double w) const;
  /// Inverse map where defined (Rectangle, Polar).
  std::optional<std::array<double, 2>> param_of(cplx z) const;
};

struct PlanarFactor {
  int coord = 0;
  std::vector<int> pieces;
  std::vector<PlanarArc> arcs;
  SolidChart solid;
  std::vector<cplx> corners;
  double box[4]{};  // xlo, xhi, ylo, yhi
};

class PiecewiseDomain;

/// Parametrized piece of a face dOmega_j. The map lands on {rho_owner = 0};
/// points outside the other closed pieces are masked out.
class FacePatch {
 public:
  int owner = 0;
  int param_dim = 1;
  RVec lo{}, hi{};
  int orientation_sign = 1;
  std::vector<Hotspot> corner_hotspots;

  CPoint point(const RVec& s) const;
  /// Point plus the tangent frame d Phi / d s_i (param_dim columns).
  CPoint frame(const RVec& s, std::array<RVec, 3>& tangents) const;
  bool active(const CPoint& z) const { return !mask_ || mask_(z); }
  int arc_coord() const { return arc_coord_; }
  const PlanarArc& arc() const { return arc_; }
  int solid_coord() const { return solid_coord_; }
  const SolidChart& solid() const { return solid_; }

 private:
  friend class PiecewiseDomain;
  int dim_ = 1;
  int arc_coord_ = 0;
  PlanarArc arc_;
  int solid_coord_ = 1;
  SolidChart solid_;
  std::function<bool(const CPoint&)> mask_;
};

/// Parametrization of Omega (or of its bounding-box truncation) for volume
/// integrals; param_dim = 2n.
class SolidPatch {
 public:
  int param_dim = 2;
  RVec lo{}, hi{};
  std::vector<Hotspot> corner_hotspots;

  CPoint point(const RVec& s) const;
  double jacobian(const RVec& s) const;
  bool active(const CPoint& z) const { return !mask_ || mask_(z); }
  std::optional<RVec> param_of(const CPoint& z) const;

 private:
  friend class PiecewiseDomain;
  int dim_ = 1;
  std::array<SolidChart, 2> charts_;
  std::array<int, 2> coords_{0, 1};
  std::function<bool(const CPoint&)> mask_;
};

struct BoundarySample {
  CPoint z;
  std::size_t patch = 0;
  RVec params{};
};

class PiecewiseDomain {
 public:
  /// Throws Error(GeometryInvalid) for invalid pieces or an empty domain and
  /// Error(Unsupported) for non-product pieces in C^2.
  PiecewiseDomain(int dim, std::vector<PieceSpec> pieces, std::optional<Box> bounding_box = std::nullopt);

  int dim() const { return dim_; }
  const std::vector<SmoothPiece>& pieces() const { return pieces_; }
  const Box& bounding_box() const { return box_; }
  const std::vector<PieceSpec>& specs() const { return specs_; }

  bool contains(const CPoint& z) const;
  /// All rho_j <= tol, i.e. z in the closure up to tol.
  bool in_closure(const CPoint& z, double tol = 1e-9) const;
  /// Pieces with |rho_j(z)| <= tol * |grad rho_j(z)|.
  std::vector<int> active_pieces(const CPoint& z, double tol = 1e-9) const;

  const std::vector<FacePatch>& face_patches() const { return faces_; }
  const std::vector<SolidPatch>& solid_patches() const { return solids_; }
  const std::vector<PlanarFactor>& factors() const { return factors_; }

  /// Uniform parameter grid samples on every face patch (active part only).
  std::vector<BoundarySample> sample_boundary(int per_dim) const;

  /// Euclidean distance to dOmega; z must lie in Omega.
  double boundary_distance(const CPoint& z) const;

  struct BoundaryMinimum {
    double value = 0.0;
    CPoint z{};
    std::size_t patch = 0;
    RVec params{};
  };
  /// Minimizes objective over the active boundary: grid search refined by a
  /// shrinking pattern search in parameter space.
  BoundaryMinimum minimize_over_boundary(const std::function<double(const CPoint&)>& objective,
                                         int grid_per_dim = 0) const;

  /// Diagonal of the bounding box; an upper bound for the diameter of Omega.
  double diameter() const;

 private:
  void build_factors();
  void build_patches();
  void validate() const;

  int dim_;
  std::vector<PieceSpec> specs_;
  std::vector<SmoothPiece> pieces_;
  Box box_;
  std::vector<PlanarFactor> factors_;
  std::vector<FacePatch> faces_;
  std::vector<SolidPatch> solids_;
};

}  // namespace bcurrent
