// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bcurrent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RVec embed(cplx c, int coord) {
  RVec r{};
  r[static_cast<std::size_t>(2 * coord)] = c.real();
  r[static_cast<std::size_t>(2 * coord + 1)] = c.imag();
  return r;
}

CPoint planar_point(cplx w, int coord) {
  CPoint z{};
  z[static_cast<std::size_t>(coord)] = w;
  return z;
}

}  // namespace

const char* piece_kind_name(PieceKind kind) {
  switch (kind) {
    case PieceKind::HalfPlane: return "halfplane";
    case PieceKind::BoxSide: return "box-side";
    case PieceKind::Disc: return "disc";
    case PieceKind::PolydiscFactor: return "polydisc-factor";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// SmoothPiece

SmoothPiece::SmoothPiece(PieceSpec spec, int dim) : spec_(std::move(spec)), dim_(dim) {
  if (!(spec_.scale > 0.0)) throw Error(ErrorCode::GeometryInvalid, "piece scale must be positive");
  switch (spec_.kind) {
    case PieceKind::Disc:
    case PieceKind::PolydiscFactor:
      if (spec_.coord < 0 || spec_.coord >= dim)
        throw Error(ErrorCode::GeometryInvalid, "disc coordinate out of range");
      if (!(spec_.radius > 0.0)) throw Error(ErrorCode::GeometryInvalid, "disc radius must be positive");
      round_ = true;
      break;
    case PieceKind::BoxSide:
      if (spec_.axis < 0 || spec_.axis >= 2 * dim)
        throw Error(ErrorCode::GeometryInvalid, "box-side axis out of range");
      normal_ = {};
      normal_[static_cast<std::size_t>(spec_.axis)] = spec_.upper ? 1.0 : -1.0;
      offset_ = spec_.upper ? spec_.value : -spec_.value;
      break;
    case PieceKind::HalfPlane:
      normal_ = spec_.normal;
      offset_ = spec_.offset;
      for (int i = 2 * dim; i < 4; ++i)
        if (normal_[static_cast<std::size_t>(i)] != 0.0)
          throw Error(ErrorCode::GeometryInvalid, "halfplane normal has components beyond C^n");
      if (norm(normal_) == 0.0) throw Error(ErrorCode::GeometryInvalid, "halfplane normal is zero");
      break;
  }
}

double SmoothPiece::rho(const CPoint& z) const {
  if (round_) {
    const cplx d = z[static_cast<std::size_t>(spec_.coord)] - spec_.center;
    return spec_.scale * (std::norm(d) - spec_.radius * spec_.radius);
  }
  return spec_.scale * (dot(normal_, to_real(z)) - offset_);
}

RVec SmoothPiece::grad_rho(const CPoint& z) const {
  if (round_) {
    const cplx d = z[static_cast<std::size_t>(spec_.coord)] - spec_.center;
    return embed(2.0 * spec_.scale * d, spec_.coord);
  }
  RVec g = normal_;
  for (double& c : g) c *= spec_.scale;
  return g;
}

CPoint SmoothPiece::del_rho(const CPoint& z) const {
  CPoint d{};
  if (round_) {
    d[static_cast<std::size_t>(spec_.coord)] =
        spec_.scale * std::conj(z[static_cast<std::size_t>(spec_.coord)] - spec_.center);
    return d;
  }
  for (int j = 0; j < dim_; ++j)
    d[static_cast<std::size_t>(j)] =
        0.5 * spec_.scale * cplx(normal_[static_cast<std::size_t>(2 * j)], -normal_[static_cast<std::size_t>(2 * j + 1)]);
  return d;
}

unsigned SmoothPiece::coordinate_mask() const {
  if (round_) return 1u << spec_.coord;
  unsigned mask = 0;
  for (int j = 0; j < dim_; ++j)
    if (normal_[static_cast<std::size_t>(2 * j)] != 0.0 || normal_[static_cast<std::size_t>(2 * j + 1)] != 0.0)
      mask |= 1u << j;
  return mask;
}

// ---------------------------------------------------------------------------
// Planar pieces

cplx PlanarArc::point(double t) const {
  if (round) return center + radius * std::polar(1.0, t);
  return origin + t * direction;
}

cplx PlanarArc::tangent(double t) const {
  if (round) return radius * cplx(0.0, 1.0) * std::polar(1.0, t);
  return direction;
}

cplx SolidChart::point(double u, double w) const {
  if (kind == Kind::Polar) return center + u * std::polar(1.0, w);
  return {u, w};
}

void SolidChart::partials(double u, double w, cplx& du, cplx& dw) const {
  if (kind == Kind::Polar) {
    du = std::polar(1.0, w);
    dw = cplx(0.0, u) * std::polar(1.0, w);
    return;
  }
  du = 1.0;
  dw = cplx(0.0, 1.0);
}

double SolidChart::jacobian(double u, double /*w*/) const { return kind == Kind::Polar ? u : 1.0; }

std::optional<std::array<double, 2>> SolidChart::param_of(cplx z) const {
  if (kind == Kind::Polar) {
    double th = std::arg(z - center);
    if (th < 0.0) th += kTwoPi;
    return std::array<double, 2>{std::abs(z - center), th};
  }
  return std::array<double, 2>{z.real(), z.imag()};
}

// ---------------------------------------------------------------------------
// Patches

CPoint FacePatch::point(const RVec& s) const {
  std::array<RVec, 3> unused;
  return frame(s, unused);
}

CPoint FacePatch::frame(const RVec& s, std::array<RVec, 3>& tangents) const {
  CPoint z{};
  z[static_cast<std::size_t>(arc_coord_)] = arc_.point(s[0]);
  tangents[0] = embed(arc_.tangent(s[0]), arc_coord_);
  if (param_dim == 3) {
    z[static_cast<std::size_t>(solid_coord_)] = solid_.point(s[1], s[2]);
    cplx du, dw;
    solid_.partials(s[1], s[2], du, dw);
    tangents[1] = embed(du, solid_coord_);
    tangents[2] = embed(dw, solid_coord_);
  }
  return z;
}

CPoint SolidPatch::point(const RVec& s) const {
  CPoint z{};
  for (int f = 0; f < dim_; ++f)
    z[static_cast<std::size_t>(coords_[static_cast<std::size_t>(f)])] =
        charts_[static_cast<std::size_t>(f)].point(s[static_cast<std::size_t>(2 * f)], s[static_cast<std::size_t>(2 * f + 1)]);
  return z;
}

double SolidPatch::jacobian(const RVec& s) const {
  double j = 1.0;
  for (int f = 0; f < dim_; ++f)
    j *= charts_[static_cast<std::size_t>(f)].jacobian(s[static_cast<std::size_t>(2 * f)], s[static_cast<std::size_t>(2 * f + 1)]);
  return j;
}

std::optional<RVec> SolidPatch::param_of(const CPoint& z) const {
  RVec s{};
  for (int f = 0; f < dim_; ++f) {
    auto p = charts_[static_cast<std::size_t>(f)].param_of(z[static_cast<std::size_t>(coords_[static_cast<std::size_t>(f)])]);
    if (!p) return std::nullopt;
    s[static_cast<std::size_t>(2 * f)] = (*p)[0];
    s[static_cast<std::size_t>(2 * f + 1)] = (*p)[1];
  }
  return s;
}

// ---------------------------------------------------------------------------
// PiecewiseDomain

PiecewiseDomain::PiecewiseDomain(int dim, std::vector<PieceSpec> pieces, std::optional<Box> bounding_box)
    : dim_(dim), specs_(std::move(pieces)) {
  if (dim_ < 1 || dim_ > kMaxDim) throw Error(ErrorCode::GeometryInvalid, "ambient dimension must be 1 or 2");
  if (specs_.empty()) throw Error(ErrorCode::GeometryInvalid, "domain has no pieces");
  for (const auto& s : specs_) pieces_.emplace_back(s, dim_);
  for (const auto& p : pieces_) {
    const unsigned m = p.coordinate_mask();
    if (m != 1u && m != 2u)
      throw Error(ErrorCode::Unsupported, "in C^2 every piece must depend on a single complex coordinate");
  }

  if (bounding_box) {
    box_ = *bounding_box;
  } else {
    // Tightest axis bounds implied by discs and axis-aligned sides, padded.
    const double inf = std::numeric_limits<double>::infinity();
    RVec lo, hi;
    lo.fill(-inf);
    hi.fill(inf);
    for (const auto& p : pieces_) {
      if (p.round()) {
        const auto& s = p.spec();
        const std::size_t a = static_cast<std::size_t>(2 * s.coord);
        lo[a] = std::max(lo[a], s.center.real() - s.radius);
        hi[a] = std::min(hi[a], s.center.real() + s.radius);
        lo[a + 1] = std::max(lo[a + 1], s.center.imag() - s.radius);
        hi[a + 1] = std::min(hi[a + 1], s.center.imag() + s.radius);
        continue;
      }
      const RVec& n = p.affine_normal();
      int nonzero = 0, axis = -1;
      for (int i = 0; i < 2 * dim_; ++i)
        if (n[static_cast<std::size_t>(i)] != 0.0) {
          ++nonzero;
          axis = i;
        }
      if (nonzero != 1) continue;
      const double bound = p.affine_offset() / n[static_cast<std::size_t>(axis)];
      if (n[static_cast<std::size_t>(axis)] > 0.0)
        hi[static_cast<std::size_t>(axis)] = std::min(hi[static_cast<std::size_t>(axis)], bound);
      else
        lo[static_cast<std::size_t>(axis)] = std::max(lo[static_cast<std::size_t>(axis)], bound);
    }
    for (int i = 0; i < 2 * dim_; ++i) {
      const std::size_t a = static_cast<std::size_t>(i);
      if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]))
        throw Error(ErrorCode::GeometryInvalid, "domain is unbounded; a bounding_box is required");
      if (!(hi[a] > lo[a])) throw Error(ErrorCode::GeometryInvalid, "domain is empty");
      const double pad = std::max(0.25, 0.25 * (hi[a] - lo[a]));
      lo[a] -= pad;
      hi[a] += pad;
    }
    box_ = {lo, hi};
  }
  for (int i = 2 * dim_; i < 4; ++i) box_.lo[static_cast<std::size_t>(i)] = box_.hi[static_cast<std::size_t>(i)] = 0.0;
  for (int i = 0; i < 2 * dim_; ++i)
    if (!(box_.hi[static_cast<std::size_t>(i)] > box_.lo[static_cast<std::size_t>(i)]))
      throw Error(ErrorCode::GeometryInvalid, "bounding box is degenerate");

  build_factors();
  build_patches();
  validate();
}

bool PiecewiseDomain::contains(const CPoint& z) const {
  return std::all_of(pieces_.begin(), pieces_.end(), [&](const SmoothPiece& p) { return p.rho(z) < 0.0; });
}

bool PiecewiseDomain::in_closure(const CPoint& z, double tol) const {
  return std::all_of(pieces_.begin(), pieces_.end(), [&](const SmoothPiece& p) {
    return p.rho(z) <= tol * std::max(1.0, norm(p.grad_rho(z)));
  });
}

std::vector<int> PiecewiseDomain::active_pieces(const CPoint& z, double tol) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < pieces_.size(); ++j)
    if (std::abs(pieces_[j].rho(z)) <= tol * std::max(1.0, norm(pieces_[j].grad_rho(z))))
      out.push_back(static_cast<int>(j));
  return out;
}

double PiecewiseDomain::diameter() const {
  RVec d{};
  for (int i = 0; i < 4; ++i) d[static_cast<std::size_t>(i)] = box_.hi[static_cast<std::size_t>(i)] - box_.lo[static_cast<std::size_t>(i)];
  return norm(d);
}

void PiecewiseDomain::build_factors() {
  for (int k = 0; k < dim_; ++k) {
    PlanarFactor f;
    f.coord = k;
    f.box[0] = box_.lo[static_cast<std::size_t>(2 * k)];
    f.box[1] = box_.hi[static_cast<std::size_t>(2 * k)];
    f.box[2] = box_.lo[static_cast<std::size_t>(2 * k + 1)];
    f.box[3] = box_.hi[static_cast<std::size_t>(2 * k + 1)];
    for (std::size_t j = 0; j < pieces_.size(); ++j)
      if (pieces_[j].coordinate_mask() == (1u << k)) f.pieces.push_back(static_cast<int>(j));

    auto rho_at = [&](int j, cplx w) { return pieces_[static_cast<std::size_t>(j)].rho(planar_point(w, k)); };

    // Boundary arcs.
    for (int p : f.pieces) {
      const SmoothPiece& piece = pieces_[static_cast<std::size_t>(p)];
      PlanarArc arc;
      arc.piece = p;
      if (piece.round()) {
        arc.round = true;
        arc.center = piece.spec().center;
        arc.radius = piece.spec().radius;
        arc.t0 = 0.0;
        arc.t1 = kTwoPi;
      } else {
        const RVec& n = piece.affine_normal();
        const cplx a(n[static_cast<std::size_t>(2 * k)], n[static_cast<std::size_t>(2 * k + 1)]);
        const double an = std::abs(a);
        arc.origin = a * (piece.affine_offset() / (an * an));
        arc.direction = cplx(0.0, 1.0) * a / an;
        // Liang-Barsky clip of the line to the factor box.
        double tmin = -std::numeric_limits<double>::infinity(), tmax = std::numeric_limits<double>::infinity();
        const double o[2] = {arc.origin.real(), arc.origin.imag()};
        const double d[2] = {arc.direction.real(), arc.direction.imag()};
        bool empty = false;
        for (int ax = 0; ax < 2; ++ax) {
          const double lo = f.box[2 * ax], hi = f.box[2 * ax + 1];
          if (std::abs(d[ax]) < 1e-15) {
            if (o[ax] < lo || o[ax] > hi) empty = true;
            continue;
          }
          double ta = (lo - o[ax]) / d[ax], tb = (hi - o[ax]) / d[ax];
          if (ta > tb) std::swap(ta, tb);
          tmin = std::max(tmin, ta);
          tmax = std::min(tmax, tb);
        }
        if (empty || !(tmax > tmin)) continue;
        arc.t0 = tmin;
        arc.t1 = tmax;
      }

      // Parameters where the other pieces of this factor cross the curve.
      std::vector<double> splits;
      constexpr int kSamples = 4096;
      for (int q : f.pieces) {
        if (q == p) continue;
        auto g = [&](double t) { return rho_at(q, arc.point(t)); };
        double ta = arc.t0, ga = g(ta);
        for (int i = 1; i <= kSamples; ++i) {
          const double tb = arc.t0 + (arc.t1 - arc.t0) * i / kSamples;
          const double gb = g(tb);
          if (ga == 0.0 && i > 1) {
            splits.push_back(ta);
          } else if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
            double lo = ta, hi = tb, glo = ga;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
              const double mid = 0.5 * (lo + hi);
              const double gm = g(mid);
              if (gm == 0.0) {
                lo = hi = mid;
                break;
              }
              if ((gm < 0.0) == (glo < 0.0)) {
                lo = mid;
                glo = gm;
              } else {
                hi = mid;
              }
            }
            splits.push_back(0.5 * (lo + hi));
          }
          ta = tb;
          ga = gb;
        }
      }
      for (double& t : splits) {
        const double snapped = std::ldexp(std::round(std::ldexp(t, 30)), -30);
        if (std::abs(t - snapped) <= 4e-16 * std::max(1.0, std::abs(t))) t = snapped;
      }
      std::sort(splits.begin(), splits.end());
      splits.erase(std::unique(splits.begin(), splits.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                   splits.end());

      std::vector<double> knots{arc.t0};
      for (double s : splits)
        if (s > arc.t0 + 1e-12 && s < arc.t1 - 1e-12) knots.push_back(s);
      knots.push_back(arc.t1);
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double mid = 0.5 * (knots[i] + knots[i + 1]);
        const cplx wm = arc.point(mid);
        bool active = true;
        for (int q : f.pieces)
          if (q != p && rho_at(q, wm) >= 0.0) active = false;
        if (!active) continue;
        PlanarArc part = arc;
        part.t0 = knots[i];
        part.t1 = knots[i + 1];
        part.corner_at_t0 = i > 0;
        part.corner_at_t1 = i + 2 < knots.size();
        f.arcs.push_back(part);
        for (double t : {part.t0, part.t1}) {
          if ((t == part.t0 && !part.corner_at_t0) || (t == part.t1 && !part.corner_at_t1)) continue;
          const cplx c = arc.point(t);
          if (std::none_of(f.corners.begin(), f.corners.end(), [&](cplx e) { return std::abs(e - c) < 1e-9; }))
            f.corners.push_back(c);
        }
      }
    }

    // Solid chart.
    SolidChart& sc = f.solid;
    bool axis_aligned = !f.pieces.empty();
    for (int p : f.pieces) {
      const SmoothPiece& piece = pieces_[static_cast<std::size_t>(p)];
      if (piece.round()) {
        axis_aligned = false;
        break;
      }
      const RVec& n = piece.affine_normal();
      if (n[static_cast<std::size_t>(2 * k)] != 0.0 && n[static_cast<std::size_t>(2 * k + 1)] != 0.0) axis_aligned = false;
    }
    if (f.pieces.empty()) {
      sc.kind = SolidChart::Kind::Rectangle;
      sc.lo[0] = f.box[0];
      sc.hi[0] = f.box[1];
      sc.lo[1] = f.box[2];
      sc.hi[1] = f.box[3];
    } else if (axis_aligned) {
      sc.kind = SolidChart::Kind::Rectangle;
      sc.lo[0] = f.box[0];
      sc.hi[0] = f.box[1];
      sc.lo[1] = f.box[2];
      sc.hi[1] = f.box[3];
      bool side_lo[2] = {false, false}, side_hi[2] = {false, false};
      for (int p : f.pieces) {
        const SmoothPiece& piece = pieces_[static_cast<std::size_t>(p)];
        const RVec& n = piece.affine_normal();
        const int ax = n[static_cast<std::size_t>(2 * k)] != 0.0 ? 0 : 1;
        const double c = n[static_cast<std::size_t>(2 * k + ax)];
        const double bound = piece.affine_offset() / c;
        if (c > 0.0 && bound <= sc.hi[ax]) {
          sc.hi[ax] = bound;
          side_hi[ax] = true;
        } else if (c < 0.0 && bound >= sc.lo[ax]) {
          sc.lo[ax] = bound;
          side_lo[ax] = true;
        }
      }
      if (!(sc.hi[0] > sc.lo[0]) || !(sc.hi[1] > sc.lo[1]))
        throw Error(ErrorCode::GeometryInvalid, "domain is empty");
      for (int ax = 0; ax < 2; ++ax) {
        if (side_lo[ax]) sc.boundary_sides.emplace_back(ax, sc.lo[ax]);
        if (side_hi[ax]) sc.boundary_sides.emplace_back(ax, sc.hi[ax]);
      }
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const bool sx = a == 0 ? side_lo[0] : side_hi[0];
          const bool sy = b == 0 ? side_lo[1] : side_hi[1];
          if (sx && sy) sc.corner_params.push_back({a == 0 ? sc.lo[0] : sc.hi[0], b == 0 ? sc.lo[1] : sc.hi[1]});
        }
    } else if (f.pieces.size() == 1) {
      const auto& s = pieces_[static_cast<std::size_t>(f.pieces[0])].spec();
      sc.kind = SolidChart::Kind::Polar;
      sc.center = s.center;
      sc.lo[0] = 0.0;
      sc.hi[0] = s.radius;
      sc.lo[1] = 0.0;
      sc.hi[1] = kTwoPi;
      sc.boundary_sides.emplace_back(0, s.radius);
    } else {
      sc.kind = SolidChart::Kind::ClippedBox;
      sc.lo[0] = f.box[0];
      sc.hi[0] = f.box[1];
      sc.lo[1] = f.box[2];
      sc.hi[1] = f.box[3];
    }
    factors_.push_back(std::move(f));
  }
}

void PiecewiseDomain::build_patches() {
  const std::vector<SmoothPiece> pieces = pieces_;
  auto face_mask = [pieces](int owner) {
    return [pieces, owner](const CPoint& z) {
      for (std::size_t q = 0; q < pieces.size(); ++q) {
        if (static_cast<int>(q) == owner) continue;
        if (pieces[q].rho(z) > 1e-9 * std::max(1.0, norm(pieces[q].grad_rho(z)))) return false;
      }
      return true;
    };
  };
  auto solid_mask = [pieces](const CPoint& z) {
    for (const auto& p : pieces)
      if (p.rho(z) >= 0.0) return false;
    return true;
  };

  for (const PlanarFactor& f : factors_) {
    const int other = 1 - f.coord;
    for (const PlanarArc& arc : f.arcs) {
      FacePatch patch;
      patch.owner = arc.piece;
      patch.dim_ = dim_;
      patch.arc_coord_ = f.coord;
      patch.arc_ = arc;
      patch.lo[0] = arc.t0;
      patch.hi[0] = arc.t1;
      patch.mask_ = face_mask(arc.piece);
      if (arc.corner_at_t0) patch.corner_hotspots.push_back({{arc.t0, 0, 0, 0}, 1u});
      if (arc.corner_at_t1) patch.corner_hotspots.push_back({{arc.t1, 0, 0, 0}, 1u});
      if (dim_ == 2) {
        const SolidChart& sc = factors_[static_cast<std::size_t>(other)].solid;
        patch.param_dim = 3;
        patch.solid_coord_ = other;
        patch.solid_ = sc;
        patch.lo[1] = sc.lo[0];
        patch.hi[1] = sc.hi[0];
        patch.lo[2] = sc.lo[1];
        patch.hi[2] = sc.hi[1];
        for (const auto& [ax, v] : sc.boundary_sides) {
          Hotspot h;
          h.value[static_cast<std::size_t>(1 + ax)] = v;
          h.mask = 1u << (1 + ax);
          patch.corner_hotspots.push_back(h);
        }
      }
      // Orientation from the outward normal and the tangent frame at the center.
      RVec center{};
      for (int i = 0; i < patch.param_dim; ++i)
        center[static_cast<std::size_t>(i)] = 0.5 * (patch.lo[static_cast<std::size_t>(i)] + patch.hi[static_cast<std::size_t>(i)]);
      std::array<RVec, 3> t;
      const CPoint z = patch.frame(center, t);
      const RVec n = pieces_[static_cast<std::size_t>(arc.piece)].grad_rho(z);
      const int rows = 2 * dim_;
      Eigen::MatrixXd m(rows, rows);
      for (int r = 0; r < rows; ++r) {
        m(r, 0) = n[static_cast<std::size_t>(r)];
        for (int c = 1; c < rows; ++c) m(r, c) = t[static_cast<std::size_t>(c - 1)][static_cast<std::size_t>(r)];
      }
      patch.orientation_sign = m.determinant() > 0.0 ? 1 : -1;
      faces_.push_back(std::move(patch));
    }
  }

  SolidPatch solid;
  solid.dim_ = dim_;
  solid.param_dim = 2 * dim_;
  bool clipped = false;
  for (int f = 0; f < dim_; ++f) {
    const SolidChart& sc = factors_[static_cast<std::size_t>(f)].solid;
    solid.charts_[static_cast<std::size_t>(f)] = sc;
    solid.coords_[static_cast<std::size_t>(f)] = f;
    solid.lo[static_cast<std::size_t>(2 * f)] = sc.lo[0];
    solid.hi[static_cast<std::size_t>(2 * f)] = sc.hi[0];
    solid.lo[static_cast<std::size_t>(2 * f + 1)] = sc.lo[1];
    solid.hi[static_cast<std::size_t>(2 * f + 1)] = sc.hi[1];
    clipped = clipped || sc.kind == SolidChart::Kind::ClippedBox;
    for (const auto& c : sc.corner_params) {
      Hotspot h;
      h.value[static_cast<std::size_t>(2 * f)] = c[0];
      h.value[static_cast<std::size_t>(2 * f + 1)] = c[1];
      h.mask = 3u << (2 * f);
      solid.corner_hotspots.push_back(h);
    }
  }
  if (clipped) solid.mask_ = solid_mask;
  solids_.push_back(std::move(solid));
}

void PiecewiseDomain::validate() const {
  if (faces_.empty()) throw Error(ErrorCode::GeometryInvalid, "domain has no boundary faces inside the bounding box");
  // Nonempty interior.
  const int per = dim_ == 1 ? 24 : 10;
  bool found = false;
  const int total = dim_ == 1 ? per * per : per * per * per * per;
  for (int idx = 0; idx < total && !found; ++idx) {
    RVec p{};
    int rem = idx;
    for (int a = 0; a < 2 * dim_; ++a) {
      const int i = rem % per;
      rem /= per;
      const std::size_t s = static_cast<std::size_t>(a);
      p[s] = box_.lo[s] + (box_.hi[s] - box_.lo[s]) * (i + 0.5) / per;
    }
    found = contains(to_complex(p));
  }
  if (!found) throw Error(ErrorCode::GeometryInvalid, "domain is empty (no interior grid point found)");

  for (const auto& s : sample_boundary(dim_ == 1 ? 16 : 4)) {
    const SmoothPiece& piece = pieces_[static_cast<std::size_t>(faces_[s.patch].owner)];
    const double g = norm(piece.grad_rho(s.z));
    if (!(g > 1e-10)) throw Error(ErrorCode::GeometryInvalid, "defining function has vanishing gradient on its zero set");
    if (std::abs(piece.rho(s.z)) > 1e-8 * std::max(1.0, g))
      throw Error(ErrorCode::GeometryInvalid, "face patch leaves the zero set of its piece");
  }
}

std::vector<BoundarySample> PiecewiseDomain::sample_boundary(int per_dim) const {
  std::vector<BoundarySample> out;
  for (std::size_t pi = 0; pi < faces_.size(); ++pi) {
    const FacePatch& patch = faces_[pi];
    int total = 1;
    for (int d = 0; d < patch.param_dim; ++d) total *= per_dim;
    for (int idx = 0; idx < total; ++idx) {
      RVec s{};
      int rem = idx;
      for (int d = 0; d < patch.param_dim; ++d) {
        const int i = rem % per_dim;
        rem /= per_dim;
        const std::size_t dd = static_cast<std::size_t>(d);
        s[dd] = patch.lo[dd] + (patch.hi[dd] - patch.lo[dd]) * (i + 0.5) / per_dim;
      }
      const CPoint z = patch.point(s);
      if (patch.active(z)) out.push_back({z, pi, s});
    }
  }
  return out;
}

PiecewiseDomain::BoundaryMinimum PiecewiseDomain::minimize_over_boundary(
    const std::function<double(const CPoint&)>& objective, int grid_per_dim) const {
  if (grid_per_dim <= 0) grid_per_dim = dim_ == 1 ? 64 : 10;
  const double inf = std::numeric_limits<double>::infinity();
  auto eval = [&](const FacePatch& patch, const RVec& s) {
    const CPoint z = patch.point(s);
    return patch.active(z) ? objective(z) : inf;
  };

  struct Candidate {
    double value;
    std::size_t patch;
    RVec s;
  };
  std::vector<Candidate> cands;
  for (const auto& b : sample_boundary(grid_per_dim)) cands.push_back({objective(b.z), b.patch, b.params});
  if (cands.empty()) throw Error(ErrorCode::GeometryInvalid, "boundary has no active samples");
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  if (cands.size() > 4) cands.resize(4);

  BoundaryMinimum best;
  best.value = inf;
  for (Candidate c : cands) {
    const FacePatch& patch = faces_[c.patch];
    RVec step{};
    for (int d = 0; d < patch.param_dim; ++d)
      step[static_cast<std::size_t>(d)] = (patch.hi[static_cast<std::size_t>(d)] - patch.lo[static_cast<std::size_t>(d)]) / grid_per_dim;
    for (int iter = 0; iter < 400; ++iter) {
      bool improved = false;
      for (int d = 0; d < patch.param_dim; ++d) {
        const std::size_t dd = static_cast<std::size_t>(d);
        for (double sign : {1.0, -1.0}) {
          RVec t = c.s;
          t[dd] = std::clamp(t[dd] + sign * step[dd], patch.lo[dd], patch.hi[dd]);
          const double v = eval(patch, t);
          if (v < c.value) {
            c.value = v;
            c.s = t;
            improved = true;
          }
        }
      }
      if (!improved) {
        bool tiny = true;
        for (int d = 0; d < patch.param_dim; ++d) {
          const std::size_t dd = static_cast<std::size_t>(d);
          step[dd] *= 0.5;
          if (step[dd] > 1e-13 * (1.0 + std::abs(patch.hi[dd] - patch.lo[dd]))) tiny = false;
        }
        if (tiny) break;
      }
    }
    if (c.value < best.value) {
      best.value = c.value;
      best.patch = c.patch;
      best.params = c.s;
      best.z = patch.point(c.s);
    }
  }
  return best;
}

double PiecewiseDomain::boundary_distance(const CPoint& z) const {
  if (!contains(z)) throw Error(ErrorCode::OutsideDomain, "point is not in the open domain");
  return minimize_over_boundary([&](const CPoint& p) { return distance(p, z); }).value;
}

}  // namespace bcurrent
