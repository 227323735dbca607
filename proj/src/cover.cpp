// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bcurrent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double dh(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

double arc_distance(const PlanarArc& arc, double ta, double tb, cplx w) {
  if (!arc.round) {
    const double t = std::clamp(std::real((w - arc.origin) * std::conj(arc.direction)), ta, tb);
    return std::abs(w - arc.point(t));
  }
  const cplx d = w - arc.center;
  double th = std::arg(d);
  double rel = std::fmod(th - ta, kTwoPi);
  if (rel < 0.0) rel += kTwoPi;
  if (ta + rel <= tb) return std::abs(std::abs(d) - arc.radius);
  return std::min(std::abs(w - arc.point(ta)), std::abs(w - arc.point(tb)));
}

cplx planar_gradient(const SmoothPiece& p, cplx w, int coord) {
  CPoint z{};
  z[static_cast<std::size_t>(coord)] = w;
  const RVec g = p.grad_rho(z);
  return {g[static_cast<std::size_t>(2 * coord)], g[static_cast<std::size_t>(2 * coord + 1)]};
}

/// Margin of a planar bump against the active pieces of its own factor.
double factor_margin(const FactorBump& bump, const PiecewiseDomain& domain, const PlanarFactor& factor) {
  double margin = std::numeric_limits<double>::infinity();
  for (const PlanarArc& arc : factor.arcs) {
    constexpr int kSamples = 2048;
    for (int i = 0; i <= kSamples; ++i) {
      const double t = arc.t0 + (arc.t1 - arc.t0) * i / kSamples;
      const cplx w = arc.point(t);
      if (!(bump.raw(w) > 0.0)) continue;
      for (int j : factor.pieces) {
        const SmoothPiece& p = domain.pieces()[static_cast<std::size_t>(j)];
        CPoint z{};
        z[static_cast<std::size_t>(factor.coord)] = w;
        const double g = norm(p.grad_rho(z));
        if (std::abs(p.rho(z)) > 1e-9 * std::max(1.0, g)) continue;
        const cplx gr = planar_gradient(p, w, factor.coord);
        margin = std::min(margin, gr.real() * bump.v.real() + gr.imag() * bump.v.imag());
      }
    }
  }
  return margin;
}

double margin_on(const TranslationChart& chart, const PiecewiseDomain& domain,
                 const std::vector<BoundarySample>& samples, int& used) {
  double margin = std::numeric_limits<double>::infinity();
  used = 0;
  for (const auto& s : samples) {
    if (!chart.in_region(s.z)) continue;
    ++used;
    for (int j : domain.active_pieces(s.z, 1e-9))
      margin = std::min(margin, dot(domain.pieces()[static_cast<std::size_t>(j)].grad_rho(s.z), chart.v));
  }
  return margin;
}

int initial_per_dim(int dim) { return dim == 1 ? 512 : 16; }
int max_per_dim(int dim) { return dim == 1 ? 16384 : 48; }
int next_per_dim(int dim, int p) { return dim == 1 ? 2 * p : p + 8; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = h(t), b = h(1.0 - t);
  return a / (a + b);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = h(t), b = h(1.0 - t);
  const double da = dh(t), db = -dh(1.0 - t);
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

double plateau(double s) { return smooth_step(2.0 * (1.0 - s)); }

double FactorBump::raw(cplx w) const {
  switch (kind) {
    case Kind::Corner: return plateau(std::abs(w - center) / radius);
    case Kind::Strip: return plateau(arc_distance(arc, ta, tb, w) / radius);
    case Kind::Interior: {
      double b = 1.0;
      CPoint z{};
      z[static_cast<std::size_t>(coord)] = w;
      for (const auto& p : pieces) {
        const double g = std::max(1e-300, norm(p.grad_rho(z)));
        b *= smooth_step(-p.rho(z) / g / delta);
        if (b == 0.0) break;
      }
      return b;
    }
  }
  return 0.0;
}

bool TranslationChart::in_region(const CPoint& z) const {
  for (int f = 0; f < dim; ++f) {
    const FactorBump& b = parts[static_cast<std::size_t>(f)];
    if (!(b.raw(z[static_cast<std::size_t>(b.coord)]) > 0.0)) return false;
  }
  return true;
}

double ChartCover::factor_weight(int f, int index, cplx w) const {
  const auto& list = bumps_[static_cast<std::size_t>(f)];
  const double own = list[static_cast<std::size_t>(index)].raw(w);
  if (own == 0.0) return 0.0;
  double total = 0.0;
  for (const auto& b : list) total += b.raw(w);
  return own / total;
}

double ChartCover::weight(std::size_t chart, const CPoint& z) const {
  const TranslationChart& c = charts_[chart];
  double w = 1.0;
  for (int f = 0; f < dim_; ++f) {
    w *= factor_weight(f, c.part_index[static_cast<std::size_t>(f)], z[static_cast<std::size_t>(f)]);
    if (w == 0.0) break;
  }
  return w;
}

double validate_outward(const TranslationChart& chart, const PiecewiseDomain& domain, int min_samples) {
  const int dim = domain.dim();
  for (int per = initial_per_dim(dim);; per = next_per_dim(dim, per)) {
    const auto samples = domain.sample_boundary(per);
    int used = 0;
    const double m = margin_on(chart, domain, samples, used);
    if (used >= min_samples || per >= max_per_dim(dim)) {
      if (used == 0) throw Error(ErrorCode::InvalidArgument, "chart region does not meet the boundary");
      return m;
    }
  }
}

ChartCover build_chart_cover(const PiecewiseDomain& domain, const CoverOptions& options) {
  if (!(options.corner_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "corner_radius must be positive");
  const double R = options.corner_radius;
  ChartCover cover;
  cover.dim_ = domain.dim();
  for (const PlanarFactor& factor : domain.factors()) {
    std::vector<FactorBump> list;
    FactorBump interior;
    interior.kind = FactorBump::Kind::Interior;
    interior.coord = factor.coord;
    interior.delta = 0.5 * R;
    for (int j : factor.pieces) interior.pieces.push_back(domain.pieces()[static_cast<std::size_t>(j)]);
    interior.label = "interior";
    list.push_back(interior);

    auto outward = [&](int j, cplx w) {
      const cplx g = planar_gradient(domain.pieces()[static_cast<std::size_t>(j)], w, factor.coord);
      return g / std::abs(g);
    };

    for (const cplx c : factor.corners) {
      FactorBump b;
      b.kind = FactorBump::Kind::Corner;
      b.coord = factor.coord;
      b.center = c;
      b.radius = R;
      cplx v = 0.0;
      for (int j : factor.pieces) {
        CPoint z{};
        z[static_cast<std::size_t>(factor.coord)] = c;
        const SmoothPiece& p = domain.pieces()[static_cast<std::size_t>(j)];
        if (std::abs(p.rho(z)) <= 1e-9 * std::max(1.0, norm(p.grad_rho(z)))) v += outward(j, c);
      }
      if (std::abs(v) < 1e-12) throw Error(ErrorCode::NoOutwardVector, "outward normals cancel at a corner");
      v /= std::abs(v);
      for (const auto& o : options.corner_vectors)
        if (o.coord == factor.coord && std::abs(o.at - c) < 1e-6) v = o.v;
      b.v = v;
      char buf[96];
      std::snprintf(buf, sizeof buf, "corner(%.6g,%.6g)", c.real() + 0.0, c.imag() + 0.0);
      b.label = buf;
      const double m = factor_margin(b, domain, factor);
      if (!(m > 0.0))
        throw Error(ErrorCode::NoOutwardVector, "no outward vector validates for " + b.label);
      list.push_back(b);
    }

    for (std::size_t ai = 0; ai < factor.arcs.size(); ++ai) {
      const PlanarArc& arc = factor.arcs[ai];
      const double speed = arc.round ? arc.radius : 1.0;
      const double ta = arc.t0 + (arc.corner_at_t0 ? 0.8 * R / speed : 0.0);
      const double tb = arc.t1 - (arc.corner_at_t1 ? 0.8 * R / speed : 0.0);
      if (!(tb > ta)) continue;
      int pieces = 1;
      if (arc.round)
        pieces = std::max(1, static_cast<int>(std::ceil((tb - ta) / kTwoPi * options.arc_pieces_per_circle - 1e-9)));
      for (;;) {
        std::vector<FactorBump> strips;
        bool ok = true;
        for (int k = 0; k < pieces && ok; ++k) {
          FactorBump b;
          b.kind = FactorBump::Kind::Strip;
          b.coord = factor.coord;
          b.arc = arc;
          b.ta = ta + (tb - ta) * k / pieces;
          b.tb = ta + (tb - ta) * (k + 1) / pieces;
          b.radius = 0.5 * R;
          b.v = outward(arc.piece, arc.point(0.5 * (b.ta + b.tb)));
          b.label = "strip(piece " + std::to_string(arc.piece) + ", arc " + std::to_string(ai) + ", " +
                    std::to_string(k + 1) + "/" + std::to_string(pieces) + ")";
          ok = factor_margin(b, domain, factor) > 0.0;
          strips.push_back(std::move(b));
        }
        if (ok) {
          list.insert(list.end(), strips.begin(), strips.end());
          break;
        }
        if (!arc.round || pieces >= 256)
          throw Error(ErrorCode::NoOutwardVector, "no outward vector validates along a face strip");
        pieces *= 2;
      }
    }
    cover.bumps_.push_back(std::move(list));
  }

  // Product charts, excluding the all-interior combination.
  const int dim = domain.dim();
  auto add_chart = [&](std::array<int, 2> idx) {
    TranslationChart c;
    c.dim = dim;
    c.part_index = idx;
    std::string label;
    RVec v{};
    int boundary_parts = 0;
    for (int f = 0; f < dim; ++f) {
      const FactorBump& b = cover.bumps_[static_cast<std::size_t>(f)][static_cast<std::size_t>(idx[static_cast<std::size_t>(f)])];
      c.parts[static_cast<std::size_t>(f)] = b;
      label += (f ? " x " : "") + b.label;
      v[static_cast<std::size_t>(2 * f)] = b.v.real();
      v[static_cast<std::size_t>(2 * f + 1)] = b.v.imag();
      if (b.kind != FactorBump::Kind::Interior) ++boundary_parts;
      c.corner = c.corner || b.kind == FactorBump::Kind::Corner;
    }
    if (boundary_parts > 1) {
      const double nv = norm(v);
      for (double& x : v) x /= nv;
    }
    c.v = v;
    c.label = label;
    cover.charts_.push_back(std::move(c));
  };
  if (dim == 1) {
    for (std::size_t a = 1; a < cover.bumps_[0].size(); ++a) add_chart({static_cast<int>(a), -1});
  } else {
    for (std::size_t a = 0; a < cover.bumps_[0].size(); ++a)
      for (std::size_t b = 0; b < cover.bumps_[1].size(); ++b)
        if (a != 0 || b != 0) add_chart({static_cast<int>(a), static_cast<int>(b)});
  }

  // Margins on one shared boundary sample set, refined until every chart sees enough points.
  std::vector<BoundarySample> samples;
  for (int per = initial_per_dim(dim);; per = next_per_dim(dim, per)) {
    samples = domain.sample_boundary(per);
    bool enough = true;
    for (auto& c : cover.charts_) {
      int used = 0;
      c.margin = margin_on(c, domain, samples, used);
      if (used < options.min_validation_samples) enough = false;
    }
    if (enough || per >= max_per_dim(dim)) break;
  }
  for (const auto& c : cover.charts_)
    if (!(c.margin > 0.0)) throw Error(ErrorCode::NoOutwardVector, "chart " + c.label + " has nonpositive margin");

  // Partition of unity on the boundary.
  double defect = 0.0;
  for (const auto& s : samples) {
    for (int f = 0; f < dim; ++f) {
      double total = 0.0;
      for (const auto& b : cover.bumps_[static_cast<std::size_t>(f)]) total += b.raw(s.z[static_cast<std::size_t>(f)]);
      if (!(total > 0.0)) throw Error(ErrorCode::CoverIncomplete, "boundary point not covered by any chart");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < cover.charts_.size(); ++i) sum += cover.weight(i, s.z);
    defect = std::max(defect, std::abs(sum - 1.0));
  }
  cover.partition_defect_ = defect;
  cover.partition_samples_ = samples.size();
  if (defect > 1e-10) throw Error(ErrorCode::CoverIncomplete, "partition of unity fails on the boundary");
  return cover;
}

}  // namespace bcurrent
