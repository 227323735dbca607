// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace bcurrent {

namespace {

CPoint shift_of(const RVec& v, double eps) {
  return {cplx(eps * v[0], eps * v[1]), cplx(eps * v[2], eps * v[3])};
}

bool in_factor(const PiecewiseDomain& domain, int coord, cplx w, bool closed) {
  CPoint z{};
  z[static_cast<std::size_t>(coord)] = w;
  for (int j : domain.factors()[static_cast<std::size_t>(coord)].pieces) {
    const auto& p = domain.pieces()[static_cast<std::size_t>(j)];
    const double r = p.rho(z);
    if (closed ? r > 1e-9 * std::max(1.0, norm(p.grad_rho(z))) : r >= 0.0) return false;
  }
  return true;
}

/// A point of the locus when it is {z_k = const}; the other coordinate is an
/// interior point of its factor.
CPoint locus_point(const PiecewiseDomain& domain, const PoleLocus& l) {
  const int k = l.single_coordinate();
  CPoint z{};
  z[static_cast<std::size_t>(k)] = l.c / l.a[static_cast<std::size_t>(k)];
  if (domain.dim() == 2) {
    const int o = 1 - k;
    const SolidChart& sc = domain.factors()[static_cast<std::size_t>(o)].solid;
    z[static_cast<std::size_t>(o)] = sc.kind == SolidChart::Kind::Polar
                                         ? sc.center
                                         : cplx(0.5 * (sc.lo[0] + sc.hi[0]), 0.5 * (sc.lo[1] + sc.hi[1]));
  }
  return z;
}

}  // namespace

HolomorphicFunction make_function(const std::string& text, int dim) {
  const Expression e = Expression::parse(text, Expression::Domain::Holomorphic);
  if (e.dimension() > dim) throw Error(ErrorCode::ConfigParse, "function '" + text + "' uses a coordinate beyond C^" + std::to_string(dim));
  HolomorphicFunction f;
  f.dim = dim;
  f.evaluator = [e](const CPoint& z) { return e(z); };
  f.poles = e.pole_loci();
  f.label = text;
  return f;
}

HolomorphicFunction translate(const HolomorphicFunction& f, const RVec& v, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "translation parameter must be positive");
  HolomorphicFunction g;
  g.dim = f.dim;
  const CPoint s = shift_of(v, eps);
  g.evaluator = [inner = f.evaluator, s](const CPoint& z) { return inner(z - s); };
  for (const auto& p : f.poles) g.poles.push_back(p.shifted(s));
  g.label = f.label;
  return g;
}

double pole_distance(const HolomorphicFunction& f, const CPoint& z) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : f.poles) d = std::min(d, p.distance(z));
  return d;
}

double pole_distance_to_closure(const HolomorphicFunction& f, const PiecewiseDomain& domain) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& l : f.poles) {
    const int k = l.single_coordinate();
    if (k >= 0 && in_factor(domain, k, l.c / l.a[static_cast<std::size_t>(k)], true)) return 0.0;
    const auto m = domain.minimize_over_boundary([&](const CPoint& z) { return l.distance(z); });
    best = std::min(best, m.value);
  }
  return best;
}

double cauchy_riemann_defect(const HolomorphicFunction& f, const PiecewiseDomain& domain, int points) {
  std::mt19937 rng(20240607u);
  const Box& box = domain.bounding_box();
  const double floor_dist = 1e-3 * domain.diameter();
  double worst = 0.0;
  int found = 0;
  for (int attempt = 0; attempt < 100000 && found < points; ++attempt) {
    RVec p{};
    for (int a = 0; a < 2 * domain.dim(); ++a) {
      std::uniform_real_distribution<double> u(box.lo[static_cast<std::size_t>(a)], box.hi[static_cast<std::size_t>(a)]);
      p[static_cast<std::size_t>(a)] = u(rng);
    }
    const CPoint z = to_complex(p);
    if (!domain.contains(z) || pole_distance(f, z) < floor_dist) continue;
    ++found;
    for (int k = 0; k < domain.dim(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(z[static_cast<std::size_t>(k)]));
      CPoint zp = z, zm = z, zi = z, zj = z;
      zp[static_cast<std::size_t>(k)] += h;
      zm[static_cast<std::size_t>(k)] -= h;
      zi[static_cast<std::size_t>(k)] += cplx(0.0, h);
      zj[static_cast<std::size_t>(k)] -= cplx(0.0, h);
      const cplx dx = (f(zp) - f(zm)) / (2.0 * h);
      const cplx dy = (f(zi) - f(zj)) / (2.0 * h);
      const double scale = std::max({std::abs(dx), std::abs(dy), 1e-12 * std::max(1.0, std::abs(f(z)))});
      if (scale == 0.0) continue;
      worst = std::max(worst, std::abs(dx + cplx(0.0, 1.0) * dy) / scale);
    }
  }
  if (found == 0) throw Error(ErrorCode::GeometryInvalid, "no interior sample points for the Cauchy-Riemann check");
  return worst;
}

GrowthEstimate estimate_growth(const HolomorphicFunction& f, const PiecewiseDomain& domain, int n_rays) {
  if (n_rays < 1) throw Error(ErrorCode::InvalidArgument, "n_rays must be positive");
  const int dim = domain.dim();

  std::vector<CPoint> targets;
  for (const auto& l : f.poles) {
    const int k = l.single_coordinate();
    if (k < 0) throw Error(ErrorCode::Unsupported, "growth estimation needs poles of the form z_k = const");
    const cplx w = l.c / l.a[static_cast<std::size_t>(k)];
    if (in_factor(domain, k, w, false)) throw Error(ErrorCode::PoleInside, "pole locus meets the interior of the domain");
    if (in_factor(domain, k, w, true)) targets.push_back(locus_point(domain, l));
  }
  if (targets.empty()) {
    for (const auto& patch : domain.face_patches()) {
      RVec s{};
      for (int i = 0; i < patch.param_dim; ++i)
        s[static_cast<std::size_t>(i)] = 0.5 * (patch.lo[static_cast<std::size_t>(i)] + patch.hi[static_cast<std::size_t>(i)]);
      const CPoint z = patch.point(s);
      if (patch.active(z)) targets.push_back(z);
    }
  }

  const double diam = domain.diameter();
  const double probe = 1e-6 * diam;
  std::vector<std::pair<CPoint, RVec>> rays;  // (origin, unit direction)
  for (const CPoint& p : targets) {
    const RVec base = to_real(p);
    auto inward = [&](const RVec& u) {
      RVec q = base;
      for (int a = 0; a < 4; ++a) q[static_cast<std::size_t>(a)] += probe * u[static_cast<std::size_t>(a)];
      return domain.contains(to_complex(q));
    };
    if (dim == 1) {
      constexpr int kAngles = 720;
      std::vector<bool> ok(kAngles);
      for (int i = 0; i < kAngles; ++i) {
        const double th = 2.0 * std::numbers::pi * i / kAngles;
        ok[static_cast<std::size_t>(i)] = inward({std::cos(th), std::sin(th), 0.0, 0.0});
      }
      int start = 0;
      while (start < kAngles && ok[static_cast<std::size_t>(start)]) ++start;
      std::vector<int> valid;
      for (int i = 1; i <= kAngles; ++i) {
        const int j = (start + i) % kAngles;
        if (ok[static_cast<std::size_t>(j)]) valid.push_back(j);
      }
      if (valid.empty()) continue;
      for (int r = 0; r < n_rays; ++r) {
        const int j = valid[static_cast<std::size_t>((r + 0.5) / n_rays * static_cast<double>(valid.size()))];
        const double th = 2.0 * std::numbers::pi * j / kAngles;
        rays.push_back({p, {std::cos(th), std::sin(th), 0.0, 0.0}});
      }
    } else {
      std::mt19937 rng(4242u);
      std::normal_distribution<double> g(0.0, 1.0);
      int got = 0;
      for (int draw = 0; draw < 20000 && got < n_rays; ++draw) {
        RVec u{g(rng), g(rng), g(rng), g(rng)};
        const double nu = norm(u);
        for (double& c : u) c /= nu;
        if (!inward(u)) continue;
        rays.push_back({p, u});
        ++got;
      }
    }
  }
  if (rays.empty()) throw Error(ErrorCode::TooFewSamples, "no inward rays found");

  auto at = [](const CPoint& p, const RVec& u, double s) {
    RVec q = to_real(p);
    for (int a = 0; a < 4; ++a) q[static_cast<std::size_t>(a)] += s * u[static_cast<std::size_t>(a)];
    return to_complex(q);
  };

  GrowthEstimate out;
  for (int m = 3; m <= 12; ++m) {
    const double d = std::ldexp(1.0, -m);
    double env = -1.0;
    for (const auto& [p, u] : rays) {
      double lo = 0.0, hi = d;
      bool bracketed = false;
      for (int it = 0; it < 60 && hi < diam; ++it) {
        const CPoint z = at(p, u, hi);
        if (!domain.contains(z)) break;
        if (domain.boundary_distance(z) >= d) {
          bracketed = true;
          break;
        }
        lo = hi;
        hi *= 1.5;
      }
      if (!bracketed) continue;
      for (int it = 0; it < 60 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const CPoint z = at(p, u, mid);
        if (domain.contains(z) && domain.boundary_distance(z) < d)
          lo = mid;
        else
          hi = mid;
      }
      env = std::max(env, std::abs(f(at(p, u, hi))));
    }
    if (env < 0.0) continue;
    out.distances.push_back(d);
    out.envelope.push_back(env);
  }
  const int n = static_cast<int>(out.distances.size());
  if (n < 3) throw Error(ErrorCode::TooFewSamples, "too few distance levels reached for the growth fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(out.distances[static_cast<std::size_t>(i)]);
    const double y = std::log(std::max(out.envelope[static_cast<std::size_t>(i)], 1e-300));
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_tot = 0.0, ss_res = 0.0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double yi = ys[static_cast<std::size_t>(i)];
    ss_tot += (yi - ybar) * (yi - ybar);
    const double r = yi - (intercept + slope * xs[static_cast<std::size_t>(i)]);
    ss_res += r * r;
  }
  out.k_hat = std::max(0.0, -slope);
  out.C_hat = std::exp(intercept);
  out.r2 = ss_tot <= 1e-20 * std::max(1.0, ybar * ybar) ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  out.samples_used = n * static_cast<int>(rays.size());
  return out;
}

}  // namespace bcurrent
