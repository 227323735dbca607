// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bcurrent/asymptotics.hpp"

namespace bcurrent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int initial_cells_per_dim(int param_dim) {
  switch (param_dim) {
    case 1: return 8;
    case 2: return 4;
    default: return 2;
  }
}

struct Minimum {
  double value = kInf;
  RVec at{};
};

/// Grid search over the dims in `mask` (others pinned to `base`), refined by
/// a shrinking compass search.
Minimum minimize_masked(unsigned mask, const RVec& lo, const RVec& hi, const RVec& base,
                        const std::function<double(const RVec&)>& obj, int per_dim) {
  std::vector<int> dims;
  for (int d = 0; d < 4; ++d)
    if (mask & (1u << d)) dims.push_back(d);
  Minimum best;
  best.at = base;
  std::vector<int> idx(dims.size(), 0);
  while (true) {
    RVec s = base;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const auto d = static_cast<std::size_t>(dims[k]);
      s[d] = lo[d] + (hi[d] - lo[d]) * (idx[k] + 0.5) / per_dim;
    }
    const double v = obj(s);
    if (v < best.value) best = {v, s};
    std::size_t k = 0;
    while (k < dims.size() && ++idx[k] == per_dim) idx[k++] = 0;
    if (k == dims.size()) break;
  }
  if (!std::isfinite(best.value)) return best;
  RVec step{};
  for (int d : dims) step[static_cast<std::size_t>(d)] = (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)]) / per_dim;
  for (int it = 0; it < 200; ++it) {
    bool improved = false;
    for (int d : dims) {
      const auto u = static_cast<std::size_t>(d);
      for (double sgn : {-1.0, 1.0}) {
        RVec s = best.at;
        s[u] = std::clamp(s[u] + sgn * step[u], lo[u], hi[u]);
        const double v = obj(s);
        if (v < best.value) {
          best = {v, s};
          improved = true;
        }
      }
    }
    if (!improved) {
      bool tiny = true;
      for (int d : dims) {
        step[static_cast<std::size_t>(d)] *= 0.5;
        tiny = tiny && step[static_cast<std::size_t>(d)] < 1e-15 * (1.0 + std::abs(best.at[static_cast<std::size_t>(d)]));
      }
      if (tiny) break;
    }
  }
  return best;
}

/// Parameter sub-box of `patch` on which chart `ci` can be nonzero; false
/// when it is empty.
bool chart_support_box(const FacePatch& patch, const ChartCover& cover, std::size_t ci, RVec& lo, RVec& hi) {
  const TranslationChart& chart = cover.charts()[ci];
  lo = patch.lo;
  hi = patch.hi;
  const int ac = patch.arc_coord();
  const int ai = chart.part_index[static_cast<std::size_t>(ac)];
  {
    constexpr int n = 4096;
    const double a = patch.lo[0], b = patch.hi[0], h = (b - a) / n;
    int first = -1, last = -1;
    for (int k = 0; k <= n; ++k) {
      if (cover.factor_weight(ac, ai, patch.arc().point(a + k * h)) > 0.0) {
        if (first < 0) first = k;
        last = k;
      }
    }
    if (first < 0) return false;
    lo[0] = std::max(a, a + (first - 1) * h);
    hi[0] = std::min(b, a + (last + 1) * h);
  }
  if (patch.param_dim == 3) {
    constexpr int n = 64;
    const int sc = patch.solid_coord();
    const int si = chart.part_index[static_cast<std::size_t>(sc)];
    const double hu = (patch.hi[1] - patch.lo[1]) / n, hw = (patch.hi[2] - patch.lo[2]) / n;
    int ulo = n + 1, uhi = -1, wlo = n + 1, whi = -1;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) {
        const cplx w = patch.solid().point(patch.lo[1] + i * hu, patch.lo[2] + j * hw);
        if (cover.factor_weight(sc, si, w) > 0.0) {
          ulo = std::min(ulo, i), uhi = std::max(uhi, i);
          wlo = std::min(wlo, j), whi = std::max(whi, j);
        }
      }
    if (uhi < 0) return false;
    lo[1] = std::max(patch.lo[1], patch.lo[1] + (ulo - 1) * hu);
    hi[1] = std::min(patch.hi[1], patch.lo[1] + (uhi + 1) * hu);
    lo[2] = std::max(patch.lo[2], patch.lo[2] + (wlo - 1) * hw);
    hi[2] = std::min(patch.hi[2], patch.lo[2] + (whi + 1) * hw);
  }
  return true;
}

/// Refinement targets for the translated poles; throws PoleOnBoundary.
std::vector<RefineTarget> pole_targets(const FacePatch& patch, const ChartCover& cover, std::size_t ci,
                                       const HolomorphicFunction& shifted, double eps, const RVec& lo,
                                       const RVec& hi, const QuadratureSpec& spec) {
  std::vector<RefineTarget> out;
  const TranslationChart& chart = cover.charts()[ci];
  RVec mid{};
  for (int d = 0; d < patch.param_dim; ++d) mid[static_cast<std::size_t>(d)] = 0.5 * (lo[static_cast<std::size_t>(d)] + hi[static_cast<std::size_t>(d)]);
  for (const PoleLocus& l : shifted.poles) {
    const int k = l.single_coordinate();
    unsigned mask = 0;
    std::function<double(const RVec&)> obj;
    if (k >= 0 && k == patch.arc_coord()) {
      const cplx w = l.c / l.a[static_cast<std::size_t>(k)];
      const int ai = chart.part_index[static_cast<std::size_t>(k)];
      mask = 1u;
      obj = [&, w, ai, k](const RVec& s) {
        const cplx p = patch.arc().point(s[0]);
        return cover.factor_weight(k, ai, p) > 0.0 ? std::abs(p - w) : kInf;
      };
    } else if (k >= 0 && patch.param_dim == 3) {
      const cplx w = l.c / l.a[static_cast<std::size_t>(k)];
      const int si = chart.part_index[static_cast<std::size_t>(k)];
      mask = 6u;
      obj = [&, w, si, k](const RVec& s) {
        const cplx p = patch.solid().point(s[1], s[2]);
        return cover.factor_weight(k, si, p) > 0.0 ? std::abs(p - w) : kInf;
      };
    } else {
      mask = patch.param_dim == 1 ? 1u : 7u;
      obj = [&](const RVec& s) {
        const CPoint z = patch.point(s);
        return cover.weight(ci, z) > 0.0 ? l.distance(z) : kInf;
      };
    }
    const int per_dim = mask == 1u ? 2048 : mask == 6u ? 64 : 16;
    const Minimum m = minimize_masked(mask, lo, hi, mid, obj, per_dim);
    if (!std::isfinite(m.value)) continue;
    if (m.value < 1e-9)
      throw Error(ErrorCode::PoleOnBoundary, "translated pole meets the boundary in chart " + chart.label);
    if (m.value < 10.0 * eps) {
      double width0 = 0.0;
      for (int d = 0; d < 4; ++d)
        if (mask & (1u << d))
          width0 = std::max(width0, (hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)]) / initial_cells_per_dim(patch.param_dim));
      const int depth = std::clamp(static_cast<int>(std::ceil(std::log2(width0 / m.value))) + 1,
                                   spec.corner_refine_depth, 50);
      RefineTarget t;
      t.value = m.at;
      t.mask = mask;
      t.depth = depth;
      out.push_back(t);
    }
  }
  return out;
}

IntegralResult chart_contribution(const PiecewiseDomain& domain, const HolomorphicFunction& f, const TestForm& psi,
                                  const ChartCover& cover, std::size_t ci, double eps, const QuadratureSpec& spec,
                                  std::vector<CellRecord>* history) {
  const TranslationChart& chart = cover.charts()[ci];
  const HolomorphicFunction shifted = translate(f, chart.v, eps);
  const int dim = domain.dim();
  IntegralResult total;
  for (const FacePatch& patch : domain.face_patches()) {
    RVec lo, hi;
    if (!chart_support_box(patch, cover, ci, lo, hi)) continue;
    const auto targets = pole_targets(patch, cover, ci, shifted, eps, lo, hi, spec);
    auto integrand = [&](const CPoint& z, const std::array<RVec, 3>& frame, const RVec&) -> cplx {
      const double w = cover.weight(ci, z);
      if (w == 0.0) return 0.0;
      const auto g = psi.coefficients(z);
      if (g[0] == cplx(0.0) && g[1] == cplx(0.0)) return 0.0;
      return shifted(z) * w * form_on_frame(dim, g, frame);
    };
    total += integrate_face(patch, integrand, spec, targets, &lo, &hi, history);
  }
  return total;
}

PairingSample assemble(double eps, const std::vector<IntegralResult>& parts) {
  PairingSample s;
  s.epsilon = eps;
  for (const auto& r : parts) {
    s.per_chart.push_back(r.value);
    s.value += r.value;
    s.err_est += r.err_est;
    s.cells_used += r.cells_used;
    s.converged = s.converged && r.converged;
  }
  return s;
}

std::vector<CPoint> closure_samples(const PiecewiseDomain& domain) {
  std::vector<CPoint> pts;
  const int dim = domain.dim();
  const Box& box = domain.bounding_box();
  const int per = dim == 1 ? 12 : 8;
  const int nd = 2 * dim;
  std::vector<int> idx(static_cast<std::size_t>(nd), 0);
  while (true) {
    RVec p{};
    for (int a = 0; a < nd; ++a) {
      const auto u = static_cast<std::size_t>(a);
      p[u] = box.lo[u] + (box.hi[u] - box.lo[u]) * (idx[u] + 0.5) / per;
    }
    const CPoint z = to_complex(p);
    if (domain.in_closure(z)) pts.push_back(z);
    int a = 0;
    while (a < nd && ++idx[static_cast<std::size_t>(a)] == per) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == nd) break;
  }
  for (const auto& s : domain.sample_boundary(dim == 1 ? 64 : 8)) pts.push_back(s.z);
  return pts;
}

bool pole_inside(const HolomorphicFunction& f, const PiecewiseDomain& domain) {
  for (const auto& l : f.poles) {
    const int k = l.single_coordinate();
    if (k < 0) continue;
    CPoint z{};
    z[static_cast<std::size_t>(k)] = l.c / l.a[static_cast<std::size_t>(k)];
    bool inside = true;
    for (const auto& p : domain.pieces())
      if (p.coordinate_mask() == (1u << k) && p.rho(z) >= 0.0) inside = false;
    if (inside) return true;
  }
  return false;
}

}  // namespace

void Schedule::validate() const {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw Error(ErrorCode::InvalidArgument, "eps0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidArgument, "ratio must lie in (0, 1)");
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  if (epsilon(steps - 1) <= 0.0) throw Error(ErrorCode::InvalidArgument, "schedule underflows");
}

double Schedule::epsilon(int k) const { return eps0 * std::pow(ratio, k); }

PairingSample pairing_at_epsilon(const PiecewiseDomain& domain, const HolomorphicFunction& f, const TestForm& psi,
                                 const ChartCover& cover, double eps, const QuadratureSpec& spec, unsigned threads,
                                 std::vector<CellRecord>* history) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  spec.validate();
  const std::size_t n = cover.charts().size();
  std::vector<IntegralResult> parts(n);
  std::vector<std::vector<CellRecord>> logs(history ? n : 0);
  parallel_for(n, threads, [&](std::size_t i) {
    parts[i] = chart_contribution(domain, f, psi, cover, i, eps, spec, history ? &logs[i] : nullptr);
  });
  if (history)
    for (auto& l : logs) history->insert(history->end(), l.begin(), l.end());
  return assemble(eps, parts);
}

std::vector<PairingSample> pairing_sequence(const PiecewiseDomain& domain, const HolomorphicFunction& f,
                                            const TestForm& psi, const ChartCover& cover, const Schedule& schedule,
                                            const QuadratureSpec& spec, unsigned threads) {
  schedule.validate();
  spec.validate();
  const std::size_t nc = cover.charts().size();
  const auto ns = static_cast<std::size_t>(schedule.steps);
  std::vector<IntegralResult> parts(nc * ns);
  parallel_for(nc * ns, threads, [&](std::size_t t) {
    const std::size_t k = t / nc, i = t % nc;
    parts[t] = chart_contribution(domain, f, psi, cover, i, schedule.epsilon(static_cast<int>(k)), spec, nullptr);
  });
  std::vector<PairingSample> out;
  for (std::size_t k = 0; k < ns; ++k)
    out.push_back(assemble(schedule.epsilon(static_cast<int>(k)),
                           std::vector<IntegralResult>(parts.begin() + static_cast<std::ptrdiff_t>(k * nc),
                                                       parts.begin() + static_cast<std::ptrdiff_t>((k + 1) * nc))));
  return out;
}

double calibrate_stokes_sign(const PiecewiseDomain& domain, const TestForm& psi, const QuadratureSpec& spec) {
  const int dim = domain.dim();
  const IntegralResult b = integrate_boundary(
      domain, [&](const CPoint& z, const std::array<RVec, 3>& fr, const RVec&) {
        return form_on_frame(dim, psi.coefficients(z), fr);
      },
      spec);
  const IntegralResult v = integrate_volume(domain, [&](const CPoint& z) { return psi.dbar_density(z); }, spec);
  if (std::abs(v.value) < 1e-12) throw Error(ErrorCode::InvalidArgument, "calibration form has zero dbar integral");
  return (b.value / v.value).real() >= 0.0 ? 1.0 : -1.0;
}

StokesResult stokes_oracle(const PiecewiseDomain& domain, const HolomorphicFunction& f, const TestForm& psi,
                           const QuadratureSpec& spec, int l1_budget) {
  spec.validate();
  if (pole_inside(f, domain)) throw Error(ErrorCode::PoleInside, "pole locus meets the interior of the domain");
  StokesResult out;
  QuadratureSpec check = spec;
  check.max_subdivisions = std::min(spec.max_subdivisions, l1_budget);
  check.rel_tol = std::max(spec.rel_tol, 1e-6);
  check.abs_tol = std::max(spec.abs_tol, 1e-10);
  out.abs_check = integrate_volume(domain, [&](const CPoint& z) { return cplx(std::abs(f(z))); }, check);
  if (!out.abs_check.converged)
    throw Error(ErrorCode::NotL1, "int |f| over the domain does not converge within the check budget");
  out.integral = integrate_volume(domain, [&](const CPoint& z) {
    const cplx d = psi.dbar_density(z);
    return d == cplx(0.0) ? cplx(0.0) : f(z) * d;
  }, spec);
  out.value = kStokesSign * out.integral.value;
  return out;
}

std::vector<FaceDistribution> restrict_to_faces(const PiecewiseDomain& domain, const HolomorphicFunction& f) {
  std::vector<FaceDistribution> out;
  for (std::size_t j = 0; j < domain.pieces().size(); ++j) {
    FaceDistribution d;
    d.face_index = static_cast<int>(j);
    d.density = [f](const CPoint& z) { return f(z); };
    d.support_mask = [&domain](const CPoint& z) { return domain.in_closure(z); };
    out.push_back(std::move(d));
  }
  return out;
}

IntegralResult face_distribution_pairing(const PiecewiseDomain& domain, const std::vector<FaceDistribution>& dists,
                                         const TestForm& psi, const QuadratureSpec& spec) {
  const int dim = domain.dim();
  IntegralResult total;
  for (const FacePatch& patch : domain.face_patches()) {
    for (const auto& d : dists) {
      if (d.face_index != patch.owner) continue;
      auto integrand = [&](const CPoint& z, const std::array<RVec, 3>& frame, const RVec&) -> cplx {
        if (d.support_mask && !d.support_mask(z)) return 0.0;
        const auto g = psi.coefficients(z);
        if (g[0] == cplx(0.0) && g[1] == cplx(0.0)) return 0.0;
        return d.density(z) * form_on_frame(dim, g, frame);
      };
      total += integrate_face(patch, integrand, spec);
    }
  }
  return total;
}

double closure_defect(const TestForm& psi, const PiecewiseDomain& domain) {
  double dmax = 0.0, gmax = 0.0;
  for (const CPoint& z : closure_samples(domain)) {
    dmax = std::max(dmax, std::abs(psi.dbar_density(z)));
    const auto g = psi.coefficients(z);
    gmax = std::max({gmax, std::abs(g[0]), std::abs(g[1])});
  }
  return dmax / std::max(1.0, gmax);
}

WeinstockReport weinstock_test(const PiecewiseDomain& domain, const HolomorphicFunction& f,
                               const std::vector<TestForm>& forms, const ChartCover* cover,
                               const QuadratureSpec& spec, const WeinstockOptions& options) {
  spec.validate();
  if (forms.empty()) throw Error(ErrorCode::InvalidArgument, "no test forms given");
  const double pd = pole_distance_to_closure(f, domain);
  if (pole_inside(f, domain)) throw Error(ErrorCode::PoleInside, "pole locus meets the interior of the domain");

  WeinstockReport report;
  report.route = pd > 1e-9 ? "face-distribution" : "pairing-limit";
  const double diam = domain.diameter();
  double sum = 0.0;
  long count = 0;
  for (const auto& s : domain.sample_boundary(domain.dim() == 1 ? 512 : 16)) {
    if (pole_distance(f, s.z) < 1e-2 * diam) continue;
    sum += std::norm(f(s.z));
    ++count;
  }
  report.scale = std::max(1.0, count > 0 ? std::sqrt(sum / static_cast<double>(count)) : 1.0);
  report.tolerance = 1e-6 * report.scale;

  std::optional<ChartCover> own_cover;
  if (report.route == "pairing-limit" && !cover) {
    own_cover = build_chart_cover(domain);
    cover = &*own_cover;
  }
  const auto dists = restrict_to_faces(domain, f);
  bool pass = true;
  for (const TestForm& psi : forms) {
    WeinstockEntry e;
    e.label = psi.label;
    e.closure_defect = closure_defect(psi, domain);
    e.closed = e.closure_defect <= 1e-8;
    if (!e.closed && !options.force)
      throw Error(ErrorCode::FormNotClosed, "test form " + psi.label + " is not dbar-closed on the closure");
    if (report.route == "face-distribution") {
      const IntegralResult r = face_distribution_pairing(domain, dists, psi, spec);
      e.pairing = r.value;
      e.err_est = r.err_est;
      e.converged = r.converged;
    } else {
      const auto seq = pairing_sequence(domain, f, psi, *cover, options.schedule, spec, options.threads);
      e.pairing = richardson_limit(seq);
      for (const auto& s : seq) e.converged = e.converged && s.converged;
      const std::size_t n = seq.size();
      e.err_est = n >= 2 ? std::abs(seq[n - 1].value - seq[n - 2].value) : 0.0;
    }
    if (e.closed) pass = pass && e.converged && std::abs(e.pairing) <= report.tolerance;
    report.entries.push_back(e);
  }
  report.pass = pass;
  return report;
}

}  // namespace bcurrent
