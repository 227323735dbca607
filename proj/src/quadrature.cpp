// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace bcurrent {

namespace {

struct Rule {
  std::vector<double> x, wk, wg;
};

Rule make_rule(const double (*half)[3], int count) {
  // half[i] = {abscissa >= 0, Kronrod weight, Gauss weight}, abscissa 0 last.
  Rule r;
  for (int i = 0; i < count; ++i) {
    if (half[i][0] == 0.0) continue;
    r.x.push_back(-half[i][0]);
    r.wk.push_back(half[i][1]);
    r.wg.push_back(half[i][2]);
  }
  for (int i = count - 1; i >= 0; --i) {
    r.x.push_back(half[i][0]);
    r.wk.push_back(half[i][1]);
    r.wg.push_back(half[i][2]);
  }
  return r;
}

const Rule& gk15() {
  static const double half[8][3] = {
      {0.99145537112081261, 0.022935322010529224, 0.0},
      {0.94910791234275849, 0.063092092629978558, 0.1294849661688697},
      {0.8648644233597691, 0.10479001032225019, 0.0},
      {0.74153118559939446, 0.14065325971552592, 0.27970539148927664},
      {0.58608723546769115, 0.16900472663926791, 0.0},
      {0.40584515137739718, 0.19035057806478542, 0.38183005050511892},
      {0.20778495500789848, 0.20443294007529889, 0.0},
      {0.0, 0.20948214108472782, 0.4179591836734694},
  };
  static const Rule r = make_rule(half, 8);
  return r;
}

const Rule& gk7() {
  static const double half[4][3] = {
      {0.96049126870802026, 0.10465622602646729, 0.0},
      {0.7745966692414834, 0.26848808986833339, 0.55555555555555547},
      {0.43424374934680254, 0.40139741477596219, 0.0},
      {0.0, 0.45091653865847409, 0.88888888888888884},
  };
  static const Rule r = make_rule(half, 4);
  return r;
}

struct Cell {
  RVec lo{}, hi{};
  cplx value{};
  double err = 0.0;
  int split_dim = 0;
  int generation = 0;
  bool alive = true;
  bool frozen = false;
};

void evaluate(int dim, Cell& c, const BoxIntegrand& f) {
  const Rule& rule = dim <= 3 ? gk15() : gk7();
  const int q = static_cast<int>(rule.x.size());
  RVec mid{}, half{};
  double jac = 1.0;
  for (int d = 0; d < dim; ++d) {
    const std::size_t s = static_cast<std::size_t>(d);
    mid[s] = 0.5 * (c.lo[s] + c.hi[s]);
    half[s] = 0.5 * (c.hi[s] - c.lo[s]);
    jac *= half[s];
  }
  int total = 1;
  for (int d = 0; d < dim; ++d) total *= q;
  cplx K = 0.0;
  std::array<cplx, 4> Rd{};
  int idx[4] = {0, 0, 0, 0};
  RVec s{};
  for (int n = 0; n < total; ++n) {
    int rem = n;
    double wprod = 1.0;
    for (int d = 0; d < dim; ++d) {
      idx[d] = rem % q;
      rem /= q;
      const std::size_t k = static_cast<std::size_t>(idx[d]);
      s[static_cast<std::size_t>(d)] = mid[static_cast<std::size_t>(d)] + half[static_cast<std::size_t>(d)] * rule.x[k];
      wprod *= rule.wk[k];
    }
    const cplx v = f(s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::InvalidArgument, "integrand is not finite at a quadrature node");
    K += wprod * v;
    for (int d = 0; d < dim; ++d) {
      const std::size_t k = static_cast<std::size_t>(idx[d]);
      Rd[static_cast<std::size_t>(d)] += (wprod / rule.wk[k] * rule.wg[k]) * v;
    }
  }
  c.value = jac * K;
  c.err = 0.0;
  double worst = -1.0;
  for (int d = 0; d < dim; ++d) {
    const double e = std::abs(jac * (K - Rd[static_cast<std::size_t>(d)]));
    c.err += e;
    if (e > worst) {
      worst = e;
      c.split_dim = d;
    }
  }
}

bool touches(const RVec& lo, const RVec& hi, const RefineTarget& t, int dim, const RVec& span) {
  for (int d = 0; d < dim; ++d) {
    if (!(t.mask & (1u << d))) continue;
    const std::size_t s = static_cast<std::size_t>(d);
    const double tol = 1e-12 * span[s];
    if (t.value[s] < lo[s] - tol || t.value[s] > hi[s] + tol) return false;
  }
  return true;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol >= 1e-13)) throw Error(ErrorCode::InvalidArgument, "rel_tol must be >= 1e-13");
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "abs_tol must be positive");
  if (max_subdivisions < 1 || max_subdivisions > 1000000)
    throw Error(ErrorCode::InvalidArgument, "max_subdivisions must be in [1, 1e6]");
  if (corner_refine_depth < 0 || corner_refine_depth > 60)
    throw Error(ErrorCode::InvalidArgument, "corner_refine_depth must be in [0, 60]");
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& o) {
  value += o.value;
  err_est += o.err_est;
  cells_used += o.cells_used;
  converged = converged && o.converged;
  return *this;
}

IntegralResult integrate_box(int dim, const RVec& lo, const RVec& hi, const BoxIntegrand& f,
                             const QuadratureSpec& spec, const std::vector<RefineTarget>& targets,
                             std::vector<CellRecord>* history) {
  if (dim < 1 || dim > 4) throw Error(ErrorCode::InvalidArgument, "integration dimension must be 1..4");
  RVec span{};
  for (int d = 0; d < dim; ++d) {
    const std::size_t s = static_cast<std::size_t>(d);
    span[s] = hi[s] - lo[s];
    if (!(span[s] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "empty integration box");
  }
  IntegralResult out;
  for (int d = 0; d < dim; ++d)
    if (span[static_cast<std::size_t>(d)] == 0.0) return out;

  // Initial grid.
  static const int kInitial[5][4] = {{0}, {8}, {4, 4}, {2, 2, 2}, {2, 2, 2, 2}};
  std::vector<std::pair<RVec, RVec>> boxes;
  {
    int total = 1;
    for (int d = 0; d < dim; ++d) total *= kInitial[dim][d];
    for (int n = 0; n < total; ++n) {
      RVec a{}, b{};
      int rem = n;
      for (int d = 0; d < dim; ++d) {
        const int k = kInitial[dim][d];
        const int i = rem % k;
        rem /= k;
        const std::size_t s = static_cast<std::size_t>(d);
        a[s] = lo[s] + span[s] * i / k;
        b[s] = i + 1 == k ? hi[s] : lo[s] + span[s] * (i + 1) / k;
      }
      boxes.emplace_back(a, b);
    }
  }
  // Pre-split around targets.
  for (const RefineTarget& t : targets) {
    if (t.mask == 0) continue;
    for (int level = 0; level < t.depth; ++level) {
      std::vector<std::pair<RVec, RVec>> next;
      next.reserve(boxes.size() + 8);
      for (const auto& [a, b] : boxes) {
        if (!touches(a, b, t, dim, span)) {
          next.emplace_back(a, b);
          continue;
        }
        std::vector<std::pair<RVec, RVec>> parts{{a, b}};
        for (int d = 0; d < dim; ++d) {
          if (!(t.mask & (1u << d))) continue;
          std::vector<std::pair<RVec, RVec>> split;
          for (const auto& [pa, pb] : parts) {
            const std::size_t s = static_cast<std::size_t>(d);
            const double m = 0.5 * (pa[s] + pb[s]);
            RVec b1 = pb, a2 = pa;
            b1[s] = m;
            a2[s] = m;
            split.emplace_back(pa, b1);
            split.emplace_back(a2, pb);
          }
          parts = std::move(split);
        }
        next.insert(next.end(), parts.begin(), parts.end());
      }
      boxes = std::move(next);
      if (static_cast<long>(boxes.size()) > spec.max_subdivisions) break;
    }
  }

  std::vector<Cell> cells;
  cells.reserve(boxes.size() * 2);
  using Key = std::pair<double, long>;  // (err, -index): max err first, then lowest index
  std::priority_queue<Key> heap;
  cplx total = 0.0;
  double total_err = 0.0;
  auto add_cell = [&](const RVec& a, const RVec& b, int generation) {
    Cell c;
    c.lo = a;
    c.hi = b;
    c.generation = generation;
    evaluate(dim, c, f);
    // Cells too thin to split any further stay but are never refined.
    const std::size_t s = static_cast<std::size_t>(c.split_dim);
    const double w = c.hi[s] - c.lo[s];
    c.frozen = w <= 1e-13 * span[s];
    total += c.value;
    total_err += c.err;
    if (history) history->push_back({c.lo, c.hi, c.err, c.generation});
    cells.push_back(c);
    const long index = static_cast<long>(cells.size()) - 1;
    if (!c.frozen) heap.push({c.err, -index});
  };
  for (const auto& [a, b] : boxes) add_cell(a, b, 0);

  bool budget = static_cast<long>(cells.size()) > spec.max_subdivisions;
  while (!budget) {
    if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;
    if (heap.empty()) break;
    const long index = -heap.top().second;
    heap.pop();
    Cell parent = cells[static_cast<std::size_t>(index)];
    cells[static_cast<std::size_t>(index)].alive = false;
    total -= parent.value;
    total_err -= parent.err;
    const std::size_t s = static_cast<std::size_t>(parent.split_dim);
    const double m = 0.5 * (parent.lo[s] + parent.hi[s]);
    RVec b1 = parent.hi, a2 = parent.lo;
    b1[s] = m;
    a2[s] = m;
    add_cell(parent.lo, b1, parent.generation + 1);
    add_cell(a2, parent.hi, parent.generation + 1);
    if (static_cast<long>(cells.size()) >= spec.max_subdivisions) budget = true;
  }

  // Fixed summation order.
  for (const Cell& c : cells) {
    if (!c.alive) continue;
    out.value += c.value;
    out.err_est += c.err;
  }
  out.cells_used = static_cast<long>(cells.size());
  out.converged = out.err_est <= std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  return out;
}

IntegralResult integrate_face(const FacePatch& patch, const FaceIntegrand& integrand, const QuadratureSpec& spec,
                              std::vector<RefineTarget> extra_targets, const RVec* lo, const RVec* hi,
                              std::vector<CellRecord>* history) {
  std::vector<RefineTarget> targets;
  for (const Hotspot& h : patch.corner_hotspots) targets.push_back({h.value, h.mask, spec.corner_refine_depth});
  targets.insert(targets.end(), extra_targets.begin(), extra_targets.end());
  const RVec& a = lo ? *lo : patch.lo;
  const RVec& b = hi ? *hi : patch.hi;
  auto f = [&](const RVec& s) -> cplx {
    std::array<RVec, 3> frame;
    const CPoint z = patch.frame(s, frame);
    if (!patch.active(z)) return 0.0;
    return integrand(z, frame, s);
  };
  IntegralResult r = integrate_box(patch.param_dim, a, b, f, spec, targets, history);
  r.value *= static_cast<double>(patch.orientation_sign);
  return r;
}

IntegralResult integrate_boundary(const PiecewiseDomain& domain, const FaceIntegrand& integrand,
                                  const QuadratureSpec& spec) {
  IntegralResult total;
  for (const auto& patch : domain.face_patches()) total += integrate_face(patch, integrand, spec);
  return total;
}

IntegralResult integrate_volume(const PiecewiseDomain& domain, const std::function<cplx(const CPoint&)>& density,
                                const QuadratureSpec& spec, std::vector<RefineTarget> extra_targets) {
  IntegralResult total;
  for (const auto& patch : domain.solid_patches()) {
    std::vector<RefineTarget> targets;
    for (const Hotspot& h : patch.corner_hotspots) targets.push_back({h.value, h.mask, spec.corner_refine_depth});
    targets.insert(targets.end(), extra_targets.begin(), extra_targets.end());
    auto f = [&](const RVec& s) -> cplx {
      const CPoint z = patch.point(s);
      if (!patch.active(z)) return 0.0;
      const double j = patch.jacobian(s);
      if (j == 0.0) return 0.0;
      return density(z) * j;
    };
    total += integrate_box(patch.param_dim, patch.lo, patch.hi, f, spec, targets);
  }
  return total;
}

cplx form_on_frame(int dim, const std::array<cplx, 2>& g, const std::array<RVec, 3>& t) {
  auto dz = [](const RVec& x, int j) { return cplx(x[static_cast<std::size_t>(2 * j)], x[static_cast<std::size_t>(2 * j + 1)]); };
  auto dzb = [](const RVec& x, int j) { return cplx(x[static_cast<std::size_t>(2 * j)], -x[static_cast<std::size_t>(2 * j + 1)]); };
  if (dim == 1) return g[0] * dz(t[0], 0);
  cplx out = 0.0;
  for (int k = 0; k < 2; ++k) {
    if (g[static_cast<std::size_t>(k)] == cplx(0.0)) continue;
    cplx m[3][3];
    for (int c = 0; c < 3; ++c) {
      m[0][c] = dz(t[static_cast<std::size_t>(c)], 0);
      m[1][c] = dz(t[static_cast<std::size_t>(c)], 1);
      m[2][c] = dzb(t[static_cast<std::size_t>(c)], k);
    }
    const cplx det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    out += g[static_cast<std::size_t>(k)] * det;
  }
  return out;
}

}  // namespace bcurrent
