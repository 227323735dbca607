// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/strata.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace bcurrent {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Generic: return "GENERIC";
    case Verdict::NonGenericComplexRank: return "NON_GENERIC_COMPLEX_RANK";
    case Verdict::NonGenericCardinality: return "NON_GENERIC_CARDINALITY";
    case Verdict::NotTransversal: return "NOT_TRANSVERSAL";
    case Verdict::Empty: return "EMPTY";
  }
  return "?";
}

namespace {

double residual_norm(const PiecewiseDomain& d, const std::vector<int>& s, const RVec& p) {
  double r = 0.0;
  const CPoint z = to_complex(p);
  for (int j : s) {
    const auto& piece = d.pieces()[static_cast<std::size_t>(j)];
    const double v = piece.rho(z) / std::max(1e-300, norm(piece.grad_rho(z)));
    r += v * v;
  }
  return std::sqrt(r);
}

bool newton(const PiecewiseDomain& d, const std::vector<int>& s, RVec& p, int max_iter) {
  const int m = static_cast<int>(s.size());
  const int nreal = 2 * d.dim();
  const double tol = 1e-13 * std::max(1.0, d.diameter());
  double res = residual_norm(d, s, p);
  for (int it = 0; it < max_iter; ++it) {
    if (res < tol) return true;
    const CPoint z = to_complex(p);
    Eigen::MatrixXd J(m, nreal);
    Eigen::VectorXd F(m);
    for (int r = 0; r < m; ++r) {
      const auto& piece = d.pieces()[static_cast<std::size_t>(s[static_cast<std::size_t>(r)])];
      const RVec g = piece.grad_rho(z);
      const double gn = std::max(1e-300, norm(g));
      F(r) = piece.rho(z) / gn;
      for (int c = 0; c < nreal; ++c) J(r, c) = g[static_cast<std::size_t>(c)] / gn;
    }
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(F);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 30; ++h) {
      RVec q = p;
      for (int c = 0; c < nreal; ++c) q[static_cast<std::size_t>(c)] -= lambda * step(c);
      const double rq = residual_norm(d, s, q);
      if (rq < res) {
        p = q;
        res = rq;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) return res < tol;
  }
  return res < tol;
}

}  // namespace

std::vector<CornerStratum> locate_strata(const PiecewiseDomain& domain, const StrataOptions& options,
                                         std::vector<std::string>* log) {
  if (options.grid_resolution < 8) throw Error(ErrorCode::InvalidArgument, "grid_resolution must be >= 8");
  const int N = static_cast<int>(domain.pieces().size());
  if (N > 16) throw Error(ErrorCode::InvalidArgument, "too many pieces for subset enumeration");
  const int nreal = 2 * domain.dim();
  const int res = options.grid_resolution;
  const Box& box = domain.bounding_box();

  // rho values at grid nodes, one array per piece.
  int nodes = 1;
  for (int a = 0; a < nreal; ++a) nodes *= res + 1;
  auto node_point = [&](int idx) {
    RVec p{};
    for (int a = 0; a < nreal; ++a) {
      const int i = idx % (res + 1);
      idx /= res + 1;
      const std::size_t s = static_cast<std::size_t>(a);
      p[s] = box.lo[s] + (box.hi[s] - box.lo[s]) * i / res;
    }
    return p;
  };
  std::vector<std::vector<double>> rho(static_cast<std::size_t>(N), std::vector<double>(static_cast<std::size_t>(nodes)));
  for (int idx = 0; idx < nodes; ++idx) {
    const CPoint z = to_complex(node_point(idx));
    for (int j = 0; j < N; ++j) rho[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)] = domain.pieces()[static_cast<std::size_t>(j)].rho(z);
  }
  int cells = 1;
  for (int a = 0; a < nreal; ++a) cells *= res;
  const int corners = 1 << nreal;

  std::vector<CornerStratum> out;
  for (unsigned mask = 1; mask < (1u << N); ++mask) {
    std::vector<int> subset;
    for (int j = 0; j < N; ++j)
      if (mask & (1u << j)) subset.push_back(j);
    if (subset.size() < 2) continue;
    CornerStratum st;
    st.subset = subset;
    const double dedup = 1e-7 * std::max(1.0, domain.diameter());
    for (int cell = 0; cell < cells && static_cast<int>(st.samples.size()) < options.max_samples; ++cell) {
      int base[4] = {0, 0, 0, 0};
      int rem = cell;
      for (int a = 0; a < nreal; ++a) {
        base[a] = rem % res;
        rem /= res;
      }
      bool seed = true;
      for (int j : subset) {
        double lo = INFINITY, hi = -INFINITY;
        for (int c = 0; c < corners; ++c) {
          int idx = 0, stride = 1;
          for (int a = 0; a < nreal; ++a) {
            idx += (base[a] + ((c >> a) & 1)) * stride;
            stride *= res + 1;
          }
          const double v = rho[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx)];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        if (!(lo <= 0.0 && hi >= 0.0)) {
          seed = false;
          break;
        }
      }
      if (!seed) continue;
      RVec p{};
      for (int a = 0; a < nreal; ++a) {
        const std::size_t s = static_cast<std::size_t>(a);
        p[s] = box.lo[s] + (box.hi[s] - box.lo[s]) * (base[a] + 0.5) / res;
      }
      if (!newton(domain, subset, p, options.newton_iterations)) {
        if (log) {
          std::string msg = "NO_CONVERGENCE: Newton failed for S = {";
          for (std::size_t i = 0; i < subset.size(); ++i) msg += (i ? "," : "") + std::to_string(subset[i]);
          msg += "} seeded at cell " + std::to_string(cell);
          log->push_back(msg);
        }
        continue;
      }
      const CPoint z = to_complex(p);
      if (!domain.in_closure(z, 1e-9)) continue;
      if (std::any_of(st.samples.begin(), st.samples.end(), [&](const CPoint& q) { return distance(q, z) < dedup; }))
        continue;
      st.samples.push_back(z);
    }
    out.push_back(std::move(st));
  }
  return out;
}

CornerStratum classify_stratum(const PiecewiseDomain& domain, CornerStratum st) {
  st.rank_data.clear();
  if (st.samples.empty()) {
    st.verdict = Verdict::Empty;
    return st;
  }
  const int m = static_cast<int>(st.subset.size());
  const int n = domain.dim();
  auto rank_of = [](const Eigen::VectorXd& sv) {
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sv(0)) ++r;
    return r;
  };
  bool transversal = true, complex_full = true;
  for (const CPoint& z : st.samples) {
    Eigen::MatrixXd R(m, 2 * n);
    Eigen::MatrixXcd C(m, n);
    for (int r = 0; r < m; ++r) {
      const auto& piece = domain.pieces()[static_cast<std::size_t>(st.subset[static_cast<std::size_t>(r)])];
      const RVec g = piece.grad_rho(z);
      const CPoint d = piece.del_rho(z);
      for (int c = 0; c < 2 * n; ++c) R(r, c) = g[static_cast<std::size_t>(c)];
      for (int c = 0; c < n; ++c) C(r, c) = d[static_cast<std::size_t>(c)];
    }
    RankData rd;
    rd.real_rank = rank_of(Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues());
    rd.complex_rank = rank_of(Eigen::JacobiSVD<Eigen::MatrixXcd>(C).singularValues());
    transversal = transversal && rd.real_rank == m;
    complex_full = complex_full && rd.complex_rank == m;
    st.rank_data.push_back(rd);
  }
  if (m > n)
    st.verdict = Verdict::NonGenericCardinality;
  else if (!transversal)
    st.verdict = Verdict::NotTransversal;
  else if (!complex_full)
    st.verdict = Verdict::NonGenericComplexRank;
  else
    st.verdict = Verdict::Generic;
  return st;
}

std::vector<CornerStratum> classify_domain(const PiecewiseDomain& domain, const StrataOptions& options,
                                           std::vector<std::string>* log) {
  auto strata = locate_strata(domain, options, log);
  for (auto& s : strata) s = classify_stratum(domain, std::move(s));
  return strata;
}

bool has_generic_corners(const std::vector<CornerStratum>& strata) {
  return std::all_of(strata.begin(), strata.end(), [](const CornerStratum& s) {
    return s.verdict == Verdict::Empty || s.verdict == Verdict::Generic;
  });
}

}  // namespace bcurrent
