// SPDX-License-Identifier: Apache-2.0

#include "bcurrent/forms.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bcurrent/cover.hpp"

namespace bcurrent {

namespace {

double radial(const Cutoff::Factor& f, double r) {
  return smooth_step((f.outer - r) / (f.outer - f.inner));
}

double radial_derivative(const Cutoff::Factor& f, double r) {
  return -smooth_step_derivative((f.outer - r) / (f.outer - f.inner)) / (f.outer - f.inner);
}

cplx evaluate_basis(int j, bool conj, const RVec& x) {
  return {x[static_cast<std::size_t>(2 * j)], (conj ? -1.0 : 1.0) * x[static_cast<std::size_t>(2 * j + 1)]};
}

}  // namespace

double Cutoff::value(const CPoint& z) const {
  double v = 1.0;
  for (const auto& f : factors) v *= radial(f, std::abs(z[static_cast<std::size_t>(f.coord)] - f.center));
  return v;
}

cplx Cutoff::dbar(const CPoint& z, int k) const {
  cplx out = 0.0;
  for (std::size_t a = 0; a < factors.size(); ++a) {
    const Factor& f = factors[a];
    if (f.coord != k) continue;
    const cplx d = z[static_cast<std::size_t>(k)] - f.center;
    const double r = std::abs(d);
    const double hp = radial_derivative(f, r);
    if (hp == 0.0 || r == 0.0) continue;
    double rest = 1.0;
    for (std::size_t b = 0; b < factors.size(); ++b)
      if (b != a) rest *= radial(factors[b], std::abs(z[static_cast<std::size_t>(factors[b].coord)] - factors[b].center));
    out += rest * hp * d / (2.0 * r);
  }
  return out;
}

bool Cutoff::in_support(const CPoint& z) const {
  for (const auto& f : factors)
    if (std::abs(z[static_cast<std::size_t>(f.coord)] - f.center) >= f.outer) return false;
  return true;
}

void Cutoff::validate(int dim) const {
  for (const auto& f : factors) {
    if (f.coord < 0 || f.coord >= dim) throw Error(ErrorCode::ConfigParse, "cutoff coordinate out of range");
    if (!(f.inner > 0.0) || !(f.outer > f.inner))
      throw Error(ErrorCode::ConfigParse, "cutoff needs 0 < inner < outer");
  }
}

std::array<cplx, 2> TestForm::coefficients(const CPoint& z) const {
  std::array<cplx, 2> g{};
  for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i)] = coefficient(z, i);
  return g;
}

cplx dbar_basis_factor(int dim, int i, int k) {
  // Columns are the standard frame e_1..e_2n; rows the 1-forms dzb_k, dz_1, .., dzb_i.
  const int m = 2 * dim;
  std::vector<std::pair<int, bool>> rows;
  rows.emplace_back(k, true);
  if (dim == 1) {
    rows.emplace_back(0, false);
  } else {
    rows.emplace_back(0, false);
    rows.emplace_back(1, false);
    rows.emplace_back(i, true);
  }
  Eigen::MatrixXcd M(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      RVec e{};
      e[static_cast<std::size_t>(c)] = 1.0;
      M(r, c) = evaluate_basis(rows[static_cast<std::size_t>(r)].first, rows[static_cast<std::size_t>(r)].second, e);
    }
  return M.determinant();
}

cplx TestForm::dbar_density(const CPoint& z) const {
  static const cplx f1 = dbar_basis_factor(1, 0, 0);
  static const cplx f2[2][2] = {{dbar_basis_factor(2, 0, 0), dbar_basis_factor(2, 0, 1)},
                                {dbar_basis_factor(2, 1, 0), dbar_basis_factor(2, 1, 1)}};
  if (dim == 1) return f1 * dbar(z, 0, 0);
  cplx out = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      if (f2[i][k] != cplx(0.0)) out += f2[i][k] * dbar(z, i, k);
  return out;
}

TestForm make_polynomial_form(int dim, const std::vector<std::string>& coefficients, const Cutoff& cutoff,
                              const std::string& label) {
  if (dim < 1 || dim > 2) throw Error(ErrorCode::InvalidArgument, "form dimension must be 1 or 2");
  if (coefficients.empty() || static_cast<int>(coefficients.size()) > dim)
    throw Error(ErrorCode::ConfigParse, "a test form needs 1.." + std::to_string(dim) + " coefficients");
  cutoff.validate(dim);
  std::vector<Polynomial> p(2), dp(4);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const Expression e = Expression::parse(coefficients[i], Expression::Domain::Smooth);
    if (e.dimension() > dim) throw Error(ErrorCode::ConfigParse, "form coefficient uses a coordinate beyond C^" + std::to_string(dim));
    try {
      p[i] = e.to_polynomial();
    } catch (const Error&) {
      throw Error(ErrorCode::ConfigParse, "form coefficient '" + coefficients[i] + "' is not a polynomial");
    }
  }
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      dp[static_cast<std::size_t>(2 * i + k)] = p[static_cast<std::size_t>(i)].derivative(2 * k + 1);

  TestForm f;
  f.dim = dim;
  f.label = label;
  f.coefficient_text = coefficients;
  f.cutoff = cutoff;
  f.coefficient = [p, cutoff](const CPoint& z, int i) {
    const double c = cutoff.value(z);
    if (c == 0.0) return cplx(0.0);
    return p[static_cast<std::size_t>(i)](z) * c;
  };
  f.dbar = [p, dp, cutoff](const CPoint& z, int i, int k) {
    const double c = cutoff.value(z);
    const cplx dc = cutoff.dbar(z, k);
    if (c == 0.0 && dc == cplx(0.0)) return cplx(0.0);
    return dp[static_cast<std::size_t>(2 * i + k)](z) * c + p[static_cast<std::size_t>(i)](z) * dc;
  };
  if (!cutoff.factors.empty()) f.support = [cutoff](const CPoint& z) { return cutoff.in_support(z); };
  return f;
}

cplx finite_difference_dbar(const CoefficientFn& g, const CPoint& z, int i, int k, double h) {
  CPoint a = z, b = z, c = z, d = z;
  a[static_cast<std::size_t>(k)] += h;
  b[static_cast<std::size_t>(k)] -= h;
  c[static_cast<std::size_t>(k)] += cplx(0.0, h);
  d[static_cast<std::size_t>(k)] -= cplx(0.0, h);
  const cplx dx = (g(a, i) - g(b, i)) / (2.0 * h);
  const cplx dy = (g(c, i) - g(d, i)) / (2.0 * h);
  return 0.5 * (dx + cplx(0.0, 1.0) * dy);
}

TestForm make_plugin_form(int dim, CoefficientFn coefficient, DbarFn dbar, const std::string& label) {
  if (dim < 1 || dim > 2) throw Error(ErrorCode::InvalidArgument, "form dimension must be 1 or 2");
  if (!coefficient) throw Error(ErrorCode::InvalidArgument, "plug-in form needs a coefficient evaluator");
  TestForm f;
  f.dim = dim;
  f.label = label;
  f.coefficient = coefficient;
  if (dbar)
    f.dbar = std::move(dbar);
  else
    f.dbar = [coefficient](const CPoint& z, int i, int k) { return finite_difference_dbar(coefficient, z, i, k); };
  return f;
}

double dbar_consistency(const TestForm& form, const PiecewiseDomain& domain, int points) {
  std::mt19937 rng(97u);
  const Box& box = domain.bounding_box();
  double worst = 0.0;
  for (int n = 0; n < points; ++n) {
    RVec p{};
    for (int a = 0; a < 2 * form.dim; ++a) {
      std::uniform_real_distribution<double> u(box.lo[static_cast<std::size_t>(a)], box.hi[static_cast<std::size_t>(a)]);
      p[static_cast<std::size_t>(a)] = u(rng);
    }
    const CPoint z = to_complex(p);
    for (int i = 0; i < form.dim; ++i)
      for (int k = 0; k < form.dim; ++k) {
        const cplx exact = form.dbar(z, i, k);
        const cplx fd = finite_difference_dbar(form.coefficient, z, i, k);
        worst = std::max(worst, std::abs(exact - fd) / (1.0 + std::abs(exact)));
      }
  }
  return worst;
}

double support_violation(const TestForm& form, const PiecewiseDomain& domain, int points) {
  if (!form.support) return 0.0;
  std::mt19937 rng(131u);
  const Box& box = domain.bounding_box();
  double worst = 0.0;
  for (int n = 0; n < points; ++n) {
    RVec p{};
    for (int a = 0; a < 2 * form.dim; ++a) {
      const std::size_t s = static_cast<std::size_t>(a);
      const double pad = 0.5 * (box.hi[s] - box.lo[s]);
      std::uniform_real_distribution<double> u(box.lo[s] - pad, box.hi[s] + pad);
      p[s] = u(rng);
    }
    const CPoint z = to_complex(p);
    if (form.support(z)) continue;
    for (int i = 0; i < form.dim; ++i) worst = std::max(worst, std::abs(form.coefficient(z, i)));
  }
  return worst;
}

}  // namespace bcurrent
