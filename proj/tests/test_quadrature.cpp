// SPDX-License-Identifier: Apache-2.0

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "bcurrent/quadrature.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcurrent;
using namespace testing_support;

TEST_CASE("one-dimensional peak against tanh-sinh") {
  const double a = 1e-3;
  auto g = [a](double x) { return 1.0 / (x * x + a * a); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = ts.integrate(g, -1.0, 2.0);
  QuadratureSpec spec;
  const auto r = integrate_box(1, {-1.0}, {2.0}, [&](const RVec& p) { return cplx(g(p[0])); }, spec);
  CHECK(r.converged);
  CHECK(r.value.real() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(r.err_est <= 1e-8 * oracle);
}

TEST_CASE("refine targets help a boundary peak") {
  const double eps = 1e-4;
  auto g = [eps](double x) { return std::pow(x, 3) / std::pow((x + eps) * (x + eps) + eps * eps, 2); };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 30, 1e-13);
  QuadratureSpec spec;
  RefineTarget t;
  t.mask = 1u;
  t.depth = 16;
  std::vector<CellRecord> history;
  const auto r = integrate_box(1, {0.0}, {1.0}, [&](const RVec& p) { return cplx(g(p[0])); }, spec, {t}, &history);
  CHECK(r.value.real() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(!history.empty());
  CHECK(history.front().lo[0] == 0.0);
}

TEST_CASE("separable 2D and 3D integrals") {
  QuadratureSpec spec;
  const auto r2 = integrate_box(2, {0.0, 0.0}, {1.0, 2.0},
                                [](const RVec& p) { return cplx(std::exp(p[0]) * std::cos(p[1]), p[0] * p[1]); }, spec);
  CHECK(r2.value.real() == doctest::Approx((std::exp(1.0) - 1.0) * std::sin(2.0)).epsilon(1e-10));
  CHECK(r2.value.imag() == doctest::Approx(1.0).epsilon(1e-10));
  const auto r3 = integrate_box(3, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0},
                                [](const RVec& p) { return cplx(p[0] * p[0] + p[1] * p[2]); }, spec);
  CHECK(r3.value.real() == doctest::Approx(1.0 / 3.0 + 0.25).epsilon(1e-12));
}

TEST_CASE("four-dimensional Gaussian") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-8;
  const auto r = integrate_box(4, {-1.0, -1.0, -1.0, -1.0}, {1.0, 1.0, 1.0, 1.0}, [](const RVec& p) {
    return cplx(std::exp(-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3])));
  }, spec);
  const double one = std::sqrt(std::numbers::pi) * std::erf(1.0);
  CHECK(r.value.real() == doctest::Approx(std::pow(one, 4)).epsilon(1e-8));
}

TEST_CASE("budget exhaustion is reported") {
  QuadratureSpec spec;
  spec.max_subdivisions = 5;
  spec.rel_tol = 1e-14;
  const auto r = integrate_box(1, {0.0}, {1.0}, [](const RVec& p) { return cplx(1.0 / std::sqrt(p[0] + 1e-12)); }, spec);
  CHECK_FALSE(r.converged);
  CHECK(r.cells_used < 20);
}

TEST_CASE("invalid quadrature settings") {
  QuadratureSpec spec;
  spec.rel_tol = -1.0;
  CHECK(code_of([&] { spec.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("contour integrals over the square boundary") {
  const auto sq = unit_square2();
  QuadratureSpec spec;
  auto integral_of = [&](std::function<cplx(cplx)> g) {
    return integrate_boundary(sq, [&](const CPoint& z, const std::array<RVec, 3>& frame, const RVec&) {
      return form_on_frame(1, {g(z[0]), cplx(0.0)}, frame);
    }, spec).value;
  };
  // Green: the loop integral of g dz is 2i times the area integral of dg/dzb.
  CHECK(std::abs(integral_of([](cplx z) { return z * z; })) < 1e-12);
  const cplx zb = integral_of([](cplx z) { return std::conj(z); });
  CHECK(zb.real() == doctest::Approx(0.0));
  CHECK(zb.imag() == doctest::Approx(8.0).epsilon(1e-12));
  const cplx x = integral_of([](cplx z) { return cplx(z.real()); });
  CHECK(x.imag() == doctest::Approx(4.0).epsilon(1e-12));
  // Cauchy: 1/(z - c) around an interior point.
  const cplx res = integral_of([](cplx z) { return 1.0 / (z - cplx(0.7, 1.1)); });
  CHECK(res.imag() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("volumes of the disc, bidisc and square") {
  QuadratureSpec spec;
  spec.rel_tol = 1e-9;
  const auto one = [](const CPoint&) { return cplx(1.0); };
  CHECK(integrate_volume(unit_square2(), one, spec).value.real() == doctest::Approx(4.0).epsilon(1e-12));
  const PiecewiseDomain disc(1, {round_piece(0, cplx(0.3, 0.0), 0.8, PieceKind::Disc)});
  CHECK(integrate_volume(disc, one, spec).value.real() == doctest::Approx(std::numbers::pi * 0.64).epsilon(1e-9));
  const auto bidisc = builtin_scenario("bidisc").domain();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(integrate_volume(bidisc, one, spec).value.real() == doctest::Approx(pi2).epsilon(1e-8));
  // Mean value property: z1 z2 + 2 z1 - 1 averages to -1.
  const auto f = builtin_scenario("bidisc").holomorphic();
  const cplx v = integrate_volume(bidisc, [&](const CPoint& z) { return f(z); }, spec).value;
  CHECK(v.real() == doctest::Approx(-pi2).epsilon(1e-8));
  CHECK(std::abs(v.imag()) < 1e-8);
}

TEST_CASE("form pullback on a frame") {
  // dz on the real axis direction e_x is 1, on e_y it is i.
  CHECK(std::abs(form_on_frame(1, {cplx(1.0), cplx(0.0)}, {RVec{1.0, 0.0, 0.0, 0.0}, RVec{}, RVec{}}) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(form_on_frame(1, {cplx(1.0), cplx(0.0)}, {RVec{0.0, 1.0, 0.0, 0.0}, RVec{}, RVec{}}) - cplx(0.0, 1.0)) < 1e-15);
  // dz1^dz2^dzb1 on (e_x1, e_x2, e_y1): dz1 = 1, i, dzb1 = 1, -i.
  const auto v = form_on_frame(2, {cplx(1.0), cplx(0.0)},
                               {RVec{1.0, 0.0, 0.0, 0.0}, RVec{0.0, 0.0, 1.0, 0.0}, RVec{0.0, 1.0, 0.0, 0.0}});
  // det [[1, 0, i], [0, 1, 0], [1, 0, -i]] = -i - i = -2i.
  CHECK(std::abs(v - cplx(0.0, -2.0)) < 1e-14);
}
