// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "bcurrent/forms.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcurrent;
using namespace testing_support;

TEST_CASE("cutoff plateau and support") {
  const auto c = disc_cutoff(cplx(0.0, 0.0), 1.0, 1.5);
  CHECK(c.value({cplx(0.5, 0.5), {}}) == 1.0);
  CHECK(c.value({cplx(1.6, 0.0), {}}) == 0.0);
  const double mid = c.value({cplx(1.25, 0.0), {}});
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(c.in_support({cplx(1.4, 0.0), {}}));
  CHECK_FALSE(c.in_support({cplx(1.6, 0.0), {}}));
  Cutoff bad = c;
  bad.factors[0].outer = 0.5;
  CHECK(code_of([&] { bad.validate(1); }).has_value());
}

TEST_CASE("cutoff dbar against central differences") {
  const auto c = disc_cutoff(cplx(0.2, -0.1), 1.0, 1.5);
  const double h = 1e-6;
  for (cplx w : {cplx(1.1, 0.3), cplx(-0.5, 1.0), cplx(0.9, -0.9)}) {
    const double dx = (c.value({w + h, {}}) - c.value({w - h, {}})) / (2 * h);
    const double dy = (c.value({w + cplx(0, h), {}}) - c.value({w - cplx(0, h), {}})) / (2 * h);
    const cplx expected = 0.5 * cplx(dx, dy);
    CHECK(std::abs(c.dbar({w, {}}, 0) - expected) < 1e-6);
  }
}

TEST_CASE("polynomial forms: analytic dbar matches finite differences") {
  const auto sq = unit_square2();
  const auto psi = make_polynomial_form(1, {"x*zb + z^2"}, disc_cutoff(cplx(1.0, 1.0), 1.0, 2.0), "test");
  CHECK(dbar_consistency(psi, sq) < 1e-6);
  CHECK(support_violation(psi, sq) == 0.0);
  // Inside the plateau dbar(x zb + z^2) = x + zb / 2.
  const CPoint z{cplx(1.2, 0.8), {}};
  const cplx g = z[0].real() + 0.5 * std::conj(z[0]);
  CHECK(std::abs(psi.dbar(z, 0, 0) - g) < 1e-12);

  const auto d2 = builtin_scenario("bidisc").domain();
  for (const auto& form : builtin_scenario("bidisc").test_forms()) CHECK(dbar_consistency(form, d2) < 1e-6);
}

TEST_CASE("dbar density of x dz is one half times dz-bar wedge dz") {
  const auto psi = make_polynomial_form(1, {"x"}, disc_cutoff(cplx(1.0, 1.0), 2.0, 3.0));
  // dbar(x dz) = (1/2) dzb^dz = i dx^dy.
  CHECK(std::abs(psi.dbar_density({cplx(0.4, 0.4), {}}) - cplx(0.0, 1.0)) < 1e-14);
}

TEST_CASE("basis factors") {
  // dzb^dz = 2i dx^dy.
  CHECK(std::abs(dbar_basis_factor(1, 0, 0) - cplx(0.0, 2.0)) < 1e-14);
  // dzb2^dz1^dz2^dzb1 = dz1^dzb1^dz2^dzb2 = (-2i)^2 = -4.
  CHECK(std::abs(dbar_basis_factor(2, 0, 1) - cplx(-4.0, 0.0)) < 1e-14);
  // dzb1^dz1^dz2^dzb1 vanishes.
  CHECK(std::abs(dbar_basis_factor(2, 0, 0)) < 1e-14);
}

TEST_CASE("plug-in forms fall back to finite differences") {
  const auto psi = make_plugin_form(1, [](const CPoint& z, int) { return std::conj(z[0]) * std::conj(z[0]); });
  const CPoint z{cplx(0.3, 0.4), {}};
  CHECK(std::abs(psi.dbar(z, 0, 0) - 2.0 * std::conj(z[0])) < 1e-8);
  CHECK(std::abs(finite_difference_dbar(psi.coefficient, z, 0, 0) - 2.0 * std::conj(z[0])) < 1e-8);
}
