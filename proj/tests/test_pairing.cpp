// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "bcurrent/asymptotics.hpp"
#include "bcurrent/pairing.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcurrent;
using namespace testing_support;

namespace {

TestForm x_dz_whole() { return make_polynomial_form(1, {"x"}, disc_cutoff(cplx(1.0, 1.0), 2.0, 3.0), "x dz"); }
TestForm x_dz_corner() { return make_polynomial_form(1, {"x"}, disc_cutoff(cplx(0.0, 0.0), 1.0, 1.5), "x dz"); }

}  // namespace

TEST_CASE("schedule validation") {
  CHECK(Schedule{0.1, 0.5, 3}.epsilon(2) == doctest::Approx(0.025));
  CHECK(code_of([] { Schedule{0.1, 1.5, 3}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Schedule{-0.1, 0.5, 3}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Schedule{0.1, 0.5, 0}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("f = 1 against x dz gives 4i at every epsilon") {
  const auto sq = unit_square2();
  const auto cover = build_chart_cover(sq);
  const auto f = make_function("1", 1);
  QuadratureSpec spec;
  for (double e : {0.1, 0.01, 0.001}) {
    const auto s = pairing_at_epsilon(sq, f, x_dz_whole(), cover, e, spec);
    CHECK(std::abs(s.value - cplx(0.0, 4.0)) < 1e-8);
    CHECK(s.per_chart.size() == cover.charts().size());
    cplx sum{};
    for (cplx c : s.per_chart) sum += c;
    CHECK(std::abs(sum - s.value) < 1e-13);
  }
}

TEST_CASE("Stokes sign calibrates to +1") {
  const auto sq = unit_square2();
  CHECK(calibrate_stokes_sign(sq, x_dz_corner(), QuadratureSpec{}) == kStokesSign);
}

TEST_CASE("stokes oracle agrees with Green's theorem") {
  const auto sq = unit_square2();
  QuadratureSpec spec;
  const auto r = stokes_oracle(sq, make_function("z", 1), x_dz_whole(), spec);
  // int_square z * i dA = i * 4 * (1 + i).
  CHECK(std::abs(r.value - cplx(0.0, 4.0) * cplx(1.0, 1.0)) < 1e-9);
}

TEST_CASE("1/z^2 is not integrable near the corner") {
  QuadratureSpec spec;
  CHECK(code_of([&] { stokes_oracle(unit_square2(), make_function("1/z^2", 1), x_dz_corner(), spec); }) ==
        ErrorCode::NotL1);
}

TEST_CASE("a pole on the translated boundary is reported") {
  const auto sq = unit_square2();
  const auto cover = build_chart_cover(sq);
  // Pole at 1 + 0.1i lands on the bottom side once shifted by eps * (-i).
  const auto f = make_function("1/(z-1-0.1i)", 1);
  CHECK(code_of([&] { pairing_at_epsilon(sq, f, x_dz_whole(), cover, 0.1, QuadratureSpec{}); }) ==
        ErrorCode::PoleOnBoundary);
}

TEST_CASE("pairing with a pole on the corner converges to the Stokes value for 1/z") {
  const auto sq = unit_square2();
  const auto cover = build_chart_cover(sq);
  const auto f = make_function("1/z", 1);
  const auto psi = x_dz_corner();
  QuadratureSpec spec;
  const auto seq = pairing_sequence(sq, f, psi, cover, Schedule{0.1, 0.5, 10}, spec);
  const auto fit = fit_models(seq, 8);
  CHECK(fit.classification == Classification::Convergent);
  REQUIRE(fit.limit.has_value());
  const auto st = stokes_oracle(sq, f, psi, spec);
  CHECK(std::abs(*fit.limit - st.value) < 1e-4);
}

TEST_CASE("threads do not change the pairing") {
  const auto sq = unit_square2();
  const auto cover = build_chart_cover(sq);
  const auto f = make_function("1/z^2", 1);
  QuadratureSpec spec;
  const auto a = pairing_sequence(sq, f, x_dz_corner(), cover, Schedule{0.1, 0.5, 4}, spec, 1);
  const auto b = pairing_sequence(sq, f, x_dz_corner(), cover, Schedule{0.1, 0.5, 4}, spec, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].value == b[k].value);
    CHECK(a[k].cells_used == b[k].cells_used);
  }
}

TEST_CASE("face distributions of a continuous function") {
  const auto sq = unit_square2();
  QuadratureSpec spec;
  const auto f = make_function("z", 1);
  const auto dists = restrict_to_faces(sq, f);
  CHECK(dists.size() == 4);
  const auto v = face_distribution_pairing(sq, dists, x_dz_whole(), spec).value;
  CHECK(std::abs(v - cplx(0.0, 4.0) * cplx(1.0, 1.0)) < 1e-9);

  const auto cover = build_chart_cover(sq);
  const auto z2 = make_function("z^2", 1);
  const cplx target = face_distribution_pairing(sq, restrict_to_faces(sq, z2), x_dz_whole(), spec).value;
  const double e1 = std::abs(pairing_at_epsilon(sq, z2, x_dz_whole(), cover, 0.02, spec).value - target);
  const double e2 = std::abs(pairing_at_epsilon(sq, z2, x_dz_whole(), cover, 0.01, spec).value - target);
  CHECK(std::log2(e1 / e2) > 0.9);
}

TEST_CASE("closure defect separates closed and non-closed forms") {
  const auto bidisc = builtin_scenario("bidisc");
  const auto d = bidisc.domain();
  for (const auto& form : bidisc.weinstock_test_forms()) CHECK(closure_defect(form, d) < 1e-10);
  for (const auto& form : builtin_scenario("bidisc_control").weinstock_test_forms()) CHECK(closure_defect(form, d) > 0.1);
}

TEST_CASE("Weinstock on the bidisc") {
  const auto s = builtin_scenario("bidisc");
  const auto d = s.domain();
  const auto r = weinstock_test(d, s.holomorphic(), s.weinstock_test_forms(), nullptr, s.quadrature);
  CHECK(r.route == "face-distribution");
  CHECK(r.pass);
  for (const auto& e : r.entries) CHECK(std::abs(e.pairing) < 1e-4);

  const auto control = builtin_scenario("bidisc_control").weinstock_test_forms();
  CHECK(code_of([&] { weinstock_test(d, s.holomorphic(), control, nullptr, s.quadrature); }) == ErrorCode::FormNotClosed);
}

TEST_CASE("Weinstock for 1/z on the square") {
  const auto s = builtin_scenario("square_f=1/z");
  const auto d = s.domain();
  const auto cover = build_chart_cover(d, s.cover);
  WeinstockOptions o;
  o.schedule = Schedule{0.1, 0.5, 10};
  const auto r = weinstock_test(d, s.holomorphic(), s.weinstock_test_forms(), &cover, s.quadrature, o);
  CHECK(r.route == "pairing-limit");
  CHECK(r.pass);
  CHECK(r.entries.size() == 6);
  for (const auto& e : r.entries) CHECK(std::abs(e.pairing) < 1e-6);
}
