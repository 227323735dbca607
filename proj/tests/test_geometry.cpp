// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "bcurrent/cover.hpp"
#include "bcurrent/strata.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcurrent;
using namespace testing_support;

TEST_CASE("square membership and boundary distance") {
  const auto sq = unit_square2();
  CHECK(sq.contains({cplx(1.0, 1.0), {}}));
  CHECK_FALSE(sq.contains({cplx(2.5, 1.0), {}}));
  CHECK(sq.in_closure({cplx(2.0, 0.0), {}}));
  CHECK(sq.boundary_distance({cplx(0.5, 1.2), {}}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sq.boundary_distance({cplx(1.0, 1.0), {}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sq.diameter() >= 2.0 * std::sqrt(2.0));
  CHECK(sq.active_pieces({cplx(0.0, 0.0), {}}).size() == 2);
}

TEST_CASE("boundary samples lie on the boundary") {
  const auto sq = unit_square2();
  const auto samples = sq.sample_boundary(16);
  REQUIRE(samples.size() >= 4 * 16);
  for (const auto& s : samples) {
    CHECK(sq.in_closure(s.z, 1e-12));
    CHECK_FALSE(sq.active_pieces(s.z, 1e-9).empty());
  }
}

TEST_CASE("disc in C") {
  const PiecewiseDomain disc(1, {round_piece(0, cplx(0.5, 0.0), 1.0, PieceKind::Disc)});
  CHECK(disc.contains({cplx(1.2, 0.0), {}}));
  CHECK_FALSE(disc.contains({cplx(-0.6, 0.0), {}}));
  CHECK(disc.boundary_distance({cplx(0.5, 0.25), {}}) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("invalid domains are rejected") {
  SUBCASE("empty intersection") {
    auto check = [] { PiecewiseDomain(1, {side(0, true, 0.0), side(0, false, 1.0), side(1, false, 0.0), side(1, true, 1.0)}); };
    CHECK_THROWS_AS(check(), Error);
    try {
      check();
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GeometryInvalid);
    }
  }
  SUBCASE("non-positive radius") {
    try {
      PiecewiseDomain(1, {round_piece(0, {}, -1.0, PieceKind::Disc)});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GeometryInvalid);
    }
  }
  SUBCASE("mixed half-plane in C^2") {
    PieceSpec h;
    h.kind = PieceKind::HalfPlane;
    h.normal = {1.0, 0.0, 1.0, 0.0};
    h.offset = 1.0;
    try {
      PiecewiseDomain(2, {h, round_piece(0, {}, 1.0), round_piece(1, {}, 1.0)});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Unsupported);
    }
  }
}

TEST_CASE("strata of the square") {
  const auto strata = classify_domain(unit_square2(), StrataOptions{});
  int nonempty = 0;
  for (const auto& s : strata) {
    if (s.verdict == Verdict::Empty) continue;
    ++nonempty;
    CHECK(s.subset.size() == 2);
    CHECK(s.verdict == Verdict::NonGenericCardinality);
    for (const auto& r : s.rank_data) {
      CHECK(r.real_rank == 2);
      CHECK(r.complex_rank == 1);
    }
  }
  CHECK(nonempty == 4);
  CHECK_FALSE(has_generic_corners(strata));
}

TEST_CASE("strata of the bidisc and of the square times C") {
  const auto bidisc = classify_domain(builtin_scenario("bidisc").domain(), StrataOptions{});
  int generic = 0;
  for (const auto& s : bidisc)
    if (s.verdict != Verdict::Empty) {
      CHECK(s.verdict == Verdict::Generic);
      ++generic;
    }
  CHECK(generic == 1);
  CHECK(has_generic_corners(bidisc));

  for (const auto& s : classify_domain(builtin_scenario("square-cross-plane").domain(), StrataOptions{}))
    if (s.verdict != Verdict::Empty) CHECK(s.verdict == Verdict::NonGenericComplexRank);
}

TEST_CASE("opposite sides of the square never meet") {
  const auto strata = locate_strata(unit_square2(), StrataOptions{});
  for (const auto& s : strata) {
    if (s.subset == std::vector<int>{0, 1} || s.subset == std::vector<int>{2, 3}) CHECK(s.samples.empty());
  }
}

TEST_CASE("smooth step and plateau") {
  CHECK(smooth_step(-0.1) == 0.0);
  CHECK(smooth_step(1.2) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(plateau(0.4) == 1.0);
  CHECK(plateau(1.0) == 0.0);
  const double h = 1e-6;
  for (double t : {0.2, 0.5, 0.7})
    CHECK(smooth_step_derivative(t) == doctest::Approx((smooth_step(t + h) - smooth_step(t - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("chart cover of the square") {
  const auto sq = unit_square2();
  const auto cover = build_chart_cover(sq);
  CHECK(cover.partition_defect() < 1e-12);
  CHECK(cover.partition_samples() >= 200);
  int corners = 0;
  for (const auto& chart : cover.charts()) {
    if (chart.corner) ++corners;
    CHECK(chart.margin > 0.0);
    CHECK(validate_outward(chart, sq, 200) > 0.0);
  }
  CHECK(corners == 4);
  for (const auto& s : sq.sample_boundary(9)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cover.charts().size(); ++i) sum += cover.weight(i, s.z);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("an inward corner vector is refused") {
  CoverOptions o;
  o.corner_vectors.push_back({0, cplx(0.0, 0.0), cplx(1.0, 1.0)});
  try {
    build_chart_cover(unit_square2(), o);
    FAIL("expected NoOutwardVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoOutwardVector);
  }
}

TEST_CASE("cover of the bidisc is a product") {
  const auto d = builtin_scenario("bidisc").domain();
  const auto cover = build_chart_cover(d);
  CHECK(cover.partition_defect() < 1e-10);
  const CPoint z{cplx(0.6, 0.8), cplx(0.3, 0.1)};
  for (std::size_t i = 0; i < cover.charts().size(); ++i) {
    const auto& c = cover.charts()[i];
    double w = 1.0;
    for (int f = 0; f < 2; ++f) w *= cover.factor_weight(f, c.part_index[f], z[f]);
    CHECK(cover.weight(i, z) == doctest::Approx(w).epsilon(1e-14));
  }
}
