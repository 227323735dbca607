// SPDX-License-Identifier: Apache-2.0

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "bcurrent/asymptotics.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bcurrent;
using namespace testing_support;

namespace {

std::vector<PairingSample> synthetic(const std::function<cplx(double)>& g, int steps = 14) {
  std::vector<PairingSample> out;
  for (int k = 0; k < steps; ++k) {
    PairingSample s;
    s.epsilon = 0.1 * std::pow(0.5, k);
    s.value = g(s.epsilon);
    out.push_back(s);
  }
  return out;
}

// mpmath at 30 digits.
struct Frozen {
  double eps, I, II;
};
constexpr Frozen kFrozen[] = {
    {1e-1, 0.7479275928080033305, 0.40586999501635721191},
    {1e-2, 2.7274029449504638198, 0.5511910336110778732},
    {1e-3, 4.9943813645749280554, 0.56880032146556487525},
};

// Breakpoints at multiples of eps keep the peak resolved.
template <class G>
double piecewise_gk(G g, double e) {
  std::vector<double> cuts{0.0};
  for (double c = e; c < 1.0; c *= 4.0) cuts.push_back(c);
  cuts.push_back(1.0);
  double sum = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k)
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, cuts[k - 1], cuts[k], 8, 1e-13);
  return sum;
}

double boost_I(double e) {
  auto g = [e](double x) { return x * x * x / std::pow((x + e) * (x + e) + e * e, 2); };
  return piecewise_gk(g, e);
}

double boost_II(double e) {
  auto g = [e](double x) { return x * x / std::pow((x + e) * (x + e) + e * e, 2); };
  return 2.0 * e * piecewise_gk(g, e);
}

}  // namespace

TEST_CASE("synthetic sequences are classified") {
  const auto conv = fit_models(synthetic([](double e) { return cplx(std::numbers::pi / 2 - 2 * e, 1.0 + e * e); }));
  CHECK(conv.classification == Classification::Convergent);
  REQUIRE(conv.limit.has_value());
  CHECK(std::abs(*conv.limit - cplx(std::numbers::pi / 2, 1.0)) < 1e-8);

  const auto log = fit_models(synthetic([](double e) { return cplx(3.0 - std::log(e), 0.5); }));
  CHECK(log.classification == Classification::LogDivergent);
  CHECK(log.channels[0].classification == Classification::LogDivergent);
  CHECK(log.channels[1].classification == Classification::Convergent);
  CHECK(log.channels[0].b == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_FALSE(log.limit.has_value());

  const auto pow = fit_models(synthetic([](double e) { return cplx(1.0, 0.5 / e); }));
  CHECK(pow.classification == Classification::PowerDivergent);
  CHECK(pow.channels[1].c == doctest::Approx(0.5).epsilon(1e-6));

  const auto noise = fit_models(synthetic([](double e) { return cplx(std::sin(1.0 / e), 0.0); }));
  CHECK(noise.classification == Classification::Undetermined);
}

TEST_CASE("too few samples") {
  CHECK(code_of([] { fit_models(synthetic([](double) { return cplx(1.0); }, 3), 8); }) == ErrorCode::TooFewSamples);
}

TEST_CASE("Richardson removes the eps log eps term") {
  const auto seq = synthetic([](double e) { return cplx(1.25 + 0.3 * e * std::log(e) - e, 0.0); });
  CHECK(std::abs(richardson_limit(seq) - cplx(1.25)) < 1e-10);
}

TEST_CASE("existence verdicts") {
  AsymptoticFit c, d, u;
  c.classification = Classification::Convergent;
  d.classification = Classification::LogDivergent;
  u.classification = Classification::Undetermined;
  CHECK(classify_bc_existence({c, c}) == Existence::ExistsNumerically);
  CHECK(classify_bc_existence({c, d}) == Existence::FailsNumerically);
  CHECK(classify_bc_existence({c, u}) == Existence::Undetermined);
}

TEST_CASE("closed forms against frozen high-precision values") {
  for (const auto& f : kFrozen) {
    CHECK(closed_form_I(f.eps) == doctest::Approx(f.I).epsilon(1e-12));
    CHECK(closed_form_II(f.eps) == doctest::Approx(f.II).epsilon(1e-12));
  }
}

TEST_CASE("closed forms and library quadrature against Boost Gauss-Kronrod") {
  QuadratureSpec spec;
  for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double I = boost_I(e), II = boost_II(e);
    CHECK(closed_form_I(e) == doctest::Approx(I).epsilon(1e-9));
    CHECK(closed_form_II(e) == doctest::Approx(II).epsilon(1e-9));
    CHECK(quadrature_I(e, spec) == doctest::Approx(I).epsilon(1e-9));
    CHECK(quadrature_II(e, spec) == doctest::Approx(II).epsilon(1e-9));
  }
}

TEST_CASE("segment decomposition") {
  for (double e : {1e-1, 1e-2, 1e-3}) {
    CHECK(std::abs(closed_form_segment(e).real() - (closed_form_I(e) + closed_form_II(e))) < 1e-10);
    CHECK(std::abs(quadrature_segment(e) - closed_form_segment(e)) < 1e-8 * std::abs(closed_form_segment(e)));
  }
  CHECK(closed_form_I(1e-4) + std::log(1e-4) == doctest::Approx(-1.9173699170748692739).epsilon(1e-3));
  CHECK(closed_form_II(1e-6) == doctest::Approx(std::numbers::pi / 2 - 1.0).epsilon(1e-5));
}

TEST_CASE("antiderivative candidates") {
  const auto checks = verify_antiderivatives({1e-3, 1e-2, 0.1, 0.5, 1.0}, {0.1, 1e-2, 1e-3});
  REQUIRE(checks.size() == 4);
  for (const auto& c : checks) {
    if (c.name == "II.as_given")
      CHECK_FALSE(c.pass);
    else
      CHECK(c.pass);
  }
  for (const auto& c : antiderivative_candidates()) {
    if (c.name != "II.rederived") continue;
    // Exact derivative of the candidate equals x^2 / q^2.
    const long double e = 0.01L, x = 0.3L, h = 1e-6L;
    const long double d = (c.F(x + h, e) - c.F(x - h, e)) / (2 * h);
    const long double q = (x + e) * (x + e) + e * e;
    CHECK(static_cast<double>(d) == doctest::Approx(static_cast<double>(x * x / (q * q))).epsilon(1e-7));
  }
}

TEST_CASE("oracle conflicts are resolved by quadrature") {
  const auto conflicts = oracle_conflicts();
  REQUIRE(!conflicts.empty());
  for (const auto& c : conflicts) {
    CAPTURE(c.quantity);
    CHECK((c.agrees_with == "rederived" || c.agrees_with == "both"));
    CHECK(std::abs(c.quadrature - c.rederived) < 1e-6 * (1.0 + std::abs(c.rederived)));
  }
}
