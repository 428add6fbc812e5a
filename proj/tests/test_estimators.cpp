#include <catch2/catch_amalgamated.hpp>

#include "rpr/error.hpp"
#include "rpr/estimators.hpp"
#include "rpr/theory.hpp"

#include <cmath>
#include <random>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;
using namespace rpr;

namespace {

const SampleSummary kGroundwater{0.58, 0.60, 0.6277};

// Literal textbook forms, used as references for the rearranged evaluators.
double rpr_literal(double a, double b, const SampleSummary& s) {
  const double R = ((1 - b) * s.xbar + b * s.Xbar) / (b * s.xbar + (1 - b) * s.Xbar);
  return a * R * s.ybar + (1 - a) * s.ybar / R;
}

double aoe_literal(double c, const SampleSummary& s) {
  const double X = s.Xbar, x = s.xbar, K = 2 * c * c - c - 1;
  return (2 * (c + 1) * X * X - 2 * (c - 1) * x * x + K * (X - x) * (X - x)) /
         (4 * X * x - K * (X - x) * (X - x)) * s.ybar;
}

SampleSummary random_summary(std::mt19937_64& gen, double spread) {
  std::uniform_real_distribution<double> mean(0.2, 5.0);
  std::uniform_real_distribution<double> rel(-spread, spread);
  const double X = mean(gen);
  return {mean(gen), X * (1.0 + rel(gen)), X};
}

} // namespace

TEST_CASE("beta = 1/2 reduces to the sample mean exactly") {
  std::mt19937_64 gen(1);
  for (double a : {-3.0, 0.0, 0.3, 1.0, 7.5}) {
    for (int i = 0; i < 100; ++i) {
      const auto s = random_summary(gen, 0.5);
      CHECK(estimate(RatioProductRatio{a, 0.5}, s) == s.ybar);
    }
  }
}

TEST_CASE("corner parameters give the ratio and product estimators") {
  const SampleSummary s{2, 4, 8};
  CHECK(estimate(RatioProductRatio{0, 0}, s) == 4.0);
  CHECK(estimate(RatioProductRatio{1, 1}, s) == 4.0);
  CHECK(estimate(RatioProductRatio{1, 0}, s) == 1.0);
  CHECK(estimate(RatioProductRatio{0, 1}, s) == 1.0);
  CHECK(estimate(Ratio{}, s) == 4.0);
  CHECK(estimate(Product{}, s) == 1.0);
  CHECK(estimate(SampleMean{}, s) == 2.0);
}

TEST_CASE("groundwater sample: independently computed values") {
  // mpmath at 50 digits.
  CHECK_THAT(estimate(RatioProductRatio{-0.3349, 0.3176}, kGroundwater),
             WithinRel(0.59602247801338674, 1e-14));
  CHECK_THAT(estimate(UnbiasedAoe{0.6092}, kGroundwater), WithinRel(0.59602395108321979, 1e-14));
  CHECK_THAT(estimate(RatioProductRatio{0.2, 0.7}, kGroundwater),
             WithinRel(0.57381257463071116, 1e-14));
}

TEST_CASE("unrounded optimal parameters reproduce the AOE closed form") {
  std::mt19937_64 gen(2);
  for (double c : {-2.0, -0.7, 0.0, 0.6092, 0.75, 1.0, 1.8}) {
    for (auto branch : {AoeBranch::MinusMinus, AoeBranch::PlusPlus}) {
      const auto sol = aoe_parameters(c, branch);
      for (int i = 0; i < 200; ++i) {
        const auto s = random_summary(gen, 0.5);
        CHECK_THAT(estimate(RatioProductRatio{sol.alpha_star, sol.beta_star}, s),
                   WithinRel(estimate(UnbiasedAoe{c}, s), 1e-9));
      }
    }
  }
}

TEST_CASE("rearranged evaluators match the literal forms") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> par(-2.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_summary(gen, 0.6);
    const double a = par(gen), b = par(gen), k = par(gen);
    const double u = s.xbar / s.Xbar;
    if (std::abs(b * s.xbar + (1 - b) * s.Xbar) > 1e-3 &&
        std::abs((1 - b) * s.xbar + b * s.Xbar) > 1e-3)
      CHECK_THAT(estimate(RatioProductRatio{a, b}, s), WithinRel(rpr_literal(a, b, s), 1e-9));
    CHECK_THAT(estimate(UnbiasedAoe{k}, s), WithinRel(aoe_literal(k, s), 1e-9));
    CHECK_THAT(estimate(SrivastavaPower{k}, s), WithinRel(s.ybar * std::pow(u, k), 1e-12));
    if (std::abs(s.Xbar + k * (s.xbar - s.Xbar)) > 1e-3)
      CHECK_THAT(estimate(Reddy{k}, s),
                 WithinRel(s.ybar * s.Xbar / (s.Xbar + k * (s.xbar - s.Xbar)), 1e-12));
    CHECK_THAT(estimate(SahaiTransformed{k}, s),
               WithinRel(s.ybar * (2 - std::pow(u, k)), 1e-9));
    CHECK_THAT(estimate(SinghRatioProduct{k}, s),
               WithinRel(s.ybar * (k / u + (1 - k) * u), 1e-9));
  }
}

TEST_CASE("every estimator returns ybar when xbar equals Xbar") {
  const SampleSummary s{0.5832, 0.6277, 0.6277};
  for (const EstimatorSpec& e :
       {EstimatorSpec{SampleMean{}}, EstimatorSpec{Ratio{}}, EstimatorSpec{Product{}},
        EstimatorSpec{RatioProductRatio{-0.3349, 0.3176}}, EstimatorSpec{UnbiasedAoe{0.6092}},
        EstimatorSpec{SrivastavaPower{-0.6092}}, EstimatorSpec{Reddy{0.6092}},
        EstimatorSpec{SahaiTransformed{0.6092}}, EstimatorSpec{SinghRatioProduct{0.8046}}})
    CHECK(estimate(e, s) == s.ybar);
}

TEST_CASE("point reflection leaves the estimate unchanged") {
  CHECK(symmetry_partner(0, 0) == std::pair<double, double>{1, 1});
  CHECK(symmetry_partner(0.5, 0.5) == std::pair<double, double>{0.5, 0.5});
  const auto [pa, pb] = symmetry_partner(-0.3349, 0.3176);
  CHECK_THAT(pa, WithinRel(1.3349, 1e-15));
  CHECK_THAT(pb, WithinRel(0.6824, 1e-15));
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> par(-2.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_summary(gen, 0.5);
    const double a = par(gen), b = par(gen);
    const auto [a2, b2] = symmetry_partner(a, b);
    const auto e1 = evaluate(RatioProductRatio{a, b}, s);
    const auto e2 = evaluate(RatioProductRatio{a2, b2}, s);
    if (e1.singular || std::abs(e1.value) > 1e6) continue;
    CHECK_THAT(e2.value, WithinRel(e1.value, 1e-9));
  }
}

TEST_CASE("singular denominators") {
  SECTION("ratio at xbar = 0") {
    const auto e = evaluate(Ratio{}, {1.0, 0.0, 2.0});
    CHECK(e.singular);
    CHECK(std::isnan(e.value));
    CHECK_THROWS_AS(estimate(Ratio{}, {1.0, 0.0, 2.0}), SingularDenominatorError);
  }
  SECTION("AOE closed form at a root of its denominator") {
    // c = 1/2 gives 2c^2 - c - 1 = -1, so the denominator vanishes at xbar = -Xbar.
    try {
      estimate(UnbiasedAoe{0.5}, {1.0, -2.0, 2.0});
      FAIL("expected a singular denominator");
    } catch (const SingularDenominatorError& e) {
      CHECK(e.denominator() == 0.0);
      CHECK(e.kind() == ErrorKind::SingularDenominator);
    }
  }
  SECTION("RPR where beta xbar + (1 - beta) Xbar vanishes") {
    CHECK(evaluate(RatioProductRatio{0.3, 2.0}, {1.0, 1.0, 2.0}).singular);
  }
}

TEST_CASE("estimate validates inputs") {
  CHECK_THROWS_AS(estimate(SampleMean{}, {1.0, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(estimate(SampleMean{}, {NAN, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(estimate(RatioProductRatio{INFINITY, 0.2}, {1.0, 1.0, 1.0}), Error);
  CHECK_THROWS_AS(estimate(Reddy{NAN}, {1.0, 1.0, 1.0}), Error);
}

TEST_CASE("token round trip") {
  for (const char* token : {"mean", "ratio", "product", "rpr:-0.3349,0.3176", "aoe:0.6092",
                            "srivastava:-0.6092", "reddy:0.6092", "sahai:0.6092",
                            "singh:0.8046"})
    CHECK(to_token(parse_estimator(token)) == token);
  const auto rpr = std::get<RatioProductRatio>(parse_estimator("rpr:+0.25,1e-3"));
  CHECK(rpr.alpha == 0.25);
  CHECK(rpr.beta == 0.001);
  CHECK(to_token(UnbiasedAoe{1.0 / 3.0}) == "aoe:0.3333333333333333");
}

TEST_CASE("bad tokens name the valid forms") {
  CHECK_THROWS_WITH(parse_estimator("median"), ContainsSubstring("rpr:<alpha>,<beta>"));
  CHECK_THROWS_AS(parse_estimator("rpr:0.1"), Error);
  CHECK_THROWS_AS(parse_estimator("aoe:"), Error);
  CHECK_THROWS_AS(parse_estimator("aoe:nan"), Error);
  CHECK_THROWS_AS(parse_estimator("aoe:1x"), Error);
  CHECK_THROWS_AS(parse_estimator("foo:1"), Error);
}
