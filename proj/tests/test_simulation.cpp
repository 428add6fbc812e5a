#include <catch2/catch_amalgamated.hpp>

#include "rpr/error.hpp"
#include "rpr/population.hpp"
#include "rpr/simulation.hpp"
#include "rpr/theory.hpp"

#include <cmath>
#include <cstring>
#include <limits>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace rpr;

namespace {

const Population kToy({2.1, 3.4, 1.7, 4.0, 2.9, 3.3}, {1.9, 3.0, 1.5, 4.4, 2.6, 3.1});

// Low-CV population (C_X ~ 0.04) where second-order terms are small.
const Population kLowCv({10.2, 11.1, 9.6, 10.8, 9.9, 10.5, 11.4, 9.3},
                        {20.5, 21.4, 19.9, 21.0, 20.6, 20.2, 22.1, 19.4});

SimConfig config(std::size_t reps, std::size_t n, std::vector<EstimatorSpec> est) {
  SimConfig cfg;
  cfg.reps = reps;
  cfg.n = n;
  cfg.seed = 20240601;
  cfg.estimators = std::move(est);
  return cfg;
}

} // namespace

TEST_CASE("quartiles") {
  const auto a = quartiles({5, 1, 4, 2, 3});
  CHECK(a.q1 == 2.0);
  CHECK(a.median == 3.0);
  CHECK(a.q3 == 4.0);
  const auto b = quartiles({7.5});
  CHECK(b.q1 == 7.5);
  CHECK(b.q3 == 7.5);
  const auto c = quartiles({4, 3, 2, 1});
  CHECK(c.q1 == 1.75);
  CHECK(c.median == 2.5);
  CHECK(c.q3 == 3.25);
  CHECK_THROWS_AS(quartiles({}), Error);
}

TEST_CASE("exhaustive oracle: independently computed moments") {
  const auto mean = exhaustive_oracle(kToy, 3, SampleMean{});
  CHECK(mean.samples == 20);
  CHECK_THAT(mean.expectation, WithinRel(2.9, 1e-15));
  CHECK_THAT(mean.bias, WithinAbs(0.0, 4 * std::numeric_limits<double>::epsilon() * 2.9));
  CHECK_THAT(mean.mse, WithinRel(0.12333333333333333, 1e-14));
  const auto st = summarize(kToy);
  CHECK_THAT(mean.mse, WithinRel(make_design(3, 6).fpc_rate * st.var_y, 1e-14));

  const auto ratio = exhaustive_oracle(kToy, 3, Ratio{});
  CHECK_THAT(ratio.expectation, WithinRel(2.915646304729561, 1e-14));
  CHECK_THAT(ratio.mse, WithinRel(0.01838357339106135, 1e-13));

  const auto rpr = exhaustive_oracle(kToy, 3, RatioProductRatio{0.2, 0.3});
  CHECK_THAT(rpr.expectation, WithinRel(2.9008929462056998, 1e-14));
  CHECK_THAT(rpr.mse, WithinRel(0.062764467784830214, 1e-13));
}

TEST_CASE("exhaustive oracle: beta = 1/2 reproduces the sample mean exactly") {
  const auto mean = exhaustive_oracle(kToy, 3, SampleMean{});
  for (double a : {-2.0, 0.2, 5.0}) {
    const auto line = exhaustive_oracle(kToy, 3, RatioProductRatio{a, 0.5});
    CHECK(line.expectation == mean.expectation);
    CHECK(line.mse == mean.mse);
    CHECK(line.bias == mean.bias);
  }
}

TEST_CASE("exhaustive oracle: sample mean variance identity on many populations") {
  for (std::size_t N = 3; N <= 10; ++N) {
    std::vector<double> y, x;
    for (std::size_t i = 0; i < N; ++i) {
      y.push_back(1.0 + std::sin(1.3 * static_cast<double>(i)) + 0.1 * static_cast<double>(i));
      x.push_back(2.0 + std::cos(0.7 * static_cast<double>(i)));
    }
    const Population pop(y, x);
    const auto st = summarize(pop);
    for (std::size_t n = 1; n < N; ++n) {
      const auto m = exhaustive_oracle(pop, n, SampleMean{});
      CHECK_THAT(m.bias, WithinAbs(0.0, 1e-14 * st.mean_y));
      CHECK_THAT(m.mse, WithinRel(make_design(n, N).fpc_rate * st.var_y, 1e-12));
    }
  }
}

TEST_CASE("first-order theory tracks exact moments near the optimality hyperbola") {
  const auto st = summarize(kLowCv);
  const auto d = make_design(4, 8);
  double worst_bias = 0.0, worst_mse = 0.0;
  for (int i = -15; i <= 25; ++i) {
    const double a = 0.1 * i;
    if (std::abs(1 - 2 * a) < 0.4) continue;
    const double b = 0.5 * (1 - st.c / (1 - 2 * a));
    const auto exact = exhaustive_oracle(kLowCv, 4, RatioProductRatio{a, b});
    const double rb = std::abs(bias1_rpr(a, b, st, d) - exact.bias) / std::abs(exact.bias);
    const double rm = std::abs(mse1_rpr(a, b, st, d) - exact.mse) / exact.mse;
    worst_bias = std::max(worst_bias, rb);
    worst_mse = std::max(worst_mse, rm);
  }
  CHECK(worst_bias < 0.15);
  CHECK(worst_mse < 0.15);
}

TEST_CASE("exhaustive oracle guards") {
  std::vector<double> v(40);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 + static_cast<double>(i);
  const Population big(v, v);
  CHECK_THROWS_MATCHES(exhaustive_oracle(big, 20, SampleMean{}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.kind() == ErrorKind::TooLarge; }));
  CHECK_NOTHROW(exhaustive_oracle(big, 3, SampleMean{}));
  const Population signed_x({1, 2, 3, 4}, {1, -1, 3, 5});
  CHECK_THROWS_AS(exhaustive_oracle(signed_x, 2, Ratio{}), SingularDenominatorError);
}

TEST_CASE("simulation agrees with the exhaustive oracle on a toy population") {
  auto cfg = config(50'000, 3, {SampleMean{}, Ratio{}});
  const auto result = run_simulation(kToy, cfg);
  const auto exact_mean = exhaustive_oracle(kToy, 3, SampleMean{});
  const auto& mean = result.reports[0];
  const double se = std::sqrt(exact_mean.mse / static_cast<double>(cfg.reps));
  CHECK(std::abs(mean.mean - exact_mean.expectation) < 3 * se);
  CHECK_THAT(mean.mse_empirical, WithinRel(exact_mean.mse, 0.05));
  const auto exact_ratio = exhaustive_oracle(kToy, 3, Ratio{});
  CHECK_THAT(result.reports[1].mse_empirical, WithinRel(exact_ratio.mse, 0.05));
}

TEST_CASE("simulation report invariants") {
  auto cfg = config(3000, 3, {SampleMean{}, Ratio{}, Product{}, UnbiasedAoe{0.9}});
  const auto result = run_simulation(kToy, cfg);
  CHECK(result.reports.size() == 4);
  CHECK(result.estimates.size() == 4 * cfg.reps);
  for (const auto& r : result.reports) {
    CHECK(r.valid_count + r.singular_count == cfg.reps);
    CHECK_THAT(r.coverage + r.neg_bias_rate + r.pos_bias_rate, WithinAbs(1.0, 1e-12));
    CHECK(r.q1 <= r.median);
    CHECK(r.median <= r.q3);
    CHECK(r.mse_empirical >= 0.0);
  }
  CHECK(result.reports[0].re_vs_sample_mean == 1.0);
  CHECK(result.ranking.total() == cfg.reps);
  CHECK(result.metadata.prng == "splitmix64-counter");
  CHECK(result.metadata.N == 6);
  CHECK(result.metadata.population_mean == summarize(kToy).mean_y);
}

TEST_CASE("results do not depend on the thread count") {
  auto cfg = config(4000, 3, {SampleMean{}, Ratio{}, RatioProductRatio{-0.3, 0.3}});
  cfg.threads = 1;
  const auto one = run_simulation(kToy, cfg);
  for (unsigned t : {2u, 3u, 8u}) {
    cfg.threads = t;
    const auto many = run_simulation(kToy, cfg);
    CHECK(std::memcmp(one.estimates.data(), many.estimates.data(),
                      one.estimates.size() * sizeof(double)) == 0);
    CHECK(one.ranking.counts == many.ranking.counts);
    for (std::size_t i = 0; i < one.reports.size(); ++i) {
      CHECK(one.reports[i].coverage == many.reports[i].coverage);
      CHECK(one.reports[i].skewness == many.reports[i].skewness);
    }
  }
}

TEST_CASE("constant study variable") {
  const Population flat({3, 3, 3, 3, 3}, {1, 2, 3, 4, 5});
  const auto result = run_simulation(flat, config(200, 2, {SampleMean{}}));
  CHECK(result.reports[0].coverage == 1.0);
  CHECK(result.reports[0].mse_empirical == 0.0);
  CHECK(result.metadata.ci_half_width == 0.0);
}

TEST_CASE("single replication yields a single ranking entry") {
  const auto result = run_simulation(kToy, config(1, 3, {SampleMean{}, Ratio{}, Product{}}));
  CHECK(result.ranking.counts.size() == 1);
  CHECK(result.ranking.total() == 1);
  CHECK(result.ranking.counts.begin()->second == 1);
}

TEST_CASE("ties keep configuration order") {
  const auto result =
      run_simulation(kToy, config(500, 3, {RatioProductRatio{0.3, 0.5}, SampleMean{}}));
  REQUIRE(result.ranking.counts.size() == 1);
  CHECK(result.ranking.counts.begin()->first == std::vector<std::size_t>{0, 1});
  CHECK(result.ranking.first_place(0) == 500);
  CHECK(result.ranking.first_place(1) == 0);
}

TEST_CASE("singular draws are counted, not fatal") {
  // Units 0 and 1 have x summing to zero, so that pair makes the ratio singular.
  const Population signed_x({1, 2, 3, 4}, {1, -1, 3, 5});
  const auto result = run_simulation(signed_x, config(6000, 2, {SampleMean{}, Ratio{}}));
  const auto& ratio = result.reports[1];
  CHECK(ratio.singular_count > 700);
  CHECK(ratio.singular_count < 1300);
  CHECK(ratio.valid_count + ratio.singular_count == 6000);
  CHECK(result.reports[0].singular_count == 0);
  CHECK(result.ranking.total() == 6000 - ratio.singular_count);
  std::size_t nan_count = 0;
  for (std::size_t r = 0; r < 6000; ++r) nan_count += std::isnan(result.estimates[r * 2 + 1]);
  CHECK(nan_count == ratio.singular_count);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(run_simulation(kToy, config(0, 3, {SampleMean{}})), Error);
  CHECK_THROWS_AS(run_simulation(kToy, config(10, 6, {SampleMean{}})), Error);
  CHECK_THROWS_AS(run_simulation(kToy, config(10, 3, {})), Error);
  CHECK_THROWS_AS(run_simulation(kToy, config(10, 3, {Reddy{NAN}})), Error);
  auto cfg = config(10, 3, {SampleMean{}});
  cfg.confidence = 1.0;
  CHECK_THROWS_AS(run_simulation(kToy, cfg), Error);
}
