#include <catch2/catch_amalgamated.hpp>

#include "rpr/error.hpp"
#include "rpr/normal.hpp"
#include "rpr/rng.hpp"
#include "rpr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace rpr;

TEST_CASE("normal quantile against high-precision values") {
  struct Row {
    double p, q;
  };
  for (const Row& row : {Row{1e-12, -7.0344838253011319}, Row{1e-6, -4.7534243088228989},
                         Row{0.001, -3.0902323061678135}, Row{0.025, -1.9599639845400542},
                         Row{0.05, -1.6448536269514727}, Row{0.3, -0.52440051270804078}}) {
    CHECK_THAT(normal_quantile(row.p), WithinRel(row.q, 1e-14));
    CHECK_THAT(normal_quantile(1.0 - row.p), WithinRel(-row.q, row.p < 1e-5 ? 1e-6 : 1e-13));
  }
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.0) == -INFINITY);
  CHECK(normal_quantile(1.0) == INFINITY);
  CHECK(std::isnan(normal_quantile(-0.1)));
  CHECK(std::isnan(normal_quantile(1.5)));
  CHECK(std::isnan(normal_quantile(NAN)));
}

TEST_CASE("normal quantile is monotone") {
  double prev = -INFINITY;
  for (int i = 1; i < 10000; ++i) {
    const double q = normal_quantile(i / 10000.0);
    CHECK(q > prev);
    prev = q;
  }
}

TEST_CASE("z quantiles") {
  CHECK_THAT(z_quantile(0.90), WithinRel(1.6448536269514727, 1e-14));
  CHECK_THAT(z_quantile(0.90), WithinAbs(1.6449, 1e-4));
  CHECK_THAT(z_quantile(0.99), WithinRel(2.5758293035489008, 1e-14));
  CHECK_THAT(z_quantile(0.9544997), WithinAbs(2.0, 1e-3));
  CHECK_THAT(z_quantile(0.9544997), WithinRel(1.999999665651202, 1e-12));
  for (double bad : {0.0, 1.0, -0.5, 2.0, std::nan("")})
    CHECK_THROWS_MATCHES(z_quantile(bad), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == ErrorKind::OutOfRange; }));
}

TEST_CASE("sample size plan") {
  const auto plan = plan_sample_size(0.2006, 0.0583, 0.90, 365);
  CHECK(plan.n0 == 160);
  CHECK(plan.n == 112);
  CHECK_THAT(plan.n0_exact, WithinRel(159.67919435213854, 1e-12));
  CHECK(plan.n <= plan.n0);

  const auto loose = plan_sample_size(0.2006, 1e6, 0.90, 365);
  CHECK(loose.n0 == 1);
  CHECK(loose.n == 1);

  const auto huge = plan_sample_size(0.2006, 0.0583, 0.90, 1'000'000'000);
  CHECK(huge.n0 == 160);
  CHECK(huge.n == 160);

  CHECK_THROWS_AS(plan_sample_size(0.2006, 0.0, 0.90, 365), Error);
  CHECK_THROWS_AS(plan_sample_size(0.2006, -1.0, 0.90, 365), Error);
  CHECK_THROWS_AS(plan_sample_size(-1.0, 0.05, 0.90, 365), Error);
  CHECK_THROWS_AS(plan_sample_size(0.2006, 0.05, 1.0, 365), Error);
  CHECK_THROWS_AS(plan_sample_size(0.2006, 1e-300, 0.90, 365), Error);
}

TEST_CASE("plan never exceeds the population") {
  for (std::size_t N : {2u, 3u, 10u, 365u}) {
    for (double d : {1e-3, 0.01, 0.1, 1.0}) {
      const auto plan = plan_sample_size(0.2006, d, 0.95, N);
      CHECK(plan.n >= 1);
      CHECK(plan.n <= N);
      CHECK(plan.n <= plan.n0);
    }
  }
}

TEST_CASE("confidence interval half width") {
  CHECK_THAT(ci_half_width(std::sqrt(0.2006), 112, 365, 0.90),
             WithinRel(0.058035439617600173, 1e-12));
  CHECK_THAT(ci_half_width(std::sqrt(0.2006), 112, 365, 0.90), WithinAbs(0.0580, 5e-4));
  CHECK(ci_half_width(0.0, 112, 365, 0.90) == 0.0);
  // Near census: only the sqrt((N-n)/(N-1)) factor remains beyond z S / sqrt(n).
  const std::size_t N = 100'000;
  const double z = z_quantile(0.9);
  CHECK_THAT(ci_half_width(2.0, N - 1, N, 0.9),
             WithinRel(z * 2.0 / std::sqrt(double(N - 1)) * std::sqrt(1.0 / (N - 1)), 1e-12));
  CHECK_THROWS_AS(ci_half_width(1.0, 0, 10, 0.9), Error);
  CHECK_THROWS_AS(ci_half_width(1.0, 10, 10, 0.9), Error);
  CHECK_THROWS_AS(ci_half_width(-1.0, 2, 10, 0.9), Error);

  const auto ci = confidence_interval(0.5832, std::sqrt(0.2006), 112, 365, 0.90);
  CHECK_THAT(ci.hi - ci.lo, WithinRel(2 * ci.half_width, 1e-12));
  CHECK_THAT(0.5 * (ci.hi + ci.lo), WithinRel(0.5832, 1e-14));
}

TEST_CASE("counter RNG") {
  CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
    CHECK(va != d.next());
  }
  CounterRng u(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform_open();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    CHECK(u.below(7) < 7);
  }
  CHECK(u.below(1) == 0);
}

TEST_CASE("SRSWOR draws") {
  SECTION("census returns every index") {
    const auto all = srswor(9, 9, 123, 0);
    std::vector<std::size_t> expected(9);
    std::iota(expected.begin(), expected.end(), 0);
    CHECK(all == expected);
  }
  SECTION("deterministic per (seed, stream)") {
    CHECK(srswor(365, 112, 42, 7) == srswor(365, 112, 42, 7));
    CHECK(srswor(365, 112, 42, 7) != srswor(365, 112, 42, 8));
  }
  SECTION("sorted, distinct and in range") {
    SrsworSampler sampler(50);
    std::vector<std::size_t> out;
    for (std::uint64_t s = 0; s < 500; ++s) {
      sampler.draw(17, 9, s, out);
      REQUIRE(out.size() == 17);
      CHECK(std::is_sorted(out.begin(), out.end()));
      CHECK(std::adjacent_find(out.begin(), out.end()) == out.end());
      CHECK(out.back() < 50);
    }
  }
  SECTION("reused sampler matches the one-shot function") {
    SrsworSampler sampler(30);
    std::vector<std::size_t> out;
    sampler.draw(10, 5, 1, out);
    sampler.draw(10, 5, 2, out);
    CHECK(out == srswor(30, 10, 5, 2));
  }
  SECTION("invalid sizes") {
    CHECK_THROWS_AS(srswor(5, 0, 1, 1), Error);
    CHECK_THROWS_AS(srswor(5, 6, 1, 1), Error);
  }
}

TEST_CASE("SRSWOR is uniform over subsets") {
  // N = 6, n = 3 has 20 subsets; chi-square with 19 df, critical value at
  // 1e-3 is 43.820196 (scipy).
  const std::size_t reps = 200'000;
  std::map<std::vector<std::size_t>, std::size_t> counts;
  SrsworSampler sampler(6);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < reps; ++r) {
    sampler.draw(3, 2024, r, out);
    ++counts[out];
  }
  REQUIRE(counts.size() == 20);
  const double expected = reps / 20.0;
  double chi2 = 0.0;
  for (const auto& [subset, count] : counts) chi2 += std::pow(count - expected, 2) / expected;
  CHECK(chi2 < 43.820196);

  // Inclusion counts per unit against 5 df (critical 20.515006); this is
  // conservative because inclusions within a draw are negatively correlated.
  std::vector<double> inclusion(6, 0.0);
  for (const auto& [subset, count] : counts)
    for (auto i : subset) inclusion[i] += static_cast<double>(count);
  double chi2_units = 0.0;
  for (double c : inclusion) chi2_units += std::pow(c - reps * 0.5, 2) / (reps * 0.5);
  CHECK(chi2_units < 20.515006);
}
