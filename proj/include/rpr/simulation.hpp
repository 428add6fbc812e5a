#pragma once

// Deterministic Monte Carlo comparison of estimators under SRSWOR, plus an
// exhaustive all-samples oracle for tiny populations.

#include "rpr/estimators.hpp"
#include "rpr/population.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rpr {

struct SimConfig {
  std::size_t reps = 10'000;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double confidence = 0.90;
  std::vector<EstimatorSpec> estimators;
  unsigned threads = 1; // affects wall time only, never the results
};

struct EstimatorReport {
  std::string label;
  std::size_t valid_count = 0;    // draws without a singular denominator
  std::size_t singular_count = 0; // draws where the estimator was undefined
  double coverage = 0.0;          // CI contains Ybar
  double neg_bias_rate = 0.0;     // CI entirely below Ybar
  double pos_bias_rate = 0.0;     // CI entirely above Ybar
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double mse_empirical = 0.0;     // mean squared deviation from Ybar
  double re_vs_sample_mean = 0.0; // MSE(sample mean) / MSE(this)
  double skewness = 0.0;          // m3 / m2^(3/2)
  double kurtosis = 0.0;          // m4 / m2^2 (3 for a normal)
};

/// Counts of each ordering of the estimators by |estimate - Ybar|,
/// ascending; ties broken by configuration order. Draws where any estimator
/// is singular are not ranked.
struct RankingTable {
  std::vector<std::string> labels;
  std::map<std::vector<std::size_t>, std::size_t> counts;

  std::size_t total() const;
  /// Number of ranked draws in which estimator `index` came first.
  std::size_t first_place(std::size_t index) const;
};

struct SimMetadata {
  std::uint64_t seed = 0;
  std::string prng;
  std::size_t reps = 0;
  std::size_t n = 0;
  std::size_t N = 0;
  double confidence = 0.0;
  double population_mean = 0.0;
  double ci_half_width = 0.0;
  // Not part of the deterministic report.
  double wall_seconds = 0.0;
  unsigned threads = 1;
};

struct SimResult {
  std::vector<EstimatorReport> reports;
  RankingTable ranking;
  SimMetadata metadata;
  /// reps x estimators, row-major; NaN marks a singular draw.
  std::vector<double> estimates;
};

/// Replication r draws its sample from stream r of cfg.seed; all estimators
/// see the same draw. Intervals use the known population S_Y. Throws
/// InvalidInput / InvalidDesign for a configuration that does not fit `pop`.
SimResult run_simulation(const Population& pop, const SimConfig& cfg);

struct ExactMoments {
  double expectation = 0.0;
  double mse = 0.0;
  double bias = 0.0;
  std::size_t samples = 0;   // C(N, n)
  std::size_t singular = 0;  // samples where the estimator was undefined
};

inline constexpr std::size_t kExhaustiveLimit = 1'000'000;

/// Expectation, MSE and bias over all C(N, n) equally likely samples.
/// Throws TooLarge when C(N, n) exceeds kExhaustiveLimit and
/// SingularDenominatorError if any sample makes the estimator undefined.
ExactMoments exhaustive_oracle(const Population& pop, std::size_t n, const EstimatorSpec& spec);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear interpolation between order statistics at 1-based position
/// p (len - 1) + 1. Throws Empty for an empty input.
Quartiles quartiles(std::vector<double> values);

} // namespace rpr
