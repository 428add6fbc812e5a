#pragma once

// Finite populations, their summary statistics and the SRSWOR design
// constants consumed by every first-order formula.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace rpr {

/// Paired study (y) and auxiliary (x) values. Immutable once built.
class Population {
public:
  /// Throws InvalidInput unless both columns have the same length >= 2 and
  /// every entry is finite.
  Population(std::vector<double> y, std::vector<double> x);

  std::span<const double> y() const noexcept { return y_; }
  std::span<const double> x() const noexcept { return x_; }
  std::size_t size() const noexcept { return y_.size(); }

private:
  std::vector<double> y_;
  std::vector<double> x_;
};

/// Population-level moments. Variances and covariance use the N-1 divisor.
struct SummaryStats {
  double mean_y = 0.0;
  double mean_x = 0.0;
  double var_y = 0.0;
  double var_x = 0.0;
  double cov_xy = 0.0;
  double r = 0.0;    // Pearson correlation
  double cv_y = 0.0; // S_Y / Ybar
  double cv_x = 0.0; // S_X / Xbar
  double c = 0.0;    // r * cv_y / cv_x

  double sd_y() const;
  double sd_x() const;
};

/// Throws ZeroMean or DegenerateVariance when a coefficient of variation or
/// the correlation is undefined.
SummaryStats summarize(const Population& pop);

/// Builds SummaryStats from published moments (means, standard deviations,
/// correlation) when the raw population is not available.
SummaryStats stats_from_moments(double mean_y, double mean_x, double sd_y, double sd_x, double r);

/// Reads the `y,x` CSV format. Errors carry the 1-based line number.
Population load_population_csv(const std::filesystem::path& path);
Population parse_population_csv(std::istream& in);
void write_population_csv(std::ostream& out, const Population& pop);

struct SamplingDesign {
  std::size_t n = 0;
  std::size_t N = 0;
  double f = 0.0;        // sampling fraction n/N
  double fpc_rate = 0.0; // (1 - f)/n
};

/// Throws InvalidDesign unless 1 <= n < N.
SamplingDesign make_design(std::size_t n, std::size_t N);

} // namespace rpr
