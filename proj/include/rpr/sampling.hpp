#pragma once

// SRSWOR draws, sample-size planning and normal-theory confidence intervals
// with finite population correction.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rpr {

/// Upper alpha/2 point of the standard normal with alpha = 1 - confidence.
/// Throws OutOfRange unless 0 < confidence < 1.
double z_quantile(double confidence);

struct SamplePlan {
  std::size_t n0 = 0;      // infinite-population size, rounded up
  std::size_t n = 0;       // fpc-adjusted size, rounded up
  double n0_exact = 0.0;   // z^2 sigma^2 / d^2 before rounding
  double d = 0.0;          // margin of error
  double confidence = 0.0;
  double z = 0.0;
};

/// n0 = ceil(z^2 sigma2 / d^2) (at least 1), n = ceil(1 / (1/n0 + 1/N)).
/// Throws InvalidInput for nonpositive sigma2 or d, or N == 0.
SamplePlan plan_sample_size(double sigma2, double d, double confidence, std::size_t N);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width = 0.0;
};

/// z * sqrt(S_Y^2 / n) * sqrt((N - n)/(N - 1)).
double ci_half_width(double sd_y, std::size_t n, std::size_t N, double confidence);

/// point +/- ci_half_width. Throws InvalidDesign unless 1 <= n < N and
/// InvalidInput for a negative sd_y.
ConfidenceInterval confidence_interval(double point, double sd_y, std::size_t n, std::size_t N,
                                       double confidence);

/// Draws simple random samples without replacement by a partial
/// Fisher-Yates shuffle over a reusable index buffer. One instance per
/// thread.
class SrsworSampler {
public:
  explicit SrsworSampler(std::size_t pop_size);

  /// Sorted, 0-based, strictly increasing indices of a size-n sample from
  /// stream (seed, stream). Throws InvalidDesign unless 1 <= n <= pop_size.
  void draw(std::size_t n, std::uint64_t seed, std::uint64_t stream,
            std::vector<std::size_t>& out);

  std::size_t pop_size() const noexcept { return scratch_.size(); }

private:
  std::vector<std::size_t> scratch_;
};

std::vector<std::size_t> srswor(std::size_t pop_size, std::size_t n, std::uint64_t seed,
                                std::uint64_t stream);

} // namespace rpr
