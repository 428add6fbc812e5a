#pragma once

#include "rpr/population.hpp"

#include <cstddef>
#include <cstdint>

namespace rpr {

struct MomentTargets {
  std::size_t N = 0;
  double mean_y = 0.0;
  double mean_x = 0.0;
  double cv_y = 0.0;
  double cv_x = 0.0;
  double r = 0.0;
};

/// Positive surrogate population whose means, coefficients of variation and
/// correlation equal the targets up to rounding.
///
/// Shape: a Gaussian copula with lognormal marginals whose own CVs equal the
/// targets (so the columns are right-skewed and stay positive even for
/// CV > 1). The latent correlation is set so the lognormal correlation is
/// close to r; Gram-Schmidt then fixes the sample correlation to r exactly
/// and an affine map fixes means and CVs. A draw that still contains a
/// nonpositive value is redrawn from the next sub-stream.
///
/// Throws InvalidInput for N < 3, nonpositive means or CVs, or |r| >= 1, and
/// InfeasibleTargets when no positive draw is found.
Population generate_population(const MomentTargets& targets, std::uint64_t seed);

} // namespace rpr
