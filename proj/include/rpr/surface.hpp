#pragma once

// Plot-ready samples of the bias-free surface, the optimal-MSE surface and
// the dominance region in (alpha, beta, c) space.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace rpr {

enum class SurfaceKind { BiasFree, Aoe, DominanceRegion };

SurfaceKind parse_surface_kind(std::string_view name);

/// Inclusive range lo, lo + step, ..., <= hi.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::size_t count() const;
  double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

/// Parses "lo:hi:step" or a single value "v".
GridAxis parse_grid_axis(std::string_view text);

struct GridSpec {
  GridAxis alpha;
  GridAxis beta; // ignored by BiasFree and Aoe, where beta is solved for
  GridAxis c;
};

struct SurfaceRow {
  double alpha = 0.0;
  double beta = 0.0;
  double c = 0.0;
  std::optional<int> indicator;
};

/// BiasFree: both sheets over the (alpha, c) grid; indicator marks the sheet
///           (0 = plane beta = 1/2, 1 = saddle beta = 1 - alpha - c + 2 alpha c).
/// Aoe:      beta solving (1-2 alpha)(1-2 beta) = c over the (alpha, c) grid,
///           skipping alpha = 1/2.
/// DominanceRegion: every (alpha, beta, c) grid point; indicator is 1 where
///           the estimator beats product, ratio and sample mean at once.
/// Throws InvalidInput for non-finite bounds or a nonpositive step.
std::vector<SurfaceRow> surface_grid(SurfaceKind kind, const GridSpec& grid);

/// CSV with header `alpha,beta,c` or `alpha,beta,c,indicator`.
void write_surface_csv(std::ostream& out, SurfaceKind kind, const std::vector<SurfaceRow>& rows);

} // namespace rpr
