#pragma once

namespace rpr {

/// Inverse of the standard normal CDF, Wichura's AS241 (PPND16) rational
/// approximation. Relative accuracy about 1e-16 over (0, 1); returns -inf
/// and +inf at 0 and 1, NaN outside [0, 1].
double normal_quantile(double p) noexcept;

} // namespace rpr
