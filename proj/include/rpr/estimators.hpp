#pragma once

// Point estimators of a finite population mean that use a known auxiliary
// mean. Every estimator is a function of (ybar, xbar, Xbar) only.

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rpr {

struct SampleMean {};
struct Ratio {};
struct Product {};

/// alpha * [((1-b) xbar + b X) / (b xbar + (1-b) X)] ybar
///   + (1-alpha) * [(b xbar + (1-b) X) / ((1-b) xbar + b X)] ybar
struct RatioProductRatio {
  double alpha = 0.5;
  double beta = 0.5;
};

/// Closed form of the ratio-product-ratio estimator at the unbiased optimum
/// for a given C. Real-valued for every C, including 0 < C <= 1/2 where the
/// underlying (alpha, beta) are complex.
struct UnbiasedAoe {
  double c = 0.0;
};

struct SrivastavaPower { double k = 0.0; };   // ybar (xbar/X)^k
struct Reddy { double k = 0.0; };             // ybar X / (X + k (xbar - X))
struct SahaiTransformed { double k = 0.0; };  // ybar (2 - (xbar/X)^k)
struct SinghRatioProduct { double k = 0.0; }; // ybar (k X/xbar + (1-k) xbar/X)

using EstimatorSpec = std::variant<SampleMean, Ratio, Product, RatioProductRatio, UnbiasedAoe,
                                   SrivastavaPower, Reddy, SahaiTransformed, SinghRatioProduct>;

struct SampleSummary {
  double ybar = 0.0;
  double xbar = 0.0;
  double Xbar = 0.0; // known population mean of x
};

/// Result of evaluating an estimator without throwing. When `singular` is
/// set, `denominator` holds the offending denominator and `value` is NaN.
struct Evaluation {
  double value = 0.0;
  bool singular = false;
  double denominator = 0.0;
};

Evaluation evaluate(const EstimatorSpec& spec, const SampleSummary& s) noexcept;

/// Throws SingularDenominatorError when a denominator of the closed form
/// vanishes, and InvalidInput for non-finite parameters or Xbar == 0.
double estimate(const EstimatorSpec& spec, const SampleSummary& s);

/// The ratio-product-ratio estimator is invariant under this reflection
/// through (1/2, 1/2).
std::pair<double, double> symmetry_partner(double alpha, double beta) noexcept;

/// Shell-friendly token: mean, ratio, product, rpr:<a>,<b>, aoe:<c>,
/// srivastava:<k>, reddy:<k>, sahai:<k>, singh:<k>.
std::string to_token(const EstimatorSpec& spec);

/// Inverse of to_token. Throws InvalidInput listing the valid tokens.
EstimatorSpec parse_estimator(std::string_view token);

const std::vector<std::string>& estimator_token_forms();

bool parameters_finite(const EstimatorSpec& spec) noexcept;

} // namespace rpr
