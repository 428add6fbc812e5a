#pragma once

// First-order (O(1/n)) bias and MSE of the ratio-product-ratio estimator and
// of the classical and alternative estimators it is compared against.
//
// Throughout, fpc denotes (1-f)/n and
//   e1 = (ybar - Ybar)/Ybar,   e2 = (xbar - Xbar)/Xbar,
//   E[e1^2] = fpc Cy^2,  E[e2^2] = fpc Cx^2,  E[e1 e2] = fpc C Cx^2.

#include "rpr/estimators.hpp"
#include "rpr/population.hpp"

#include <array>
#include <optional>
#include <utility>

namespace rpr {

struct FirstOrderResult {
  double bias1 = 0.0;
  double mse1 = 0.0;
};

double bias1_rpr(double alpha, double beta, const SummaryStats& st, const SamplingDesign& d);
double mse1_rpr(double alpha, double beta, const SummaryStats& st, const SamplingDesign& d);

/// Gradient of mse1_rpr with respect to (alpha, beta).
std::array<double, 2> mse1_grad(double alpha, double beta, const SummaryStats& st,
                                const SamplingDesign& d);

enum class ClassicalEstimator { SampleMean, Ratio, Product };

/// Exact variance for the sample mean, first-order MSE for ratio and product.
double mse1_classical(ClassicalEstimator kind, const SummaryStats& st, const SamplingDesign& d);

/// The two roots in beta of bias1_rpr = 0: (1/2, 1 - alpha - c + 2 alpha c).
std::pair<double, double> biasfree_betas(double alpha, double c) noexcept;

/// Branch of the unbiased-optimum parameters, named after the sign in
/// alpha* = (1 -/+ sqrt(c/(2c-1)))/2. beta* follows from the optimality
/// constraint (1-2a)(1-2b) = c, so for c > 1/2 both signs match and for
/// c <= 0 they are opposite.
enum class AoeBranch { MinusMinus, PlusPlus };

struct AoeSolution {
  double alpha_star = 0.0;
  double beta_star = 0.0;
  AoeBranch branch = AoeBranch::MinusMinus;
  bool is_real = false; // false for 0 < c < 1/2; the parameters are then NaN
};

/// Parameters that make the estimator unbiased and MSE-optimal to first
/// order. Throws PoleAtHalf for c == 1/2, and NonRealParameters for
/// 0 < c < 1/2 when `require_real` is set.
AoeSolution aoe_parameters(double c, AoeBranch branch, bool require_real = false);

/// First-order bias along the optimal hyperbola (1-2a)(1-2b) = c.
double aoe_bias1(double beta, double c, const SummaryStats& st, const SamplingDesign& d);

enum class Dominance { OverProduct, OverRatio, OverSampleMean };

/// True when mse1_rpr(alpha, beta) is strictly below the competitor's MSE.
bool dominates(Dominance kind, double alpha, double beta, double c) noexcept;

/// Closed-form difference MSE(competitor) - MSE1(rpr); positive iff dominates.
double mse1_advantage(Dominance kind, double alpha, double beta, const SummaryStats& st,
                      const SamplingDesign& d);

/// The set of alpha for which `dominates` holds at fixed (beta, c), as an
/// open interval (lo, hi). Empty (nullopt) when beta == 1/2 or the interval
/// degenerates.
std::optional<std::pair<double, double>> dominance_alpha_interval(Dominance kind, double beta,
                                                                  double c) noexcept;

/// Coefficients (g1, g2) of the expansion estimator/ybar = 1 + g1 e2 + g2 e2^2 + ...
/// Bias and MSE of every supported estimator follow from these two numbers.
struct ExpansionCoefficients {
  double linear = 0.0;
  double quadratic = 0.0;
};

ExpansionCoefficients expansion_coefficients(const EstimatorSpec& spec) noexcept;

/// First-order bias and MSE of any supported estimator.
FirstOrderResult family_theory(const EstimatorSpec& spec, const SummaryStats& st,
                               const SamplingDesign& d);

/// MSE1(numerator) / MSE1(denominator). The fpc factor cancels, so the value
/// does not depend on the design. Throws DegenerateMSE when the denominator
/// MSE is zero.
double relative_efficiency(const EstimatorSpec& numerator, const EstimatorSpec& denominator,
                           const SummaryStats& st, const SamplingDesign& d);

/// Parameters at which each alternative estimator attains the optimal
/// first-order MSE fpc S_Y^2 (1 - r^2).
struct OptimalFamily {
  UnbiasedAoe unbiased_aoe;
  SrivastavaPower srivastava;
  Reddy reddy;
  SahaiTransformed sahai;
  SinghRatioProduct singh;
};

OptimalFamily optimal_family(double c) noexcept;

/// fpc S_Y^2 (1 - r^2): the smallest first-order MSE reachable.
double minimal_mse1(const SummaryStats& st, const SamplingDesign& d) noexcept;

} // namespace rpr
