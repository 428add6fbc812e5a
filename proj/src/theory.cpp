#include "rpr/theory.hpp"

#include "rpr/error.hpp"

#include <cmath>
#include <limits>

namespace rpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 2ab - a - b; every dominance factor is a function of this quantity, since
// (1-2a)(1-2b) = 1 + 2q.
double cross_term(double alpha, double beta) { return 2.0 * alpha * beta - alpha - beta; }

} // namespace

double bias1_rpr(double alpha, double beta, const SummaryStats& st, const SamplingDesign& d) {
  const double c = st.c;
  return d.fpc_rate * (1.0 - 2.0 * beta) * (1.0 - alpha - beta - (1.0 - 2.0 * alpha) * c) *
         st.cv_x * st.cv_x * st.mean_y;
}

double mse1_rpr(double alpha, double beta, const SummaryStats& st, const SamplingDesign& d) {
  const double p = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * beta);
  return d.fpc_rate * st.mean_y * st.mean_y *
         (st.cv_y * st.cv_y + st.cv_x * st.cv_x * p * (p - 2.0 * st.c));
}

std::array<double, 2> mse1_grad(double alpha, double beta, const SummaryStats& st,
                                const SamplingDesign& d) {
  const double a = 1.0 - 2.0 * alpha;
  const double b = 1.0 - 2.0 * beta;
  // d p / d alpha = -2 (1 - 2 beta), hence the leading minus.
  const double scale =
      -4.0 * d.fpc_rate * st.mean_y * st.mean_y * st.cv_x * st.cv_x * (a * b - st.c);
  return {scale * b, scale * a};
}

double mse1_classical(ClassicalEstimator kind, const SummaryStats& st, const SamplingDesign& d) {
  const double base = d.fpc_rate * st.mean_y * st.mean_y;
  const double cy2 = st.cv_y * st.cv_y;
  const double cx2 = st.cv_x * st.cv_x;
  switch (kind) {
  case ClassicalEstimator::SampleMean: return base * cy2;
  case ClassicalEstimator::Ratio: return base * (cy2 + cx2 * (1.0 - 2.0 * st.c));
  case ClassicalEstimator::Product: return base * (cy2 + cx2 * (1.0 + 2.0 * st.c));
  }
  return kNaN;
}

std::pair<double, double> biasfree_betas(double alpha, double c) noexcept {
  // 1 - a - c + 2ac, grouped so that alpha = 1/2 gives exactly 1/2.
  return {0.5, 0.5 + (1.0 - 2.0 * alpha) * (0.5 - c)};
}

AoeSolution aoe_parameters(double c, AoeBranch branch, bool require_real) {
  if (!std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "c must be finite");
  if (c == 0.5)
    throw Error(ErrorKind::PoleAtHalf, "alpha* has a pole at c = 1/2 (2c - 1 = 0)");

  AoeSolution sol;
  sol.branch = branch;
  sol.is_real = (c <= 0.0 || c > 0.5);
  if (!sol.is_real) {
    if (require_real)
      throw Error(ErrorKind::NonRealParameters,
                  "no real unbiased optimum exists for 0 < c < 1/2");
    sol.alpha_star = kNaN;
    sol.beta_star = kNaN;
    return sol;
  }

  const double sign = branch == AoeBranch::MinusMinus ? 1.0 : -1.0;
  // a = 1 - 2 alpha*, b = 1 - 2 beta*; a^2 = c/(2c-1) and b = a (2c-1).
  const double a = sign * std::sqrt(c / (2.0 * c - 1.0));
  const double b = a * (2.0 * c - 1.0);
  sol.alpha_star = 0.5 * (1.0 - a);
  sol.beta_star = 0.5 * (1.0 - b);
  return sol;
}

double aoe_bias1(double beta, double c, const SummaryStats& st, const SamplingDesign& d) {
  const double b = 1.0 - 2.0 * beta;
  return d.fpc_rate * st.cv_x * st.cv_x * st.mean_y * 0.5 * (c * (1.0 - 2.0 * c) + b * b);
}

bool dominates(Dominance kind, double alpha, double beta, double c) noexcept {
  const double q = cross_term(alpha, beta);
  switch (kind) {
  case Dominance::OverProduct: return (1.0 + q) * (c - q) > 0.0;
  case Dominance::OverRatio: return q * (c - 1.0 - q) > 0.0;
  case Dominance::OverSampleMean: {
    const double p = (1.0 - 2.0 * alpha) * (1.0 - 2.0 * beta);
    return p * (2.0 * c - p) > 0.0;
  }
  }
  return false;
}

double mse1_advantage(Dominance kind, double alpha, double beta, const SummaryStats& st,
                      const SamplingDesign& d) {
  const double own = mse1_rpr(alpha, beta, st, d);
  switch (kind) {
  case Dominance::OverProduct: return mse1_classical(ClassicalEstimator::Product, st, d) - own;
  case Dominance::OverRatio: return mse1_classical(ClassicalEstimator::Ratio, st, d) - own;
  case Dominance::OverSampleMean:
    return mse1_classical(ClassicalEstimator::SampleMean, st, d) - own;
  }
  return kNaN;
}

std::optional<std::pair<double, double>> dominance_alpha_interval(Dominance kind, double beta,
                                                                  double c) noexcept {
  // Each predicate holds exactly when q = alpha (2 beta - 1) - beta lies
  // strictly between two roots; map those roots back to alpha.
  double q1 = 0.0, q2 = 0.0;
  switch (kind) {
  case Dominance::OverProduct: q1 = -1.0; q2 = c; break;
  case Dominance::OverRatio: q1 = 0.0; q2 = c - 1.0; break;
  case Dominance::OverSampleMean: q1 = -0.5; q2 = c - 0.5; break;
  }
  const double slope = 2.0 * beta - 1.0;
  if (slope == 0.0 || q1 == q2) return std::nullopt;
  double lo = (q1 + beta) / slope;
  double hi = (q2 + beta) / slope;
  if (lo > hi) std::swap(lo, hi);
  return std::make_pair(lo, hi);
}

ExpansionCoefficients expansion_coefficients(const EstimatorSpec& spec) noexcept {
  return std::visit(
      [](const auto& p) -> ExpansionCoefficients {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SampleMean>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Ratio>) {
          return {-1.0, 1.0};
        } else if constexpr (std::is_same_v<T, Product>) {
          return {1.0, 0.0};
        } else if constexpr (std::is_same_v<T, RatioProductRatio>) {
          return {-(1.0 - 2.0 * p.alpha) * (1.0 - 2.0 * p.beta),
                  (1.0 - p.alpha - p.beta) * (1.0 - 2.0 * p.beta)};
        } else if constexpr (std::is_same_v<T, UnbiasedAoe>) {
          return {-p.c, p.c * p.c};
        } else if constexpr (std::is_same_v<T, SrivastavaPower>) {
          return {p.k, 0.5 * p.k * (p.k - 1.0)};
        } else if constexpr (std::is_same_v<T, Reddy>) {
          return {-p.k, p.k * p.k};
        } else if constexpr (std::is_same_v<T, SahaiTransformed>) {
          return {-p.k, -0.5 * p.k * (p.k - 1.0)};
        } else {
          // k/u + (1-k) u with 1/u = 1 - e + e^2
          return {1.0 - 2.0 * p.k, p.k};
        }
      },
      spec);
}

FirstOrderResult family_theory(const EstimatorSpec& spec, const SummaryStats& st,
                               const SamplingDesign& d) {
  // Estimators with a dedicated closed form use it directly.
  if (const auto* p = std::get_if<RatioProductRatio>(&spec))
    return {bias1_rpr(p->alpha, p->beta, st, d), mse1_rpr(p->alpha, p->beta, st, d)};
  if (std::holds_alternative<SampleMean>(spec))
    return {0.0, mse1_classical(ClassicalEstimator::SampleMean, st, d)};
  if (std::holds_alternative<Ratio>(spec))
    return {d.fpc_rate * (1.0 - st.c) * st.cv_x * st.cv_x * st.mean_y,
            mse1_classical(ClassicalEstimator::Ratio, st, d)};
  if (std::holds_alternative<Product>(spec))
    return {d.fpc_rate * st.c * st.cv_x * st.cv_x * st.mean_y,
            mse1_classical(ClassicalEstimator::Product, st, d)};

  const auto [g1, g2] = expansion_coefficients(spec);
  const double cx2 = st.cv_x * st.cv_x;
  FirstOrderResult out;
  out.bias1 = d.fpc_rate * st.mean_y * cx2 * (g1 * st.c + g2);
  // Cy^2 + 2 g1 C Cx^2 + g1^2 Cx^2, written around the optimum g1 = -C so
  // that the optimal members reproduce Cy^2 - C^2 Cx^2 without cancellation.
  const double shift = g1 + st.c;
  out.mse1 = d.fpc_rate * st.mean_y * st.mean_y *
             (st.cv_y * st.cv_y - st.c * st.c * cx2 + shift * shift * cx2);
  return out;
}

double relative_efficiency(const EstimatorSpec& numerator, const EstimatorSpec& denominator,
                           const SummaryStats& st, const SamplingDesign& d) {
  const double den = family_theory(denominator, st, d).mse1;
  if (den == 0.0)
    throw Error(ErrorKind::DegenerateMse, "denominator first-order MSE is zero");
  return family_theory(numerator, st, d).mse1 / den;
}

OptimalFamily optimal_family(double c) noexcept {
  return {UnbiasedAoe{c}, SrivastavaPower{-c}, Reddy{c}, SahaiTransformed{c},
          SinghRatioProduct{0.5 * (c + 1.0)}};
}

double minimal_mse1(const SummaryStats& st, const SamplingDesign& d) noexcept {
  return d.fpc_rate * st.var_y * (1.0 - st.r * st.r);
}

} // namespace rpr
