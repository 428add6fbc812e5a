#include "rpr/estimators.hpp"

#include "rpr/error.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace rpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Evaluation ok(double v) { return {v, false, 0.0}; }
Evaluation singular(double denominator) { return {kNaN, true, denominator}; }

// The forms below are algebraic rearrangements of the textbook expressions
// in terms of u = xbar/X, chosen so that u == 1 returns ybar bit-exactly.
struct Evaluator {
  const SampleSummary& s;

  double u() const { return s.xbar / s.Xbar; }

  Evaluation operator()(SampleMean) const { return ok(s.ybar); }

  Evaluation operator()(Ratio) const {
    if (s.xbar == 0.0) return singular(s.xbar);
    return ok(s.ybar * (s.Xbar / s.xbar));
  }

  Evaluation operator()(Product) const { return ok(s.ybar * u()); }

  Evaluation operator()(const RatioProductRatio& p) const {
    const double up = (1.0 - p.beta) * s.xbar + p.beta * s.Xbar;
    const double down = p.beta * s.xbar + (1.0 - p.beta) * s.Xbar;
    if (down == 0.0) return singular(down);
    if (up == 0.0) return singular(up);
    const double ratio = up / down;
    const double inverse = down / up;
    return ok(s.ybar * (inverse + p.alpha * (ratio - inverse)));
  }

  Evaluation operator()(const UnbiasedAoe& a) const {
    const double c = a.c;
    const double t = u() - 1.0;
    const double k = 2.0 * c * c - c - 1.0;
    const double d = 4.0 * (1.0 + t) - k * t * t;
    // 4 X xbar - k (X - xbar)^2 = X^2 * d
    if (d == 0.0) return singular(d * s.Xbar * s.Xbar);
    return ok(s.ybar * (1.0 + 4.0 * c * t * ((c - 1.0) * t - 1.0) / d));
  }

  Evaluation operator()(const SrivastavaPower& p) const {
    const double ux = u();
    if (ux == 0.0 && p.k < 0.0) return singular(ux);
    const double v = s.ybar * std::pow(ux, p.k);
    if (!std::isfinite(v)) return singular(ux);
    return ok(v);
  }

  Evaluation operator()(const Reddy& p) const {
    const double down = s.Xbar + p.k * (s.xbar - s.Xbar);
    if (down == 0.0) return singular(down);
    return ok(s.ybar * (s.Xbar / down));
  }

  Evaluation operator()(const SahaiTransformed& p) const {
    const double ux = u();
    if (ux == 0.0 && p.k < 0.0) return singular(ux);
    const double v = s.ybar * (2.0 - std::pow(ux, p.k));
    if (!std::isfinite(v)) return singular(ux);
    return ok(v);
  }

  Evaluation operator()(const SinghRatioProduct& p) const {
    const double ux = u();
    if (ux == 0.0) return singular(s.xbar);
    return ok(s.ybar * (ux + p.k * (1.0 / ux - ux)));
  }
};

// Shortest decimal form that round-trips, so tokens stay readable.
std::string format_number(double v) {
  std::string text;
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    text = os.str();
    if (std::stod(text) == v) break;
  }
  return text;
}

double parse_number(std::string_view text, std::string_view token) {
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw Error(ErrorKind::InvalidInput,
                "bad numeric parameter in estimator token '" + std::string(token) + "'");
  return v;
}

[[noreturn]] void unknown_token(std::string_view token) {
  std::string msg = "unknown estimator token '" + std::string(token) + "'; valid tokens:";
  for (const auto& form : estimator_token_forms()) msg += " " + form;
  throw Error(ErrorKind::InvalidInput, msg);
}

} // namespace

bool parameters_finite(const EstimatorSpec& spec) noexcept {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RatioProductRatio>)
          return std::isfinite(p.alpha) && std::isfinite(p.beta);
        else if constexpr (std::is_same_v<T, UnbiasedAoe>)
          return std::isfinite(p.c);
        else if constexpr (requires { p.k; })
          return std::isfinite(p.k);
        else
          return true;
      },
      spec);
}

Evaluation evaluate(const EstimatorSpec& spec, const SampleSummary& s) noexcept {
  return std::visit(Evaluator{s}, spec);
}

double estimate(const EstimatorSpec& spec, const SampleSummary& s) {
  if (!parameters_finite(spec))
    throw Error(ErrorKind::InvalidInput, "estimator parameters must be finite");
  if (!std::isfinite(s.ybar) || !std::isfinite(s.xbar) || !std::isfinite(s.Xbar) || s.Xbar == 0.0)
    throw Error(ErrorKind::InvalidInput, "sample summary must be finite with Xbar != 0");
  const Evaluation e = evaluate(spec, s);
  if (e.singular) throw SingularDenominatorError(e.denominator);
  return e.value;
}

std::pair<double, double> symmetry_partner(double alpha, double beta) noexcept {
  return {1.0 - alpha, 1.0 - beta};
}

const std::vector<std::string>& estimator_token_forms() {
  static const std::vector<std::string> forms = {
      "mean", "ratio", "product", "rpr:<alpha>,<beta>", "aoe:<c>",
      "srivastava:<k>", "reddy:<k>", "sahai:<k>", "singh:<k>"};
  return forms;
}

std::string to_token(const EstimatorSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SampleMean>) return "mean";
        else if constexpr (std::is_same_v<T, Ratio>) return "ratio";
        else if constexpr (std::is_same_v<T, Product>) return "product";
        else if constexpr (std::is_same_v<T, RatioProductRatio>)
          return "rpr:" + format_number(p.alpha) + "," + format_number(p.beta);
        else if constexpr (std::is_same_v<T, UnbiasedAoe>) return "aoe:" + format_number(p.c);
        else if constexpr (std::is_same_v<T, SrivastavaPower>)
          return "srivastava:" + format_number(p.k);
        else if constexpr (std::is_same_v<T, Reddy>) return "reddy:" + format_number(p.k);
        else if constexpr (std::is_same_v<T, SahaiTransformed>) return "sahai:" + format_number(p.k);
        else return "singh:" + format_number(p.k);
      },
      spec);
}

EstimatorSpec parse_estimator(std::string_view token) {
  if (token == "mean") return SampleMean{};
  if (token == "ratio") return Ratio{};
  if (token == "product") return Product{};

  const auto colon = token.find(':');
  if (colon == std::string_view::npos) unknown_token(token);
  const std::string_view name = token.substr(0, colon);
  const std::string_view args = token.substr(colon + 1);

  if (name == "rpr") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos)
      throw Error(ErrorKind::InvalidInput, "rpr needs two parameters: rpr:<alpha>,<beta>");
    return RatioProductRatio{parse_number(args.substr(0, comma), token),
                             parse_number(args.substr(comma + 1), token)};
  }
  if (name == "aoe") return UnbiasedAoe{parse_number(args, token)};
  if (name == "srivastava") return SrivastavaPower{parse_number(args, token)};
  if (name == "reddy") return Reddy{parse_number(args, token)};
  if (name == "sahai") return SahaiTransformed{parse_number(args, token)};
  if (name == "singh") return SinghRatioProduct{parse_number(args, token)};
  unknown_token(token);
}

} // namespace rpr
