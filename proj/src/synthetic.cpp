#include "rpr/synthetic.hpp"

#include "rpr/error.hpp"
#include "rpr/normal.hpp"
#include "rpr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rpr {

namespace {

constexpr int kMaxAttempts = 64;
constexpr double kMaxLatentCorrelation = 0.999;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Centers v and scales it to unit variance (N - 1 divisor). Returns false
// for a constant column.
bool standardize(std::vector<double>& v) {
  double mean = 0.0;
  for (double e : v) mean += e;
  mean /= static_cast<double>(v.size());
  for (double& e : v) e -= mean;
  const double sd = std::sqrt(dot(v, v) / static_cast<double>(v.size() - 1));
  if (!(sd > 0.0)) return false;
  for (double& e : v) e /= sd;
  return true;
}

double latent_correlation(double r, double sigma_x, double sigma_y) {
  const double lognormal_scale =
      std::sqrt(std::expm1(sigma_x * sigma_x) * std::expm1(sigma_y * sigma_y));
  const double arg = 1.0 + r * lognormal_scale;
  if (!(arg > 0.0)) return -kMaxLatentCorrelation;
  return std::clamp(std::log(arg) / (sigma_x * sigma_y), -kMaxLatentCorrelation,
                    kMaxLatentCorrelation);
}

} // namespace

Population generate_population(const MomentTargets& t, std::uint64_t seed) {
  if (t.N < 3) throw Error(ErrorKind::InvalidInput, "N must be at least 3");
  if (!(t.mean_y > 0.0) || !(t.mean_x > 0.0) || !std::isfinite(t.mean_y) ||
      !std::isfinite(t.mean_x))
    throw Error(ErrorKind::InvalidInput, "target means must be positive and finite");
  if (!(t.cv_y > 0.0) || !(t.cv_x > 0.0) || !std::isfinite(t.cv_y) || !std::isfinite(t.cv_x))
    throw Error(ErrorKind::InvalidInput, "target coefficients of variation must be positive");
  if (!(std::abs(t.r) < 1.0)) throw Error(ErrorKind::InvalidInput, "|r| must be below 1");

  const double sigma_x = std::sqrt(std::log1p(t.cv_x * t.cv_x));
  const double sigma_y = std::sqrt(std::log1p(t.cv_y * t.cv_y));
  const double rho = latent_correlation(t.r, sigma_x, sigma_y);
  const double rho_c = std::sqrt(1.0 - rho * rho);
  const double r_c = std::sqrt(1.0 - t.r * t.r);
  const double sd_x = t.cv_x * t.mean_x;
  const double sd_y = t.cv_y * t.mean_y;

  std::vector<double> zx(t.N), zy(t.N), x(t.N), y(t.N);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
    for (std::size_t i = 0; i < t.N; ++i) {
      const double g1 = normal_quantile(rng.uniform_open());
      const double g2 = rho * g1 + rho_c * normal_quantile(rng.uniform_open());
      zx[i] = std::exp(sigma_x * g1);
      zy[i] = std::exp(sigma_y * g2);
    }
    if (!standardize(zx) || !standardize(zy)) continue;

    // Remove the zx component from zy, then mix back exactly r of it.
    const double proj = dot(zy, zx) / dot(zx, zx);
    for (std::size_t i = 0; i < t.N; ++i) zy[i] -= proj * zx[i];
    if (!standardize(zy)) continue;

    bool positive = true;
    for (std::size_t i = 0; i < t.N; ++i) {
      x[i] = t.mean_x + sd_x * zx[i];
      y[i] = t.mean_y + sd_y * (t.r * zx[i] + r_c * zy[i]);
      positive = positive && x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) &&
                 std::isfinite(y[i]);
    }
    if (positive) return Population(y, x);
  }
  throw Error(ErrorKind::InfeasibleTargets,
              "no strictly positive population found for these targets after " +
                  std::to_string(kMaxAttempts) + " draws");
}

} // namespace rpr
