#include "rpr/sampling.hpp"

#include "rpr/error.hpp"
#include "rpr/normal.hpp"
#include "rpr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rpr {

double z_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw Error(ErrorKind::OutOfRange, "confidence must lie strictly between 0 and 1");
  // Work with the small tail probability to avoid cancellation in 1 - p.
  return -normal_quantile(0.5 * (1.0 - confidence));
}

SamplePlan plan_sample_size(double sigma2, double d, double confidence, std::size_t N) {
  if (!(sigma2 > 0.0) || std::isinf(sigma2))
    throw Error(ErrorKind::InvalidInput, "sigma2 must be positive and finite");
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidInput, "margin of error must be positive");
  if (N < 1) throw Error(ErrorKind::InvalidInput, "population size must be at least 1");

  SamplePlan plan;
  plan.d = d;
  plan.confidence = confidence;
  plan.z = z_quantile(confidence);
  plan.n0_exact = plan.z * plan.z * sigma2 / (d * d);
  if (!(plan.n0_exact < 1e15))
    throw Error(ErrorKind::InvalidInput, "required sample size is too large to represent");
  plan.n0 = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(plan.n0_exact)));

  // ceil(n0 N / (n0 + N)) in exact integer arithmetic.
  __extension__ typedef unsigned __int128 wide;
  const wide num = static_cast<wide>(plan.n0) * N;
  const wide den = static_cast<wide>(plan.n0) + N;
  plan.n = static_cast<std::size_t>((num + den - 1) / den);
  return plan;
}

double ci_half_width(double sd_y, std::size_t n, std::size_t N, double confidence) {
  if (n < 1 || n >= N)
    throw Error(ErrorKind::InvalidDesign,
                "need 1 <= n < N, got n=" + std::to_string(n) + ", N=" + std::to_string(N));
  if (!(sd_y >= 0.0)) throw Error(ErrorKind::InvalidInput, "S_Y must be nonnegative");
  const double z = z_quantile(confidence);
  const double fpc = std::sqrt(static_cast<double>(N - n) / static_cast<double>(N - 1));
  return z * std::sqrt(sd_y * sd_y / static_cast<double>(n)) * fpc;
}

ConfidenceInterval confidence_interval(double point, double sd_y, std::size_t n, std::size_t N,
                                       double confidence) {
  const double hw = ci_half_width(sd_y, n, N, confidence);
  return {point - hw, point + hw, hw};
}

SrsworSampler::SrsworSampler(std::size_t pop_size) : scratch_(pop_size) {}

void SrsworSampler::draw(std::size_t n, std::uint64_t seed, std::uint64_t stream,
                         std::vector<std::size_t>& out) {
  const std::size_t N = scratch_.size();
  if (n < 1 || n > N)
    throw Error(ErrorKind::InvalidDesign,
                "need 1 <= n <= N, got n=" + std::to_string(n) + ", N=" + std::to_string(N));
  std::iota(scratch_.begin(), scratch_.end(), std::size_t{0});
  CounterRng rng(seed, stream);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(N - i));
    std::swap(scratch_[i], scratch_[j]);
  }
  out.assign(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(out.begin(), out.end());
}

std::vector<std::size_t> srswor(std::size_t pop_size, std::size_t n, std::uint64_t seed,
                                std::uint64_t stream) {
  SrsworSampler sampler(pop_size);
  std::vector<std::size_t> out;
  sampler.draw(n, seed, stream, out);
  return out;
}

} // namespace rpr
