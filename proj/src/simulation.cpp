#include "rpr/simulation.hpp"

#include "rpr/error.hpp"
#include "rpr/rng.hpp"
#include "rpr/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace rpr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate(const Population& pop, const SimConfig& cfg) {
  if (cfg.reps < 1) throw Error(ErrorKind::InvalidInput, "reps must be at least 1");
  if (cfg.n < 1 || cfg.n >= pop.size())
    throw Error(ErrorKind::InvalidDesign, "need 1 <= n < N, got n=" + std::to_string(cfg.n) +
                                              ", N=" + std::to_string(pop.size()));
  if (cfg.estimators.empty())
    throw Error(ErrorKind::InvalidInput, "at least one estimator is required");
  for (const auto& spec : cfg.estimators)
    if (!parameters_finite(spec))
      throw Error(ErrorKind::InvalidInput, "estimator parameters must be finite");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
    throw Error(ErrorKind::OutOfRange, "confidence must lie strictly between 0 and 1");
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

// Fills rows [begin, end) of the estimate matrix and the sample-mean column.
void run_block(const Population& pop, const SimConfig& cfg, double Xbar, std::size_t begin,
               std::size_t end, std::vector<double>& estimates, std::vector<double>& ybars) {
  const std::size_t k = cfg.estimators.size();
  SrsworSampler sampler(pop.size());
  std::vector<std::size_t> idx;
  const auto y = pop.y();
  const auto x = pop.x();
  for (std::size_t rep = begin; rep < end; ++rep) {
    sampler.draw(cfg.n, cfg.seed, rep, idx);
    double sy = 0.0, sx = 0.0;
    for (std::size_t i : idx) {
      sy += y[i];
      sx += x[i];
    }
    const SampleSummary s{sy / static_cast<double>(cfg.n), sx / static_cast<double>(cfg.n), Xbar};
    ybars[rep] = s.ybar;
    for (std::size_t j = 0; j < k; ++j) {
      const Evaluation e = evaluate(cfg.estimators[j], s);
      estimates[rep * k + j] = (e.singular || !std::isfinite(e.value)) ? kNaN : e.value;
    }
  }
}

struct Moments {
  double mean = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

Moments central_moments(const std::vector<double>& v) {
  Moments m;
  m.mean = mean_of(v);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double e : v) {
    const double d = e - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const auto len = static_cast<double>(v.size());
  m2 /= len;
  m3 /= len;
  m4 /= len;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.kurtosis = m4 / (m2 * m2);
  } else {
    m.skewness = kNaN;
    m.kurtosis = kNaN;
  }
  return m;
}

} // namespace

std::size_t RankingTable::total() const {
  std::size_t t = 0;
  for (const auto& [order, count] : counts) t += count;
  return t;
}

std::size_t RankingTable::first_place(std::size_t index) const {
  std::size_t t = 0;
  for (const auto& [order, count] : counts)
    if (!order.empty() && order.front() == index) t += count;
  return t;
}

SimResult run_simulation(const Population& pop, const SimConfig& cfg) {
  validate(pop, cfg);
  const auto started = std::chrono::steady_clock::now();

  const std::size_t k = cfg.estimators.size();
  const double Ybar = mean_of(pop.y());
  const double Xbar = mean_of(pop.x());
  double syy = 0.0;
  for (double v : pop.y()) syy += (v - Ybar) * (v - Ybar);
  const double sd_y = std::sqrt(syy / static_cast<double>(pop.size() - 1));
  const double hw = ci_half_width(sd_y, cfg.n, pop.size(), cfg.confidence);

  SimResult result;
  result.estimates.assign(cfg.reps * k, kNaN);
  std::vector<double> ybars(cfg.reps, kNaN);

  const unsigned threads =
      static_cast<unsigned>(std::clamp<std::size_t>(cfg.threads, 1, cfg.reps));
  if (threads == 1) {
    run_block(pop, cfg, Xbar, 0, cfg.reps, result.estimates, ybars);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (cfg.reps + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(cfg.reps, t * chunk);
      const std::size_t end = std::min(cfg.reps, begin + chunk);
      workers.emplace_back([&, begin, end] {
        run_block(pop, cfg, Xbar, begin, end, result.estimates, ybars);
      });
    }
    for (auto& w : workers) w.join();
  }

  // Aggregation runs sequentially in replication order so the output is
  // independent of the worker schedule.
  double mean_sse = 0.0;
  for (double v : ybars) mean_sse += (v - Ybar) * (v - Ybar);
  const double mean_mse = mean_sse / static_cast<double>(cfg.reps);

  result.reports.resize(k);
  std::vector<double> column;
  column.reserve(cfg.reps);
  for (std::size_t j = 0; j < k; ++j) {
    EstimatorReport& rep = result.reports[j];
    rep.label = to_token(cfg.estimators[j]);
    column.clear();
    std::size_t covered = 0, below = 0, above = 0;
    double sse = 0.0;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      const double v = result.estimates[r * k + j];
      if (std::isnan(v)) {
        ++rep.singular_count;
        continue;
      }
      column.push_back(v);
      sse += (v - Ybar) * (v - Ybar);
      if (v + hw < Ybar) ++below;
      else if (v - hw > Ybar) ++above;
      else ++covered;
    }
    rep.valid_count = column.size();
    if (column.empty()) {
      rep.coverage = rep.neg_bias_rate = rep.pos_bias_rate = kNaN;
      rep.q1 = rep.median = rep.q3 = rep.mean = kNaN;
      rep.mse_empirical = rep.re_vs_sample_mean = rep.skewness = rep.kurtosis = kNaN;
      continue;
    }
    const auto valid = static_cast<double>(column.size());
    rep.coverage = static_cast<double>(covered) / valid;
    rep.neg_bias_rate = static_cast<double>(below) / valid;
    rep.pos_bias_rate = static_cast<double>(above) / valid;
    rep.mse_empirical = sse / valid;
    rep.re_vs_sample_mean = rep.mse_empirical > 0.0 ? mean_mse / rep.mse_empirical : kNaN;
    const Moments m = central_moments(column);
    rep.mean = m.mean;
    rep.skewness = m.skewness;
    rep.kurtosis = m.kurtosis;
    const Quartiles q = quartiles(column);
    rep.q1 = q.q1;
    rep.median = q.median;
    rep.q3 = q.q3;
  }

  result.ranking.labels.reserve(k);
  for (const auto& r : result.reports) result.ranking.labels.push_back(r.label);
  std::vector<std::size_t> order(k);
  std::vector<double> deviation(k);
  for (std::size_t r = 0; r < cfg.reps; ++r) {
    bool ranked = true;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = result.estimates[r * k + j];
      if (std::isnan(v)) {
        ranked = false;
        break;
      }
      deviation[j] = std::abs(v - Ybar);
    }
    if (!ranked) continue;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return deviation[a] < deviation[b]; });
    ++result.ranking.counts[order];
  }

  SimMetadata& meta = result.metadata;
  meta.seed = cfg.seed;
  meta.prng = std::string(CounterRng::kName);
  meta.reps = cfg.reps;
  meta.n = cfg.n;
  meta.N = pop.size();
  meta.confidence = cfg.confidence;
  meta.population_mean = Ybar;
  meta.ci_half_width = hw;
  meta.threads = threads;
  meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

namespace {

// C(N, n), or limit + 1 as soon as it exceeds `limit`.
std::size_t bounded_binomial(std::size_t N, std::size_t n, std::size_t limit) {
  __extension__ typedef unsigned __int128 wide;
  n = std::min(n, N - n);
  wide value = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    // value * (N - n + i) / i stays integral at every step.
    value = value * static_cast<wide>(N - n + i) / i;
    if (value > limit) return limit + 1;
  }
  return static_cast<std::size_t>(value);
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
    else carry += (v - t) + sum;
    sum = t;
  }
  long double value() const { return sum + carry; }
};

} // namespace

ExactMoments exhaustive_oracle(const Population& pop, std::size_t n, const EstimatorSpec& spec) {
  const std::size_t N = pop.size();
  if (n < 1 || n > N)
    throw Error(ErrorKind::InvalidDesign, "need 1 <= n <= N for enumeration");
  const std::size_t total = bounded_binomial(N, n, kExhaustiveLimit);
  if (total > kExhaustiveLimit)
    throw Error(ErrorKind::TooLarge, "C(N, n) exceeds " + std::to_string(kExhaustiveLimit));

  CompensatedSum ysum, xsum;
  for (std::size_t i = 0; i < N; ++i) {
    ysum.add(pop.y()[i]);
    xsum.add(pop.x()[i]);
  }
  const long double Ybar = ysum.value() / static_cast<long double>(N);
  const double Xbar = static_cast<double>(xsum.value() / static_cast<long double>(N));

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CompensatedSum first, second;
  ExactMoments out;
  while (true) {
    CompensatedSum sy, sx;
    for (std::size_t i : idx) {
      sy.add(pop.y()[i]);
      sx.add(pop.x()[i]);
    }
    const SampleSummary s{static_cast<double>(sy.value() / static_cast<long double>(n)),
                          static_cast<double>(sx.value() / static_cast<long double>(n)), Xbar};
    const Evaluation e = evaluate(spec, s);
    if (e.singular) throw SingularDenominatorError(e.denominator);
    const long double dev = static_cast<long double>(e.value) - Ybar;
    first.add(dev);
    second.add(dev * dev);
    ++out.samples;

    // Next combination in lexicographic order.
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == N - n + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }

  const auto count = static_cast<long double>(out.samples);
  out.bias = static_cast<double>(first.value() / count);
  out.expectation = static_cast<double>(Ybar + first.value() / count);
  out.mse = static_cast<double>(second.value() / count);
  return out;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::Empty, "quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  const auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1); // 0-based
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

} // namespace rpr
