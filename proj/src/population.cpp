#include "rpr/population.hpp"

#include "rpr/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace rpr {

Population::Population(std::vector<double> y, std::vector<double> x)
    : y_(std::move(y)), x_(std::move(x)) {
  if (y_.size() != x_.size())
    throw Error(ErrorKind::InvalidInput, "y and x must have the same length");
  if (y_.size() < 2)
    throw Error(ErrorKind::InvalidInput, "a population needs at least 2 units");
  for (std::size_t i = 0; i < y_.size(); ++i) {
    if (!std::isfinite(y_[i]) || !std::isfinite(x_[i]))
      throw Error(ErrorKind::InvalidInput, "non-finite value at unit " + std::to_string(i));
  }
}

double SummaryStats::sd_y() const { return std::sqrt(var_y); }
double SummaryStats::sd_x() const { return std::sqrt(var_x); }

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

SummaryStats finish(double mean_y, double mean_x, double var_y, double var_x, double cov_xy,
                    double r) {
  if (mean_y == 0.0 || mean_x == 0.0)
    throw Error(ErrorKind::ZeroMean, "coefficient of variation undefined for a zero mean");
  if (!(var_y > 0.0) || !(var_x > 0.0))
    throw Error(ErrorKind::DegenerateVariance, "correlation undefined for a constant column");

  SummaryStats st;
  st.mean_y = mean_y;
  st.mean_x = mean_x;
  st.var_y = var_y;
  st.var_x = var_x;
  st.cov_xy = cov_xy;
  st.r = r;
  st.cv_y = std::sqrt(var_y) / mean_y;
  st.cv_x = std::sqrt(var_x) / mean_x;
  st.c = r * st.cv_y / st.cv_x;
  return st;
}

} // namespace

SummaryStats summarize(const Population& pop) {
  const auto y = pop.y();
  const auto x = pop.x();
  const double my = mean_of(y);
  const double mx = mean_of(x);

  double syy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dy = y[i] - my;
    const double dx = x[i] - mx;
    syy += dy * dy;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  const double denom = static_cast<double>(pop.size() - 1);
  double r = sxy / std::sqrt(syy * sxx);
  // |r| can exceed 1 by an ulp for perfectly collinear columns.
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return finish(my, mx, syy / denom, sxx / denom, sxy / denom, r);
}

SummaryStats stats_from_moments(double mean_y, double mean_x, double sd_y, double sd_x, double r) {
  if (!(std::abs(r) <= 1.0))
    throw Error(ErrorKind::InvalidInput, "correlation must lie in [-1, 1]");
  if (!(sd_y >= 0.0) || !(sd_x >= 0.0))
    throw Error(ErrorKind::InvalidInput, "standard deviations must be nonnegative");
  return finish(mean_y, mean_x, sd_y * sd_y, sd_x * sd_x, r * sd_x * sd_y, r);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ParseError(line, "cannot parse '" + std::string(cell) + "' as a number");
  if (!std::isfinite(value))
    throw ParseError(line, "non-finite value '" + std::string(cell) + "'");
  return value;
}

} // namespace

Population parse_population_csv(std::istream& in) {
  std::string raw;
  std::size_t line = 0;

  if (!std::getline(in, raw))
    throw ParseError(1, "empty input, expected header 'y,x'");
  ++line;
  std::string_view header = raw;
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (trim(header) != "y,x")
    throw ParseError(line, "header must be exactly 'y,x'");

  std::vector<double> y, x;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view row = trim(raw);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos)
      throw ParseError(line, "expected two comma-separated values");
    const std::string_view rest = row.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos)
      throw ParseError(line, "extra columns are not allowed");
    y.push_back(parse_cell(row.substr(0, comma), line));
    x.push_back(parse_cell(rest, line));
  }
  if (y.size() < 2)
    throw ParseError(line, "expected at least 2 data rows, found " + std::to_string(y.size()));
  return Population(std::move(y), std::move(x));
}

Population load_population_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::InvalidInput, "cannot open '" + path.string() + "'");
  return parse_population_csv(in);
}

void write_population_csv(std::ostream& out, const Population& pop) {
  const auto old_precision = out.precision(17);
  out << "y,x\n";
  for (std::size_t i = 0; i < pop.size(); ++i) out << pop.y()[i] << ',' << pop.x()[i] << '\n';
  out.precision(old_precision);
}

SamplingDesign make_design(std::size_t n, std::size_t N) {
  if (n < 1 || n >= N)
    throw Error(ErrorKind::InvalidDesign,
                "need 1 <= n < N, got n=" + std::to_string(n) + ", N=" + std::to_string(N));
  SamplingDesign d;
  d.n = n;
  d.N = N;
  d.f = static_cast<double>(n) / static_cast<double>(N);
  d.fpc_rate = (1.0 - d.f) / static_cast<double>(n);
  return d;
}

} // namespace rpr
