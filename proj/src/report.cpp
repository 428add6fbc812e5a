#include "rpr/report.hpp"

#include "rpr/error.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace rpr {

namespace {

// NaN and infinities become null.
Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double v) {
  if (std::isnan(v)) return "nan";
  return fixed(100.0 * v, 2) + "%";
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string ordering_label(const RankingTable& table, const std::vector<std::size_t>& order) {
  std::string s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) s += " < ";
    s += table.labels[order[i]];
  }
  return s;
}

double require_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorKind::InvalidInput, std::string("stats JSON is missing numeric '") + key + "'");
  return j.at(key).get<double>();
}

} // namespace

Json to_json(const SummaryStats& st) {
  Json j;
  j["mean_y"] = st.mean_y;
  j["mean_x"] = st.mean_x;
  j["var_y"] = st.var_y;
  j["var_x"] = st.var_x;
  j["sd_y"] = st.sd_y();
  j["sd_x"] = st.sd_x();
  j["cov_xy"] = st.cov_xy;
  j["r"] = st.r;
  j["cv_y"] = st.cv_y;
  j["cv_x"] = st.cv_x;
  j["c"] = st.c;
  return j;
}

Json to_json(const SamplingDesign& d) {
  return Json{{"n", d.n}, {"N", d.N}, {"f", d.f}, {"fpc_rate", d.fpc_rate}};
}

Json to_json(const SamplePlan& plan) {
  return Json{{"n0", plan.n0},       {"n", plan.n},
              {"n0_exact", plan.n0_exact}, {"d", plan.d},
              {"confidence", plan.confidence}, {"z", plan.z}};
}

Json to_json(const SimResult& result) {
  const SimMetadata& m = result.metadata;
  Json j;
  j["metadata"] = Json{{"version", kVersion},
                       {"seed", m.seed},
                       {"prng", m.prng},
                       {"reps", m.reps},
                       {"n", m.n},
                       {"N", m.N},
                       {"confidence", m.confidence},
                       {"population_mean", m.population_mean},
                       {"ci_half_width", m.ci_half_width}};

  Json reports = Json::array();
  for (const auto& r : result.reports) {
    reports.push_back(Json{{"estimator", r.label},
                           {"valid_count", r.valid_count},
                           {"singular_count", r.singular_count},
                           {"coverage", number(r.coverage)},
                           {"neg_bias_rate", number(r.neg_bias_rate)},
                           {"pos_bias_rate", number(r.pos_bias_rate)},
                           {"q1", number(r.q1)},
                           {"median", number(r.median)},
                           {"q3", number(r.q3)},
                           {"mean", number(r.mean)},
                           {"mse_empirical", number(r.mse_empirical)},
                           {"re_vs_sample_mean", number(r.re_vs_sample_mean)},
                           {"skewness", number(r.skewness)},
                           {"kurtosis", number(r.kurtosis)}});
  }
  j["estimators"] = std::move(reports);

  // Most frequent orderings first; equal counts keep the map's order.
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> rows(
      result.ranking.counts.begin(), result.ranking.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Json ranking = Json::array();
  for (const auto& [order, count] : rows) {
    Json labels = Json::array();
    for (std::size_t i : order) labels.push_back(result.ranking.labels[i]);
    ranking.push_back(Json{{"order", std::move(labels)}, {"count", count}});
  }
  j["ranking"] = Json{{"ranked_draws", result.ranking.total()}, {"orderings", std::move(ranking)}};
  return j;
}

std::string summary_text(const SummaryStats& st) {
  std::ostringstream os;
  os << "Ybar = " << fixed(st.mean_y, 4) << "  Xbar = " << fixed(st.mean_x, 4)
     << "  S_Y = " << fixed(st.sd_y(), 4) << "  S_X = " << fixed(st.sd_x(), 4) << '\n'
     << "r = " << fixed(st.r, 4) << "  C_Y = " << fixed(st.cv_y, 4)
     << "  C_X = " << fixed(st.cv_x, 4) << "  C = " << fixed(st.c, 4) << '\n';
  return os.str();
}

std::string plan_text(const SamplePlan& plan) {
  std::ostringstream os;
  os << "z = " << fixed(plan.z, 4) << "  d = " << fixed(plan.d, 4) << '\n'
     << "n0 = " << fixed(plan.n0_exact, 2) << " -> " << plan.n0 << '\n'
     << "n  = " << plan.n << '\n';
  return os.str();
}

std::string simulation_text(const SimResult& result) {
  std::size_t width = 9;
  for (const auto& r : result.reports) width = std::max(width, r.label.size());

  std::ostringstream os;
  os << "reps = " << result.metadata.reps << "  n = " << result.metadata.n
     << "  N = " << result.metadata.N << "  seed = " << result.metadata.seed
     << "  Ybar = " << fixed(result.metadata.population_mean, 4)
     << "  CI half-width = " << fixed(result.metadata.ci_half_width, 4) << "\n\n";

  os << pad_right("estimator", width) << " | " << pad("coverage", 9) << " | "
     << pad("neg.bias", 8) << pad("pos.bias", 9) << " | " << pad("lo.quart", 9)
     << pad("median", 9) << pad("up.quart", 9) << '\n';
  os << std::string(width + 61, '-') << '\n';
  for (const auto& r : result.reports) {
    os << pad_right(r.label, width) << " | " << pad(percent(r.coverage), 9) << " | "
       << pad(percent(r.neg_bias_rate), 8) << pad(percent(r.pos_bias_rate), 9) << " | "
       << pad(fixed(r.q1, 4), 9) << pad(fixed(r.median, 4), 9) << pad(fixed(r.q3, 4), 9)
       << '\n';
  }

  os << '\n'
     << pad_right("estimator", width) << " | " << pad("MSE", 10) << pad("RE", 10)
     << pad("skew", 9) << pad("kurt", 9) << pad("singular", 9) << '\n';
  os << std::string(width + 50, '-') << '\n';
  for (const auto& r : result.reports) {
    os << pad_right(r.label, width) << " | " << pad(fixed(r.mse_empirical, 6), 10)
       << pad(percent(r.re_vs_sample_mean), 10) << pad(fixed(r.skewness, 4), 9)
       << pad(fixed(r.kurtosis, 4), 9) << pad(std::to_string(r.singular_count), 9) << '\n';
  }

  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> rows(
      result.ranking.counts.begin(), result.ranking.counts.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  os << "\nposition by |estimate - Ybar| (ascending)\n";
  for (const auto& [order, count] : rows)
    os << pad(std::to_string(count), 8) << "  " << ordering_label(result.ranking, order) << '\n';
  return os.str();
}

void write_estimates_csv(std::ostream& out, const SimResult& result) {
  const std::size_t k = result.reports.size();
  const double Ybar = result.metadata.population_mean;
  const double hw = result.metadata.ci_half_width;
  const auto old_precision = out.precision(17);
  out << "rep,estimator,estimate,covered\n";
  for (std::size_t r = 0; r < result.metadata.reps; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = result.estimates[r * k + j];
      const std::string& label = result.reports[j].label;
      out << r << ',';
      if (label.find(',') != std::string::npos) out << '"' << label << '"';
      else out << label;
      out << ',';
      if (std::isnan(v)) {
        out << ",0\n";
        continue;
      }
      const bool covered = !(v + hw < Ybar) && !(v - hw > Ybar);
      out << v << ',' << (covered ? 1 : 0) << '\n';
    }
  }
  out.precision(old_precision);
}

SummaryStats stats_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "stats JSON must be an object");
  const double mean_y = require_number(j, "mean_y");
  const double mean_x = require_number(j, "mean_x");
  const double r = require_number(j, "r");
  double sd_y = 0.0, sd_x = 0.0;
  if (j.contains("sd_y") && j.contains("sd_x")) {
    sd_y = require_number(j, "sd_y");
    sd_x = require_number(j, "sd_x");
  } else {
    sd_y = std::sqrt(require_number(j, "var_y"));
    sd_x = std::sqrt(require_number(j, "var_x"));
  }
  return stats_from_moments(mean_y, mean_x, sd_y, sd_x, r);
}

} // namespace rpr
