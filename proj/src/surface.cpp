#include "rpr/surface.hpp"

#include "rpr/error.hpp"
#include "rpr/theory.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace rpr {

namespace {

// Guards the upper end of a grid against accumulated representation error.
constexpr double kGridSlack = 1e-9;
constexpr std::size_t kMaxPointsPerAxis = 1'000'000;

double parse_double(std::string_view text) {
  double v = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorKind::InvalidInput, "bad grid value '" + std::string(text) + "'");
  return v;
}

} // namespace

SurfaceKind parse_surface_kind(std::string_view name) {
  if (name == "biasfree") return SurfaceKind::BiasFree;
  if (name == "aoe") return SurfaceKind::Aoe;
  if (name == "region") return SurfaceKind::DominanceRegion;
  throw Error(ErrorKind::InvalidInput,
              "unknown surface kind '" + std::string(name) + "' (biasfree, aoe, region)");
}

std::size_t GridAxis::count() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step))
    throw Error(ErrorKind::InvalidInput, "grid bounds must be finite");
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidInput, "grid step must be positive");
  if (hi < lo) throw Error(ErrorKind::InvalidInput, "grid upper bound below lower bound");
  const double span = (hi - lo) / step;
  if (span >= static_cast<double>(kMaxPointsPerAxis))
    throw Error(ErrorKind::InvalidInput, "grid axis has too many points");
  return static_cast<std::size_t>(std::floor(span + kGridSlack)) + 1;
}

GridAxis parse_grid_axis(std::string_view text) {
  const auto first = text.find(':');
  if (first == std::string_view::npos) {
    const double v = parse_double(text);
    return {v, v, 1.0};
  }
  const auto second = text.find(':', first + 1);
  if (second == std::string_view::npos)
    throw Error(ErrorKind::InvalidInput, "grid axis must be 'lo:hi:step' or a single value");
  GridAxis axis{parse_double(text.substr(0, first)),
                parse_double(text.substr(first + 1, second - first - 1)),
                parse_double(text.substr(second + 1))};
  axis.count(); // validate
  return axis;
}

std::vector<SurfaceRow> surface_grid(SurfaceKind kind, const GridSpec& grid) {
  std::vector<SurfaceRow> rows;
  const std::size_t na = grid.alpha.count();
  const std::size_t nc = grid.c.count();

  switch (kind) {
  case SurfaceKind::BiasFree:
    rows.reserve(2 * na * nc);
    for (std::size_t ic = 0; ic < nc; ++ic) {
      const double c = grid.c.at(ic);
      for (std::size_t ia = 0; ia < na; ++ia) {
        const double alpha = grid.alpha.at(ia);
        const auto [plane, saddle] = biasfree_betas(alpha, c);
        rows.push_back({alpha, plane, c, 0});
        rows.push_back({alpha, saddle, c, 1});
      }
    }
    break;

  case SurfaceKind::Aoe:
    rows.reserve(na * nc);
    for (std::size_t ic = 0; ic < nc; ++ic) {
      const double c = grid.c.at(ic);
      for (std::size_t ia = 0; ia < na; ++ia) {
        const double alpha = grid.alpha.at(ia);
        const double a = 1.0 - 2.0 * alpha;
        if (std::abs(a) < 1e-12) continue;
        rows.push_back({alpha, 0.5 * (1.0 - c / a), c, std::nullopt});
      }
    }
    break;

  case SurfaceKind::DominanceRegion: {
    const std::size_t nb = grid.beta.count();
    rows.reserve(na * nb * nc);
    for (std::size_t ic = 0; ic < nc; ++ic) {
      const double c = grid.c.at(ic);
      for (std::size_t ib = 0; ib < nb; ++ib) {
        const double beta = grid.beta.at(ib);
        for (std::size_t ia = 0; ia < na; ++ia) {
          const double alpha = grid.alpha.at(ia);
          const bool inside = dominates(Dominance::OverProduct, alpha, beta, c) &&
                              dominates(Dominance::OverRatio, alpha, beta, c) &&
                              dominates(Dominance::OverSampleMean, alpha, beta, c);
          rows.push_back({alpha, beta, c, inside ? 1 : 0});
        }
      }
    }
    break;
  }
  }
  return rows;
}

void write_surface_csv(std::ostream& out, SurfaceKind kind, const std::vector<SurfaceRow>& rows) {
  const bool with_indicator = kind != SurfaceKind::Aoe;
  const auto old_precision = out.precision(12);
  out << (with_indicator ? "alpha,beta,c,indicator\n" : "alpha,beta,c\n");
  for (const auto& row : rows) {
    out << row.alpha << ',' << row.beta << ',' << row.c;
    if (with_indicator) out << ',' << row.indicator.value_or(0);
    out << '\n';
  }
  out.precision(old_precision);
}

} // namespace rpr
