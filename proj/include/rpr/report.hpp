#pragma once

// JSON and aligned-text renderings of library results. JSON key order and
// number formatting are fixed, so equal inputs give byte-identical output.

#include "rpr/population.hpp"
#include "rpr/sampling.hpp"
#include "rpr/simulation.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace rpr {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

Json to_json(const SummaryStats& st);
Json to_json(const SamplingDesign& d);
Json to_json(const SamplePlan& plan);

/// Deterministic simulation report: wall time and thread count are left out.
Json to_json(const SimResult& result);

std::string summary_text(const SummaryStats& st);
std::string plan_text(const SamplePlan& plan);

/// Two tables laid out like a printed comparison: coverage / bias side /
/// quartiles, then empirical MSE and relative efficiency, followed by the
/// ranking counts.
std::string simulation_text(const SimResult& result);

/// Per-replication dump with header `rep,estimator,estimate,covered`.
/// Singular draws are written with an empty estimate and covered = 0.
void write_estimates_csv(std::ostream& out, const SimResult& result);

/// Reads SummaryStats back from either to_json(SummaryStats) output or a
/// moments object {mean_y, mean_x, sd_y, sd_x, r}. Throws InvalidInput.
SummaryStats stats_from_json(const Json& j);

} // namespace rpr
