#include "cli.hpp"

#include "rpr/error.hpp"
#include "rpr/estimators.hpp"
#include "rpr/population.hpp"
#include "rpr/report.hpp"
#include "rpr/sampling.hpp"
#include "rpr/simulation.hpp"
#include "rpr/surface.hpp"
#include "rpr/synthetic.hpp"
#include "rpr/theory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rpr::cli {

namespace {

namespace fs = std::filesystem;

/// A result failed one of its own structural invariants.
class InvariantViolation : public std::logic_error {
  using std::logic_error::logic_error;
};

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorKind::InvalidInput, what);
}

SamplingDesign parse_design(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) input_error("--design expects 'n,N'");
  try {
    std::size_t used = 0;
    const auto n = std::stoull(text.substr(0, comma), &used);
    if (used != comma) input_error("--design expects 'n,N'");
    const std::string rest = text.substr(comma + 1);
    const auto N = std::stoull(rest, &used);
    if (used != rest.size()) input_error("--design expects 'n,N'");
    return make_design(n, N);
  } catch (const std::logic_error&) {
    input_error("--design expects two positive integers 'n,N'");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) input_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) input_error("failed writing '" + path.string() + "'");
}

void write_manifest(const fs::path& path, const std::string& command, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const Json& extra) {
  Json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = seed;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["timestamp"] = utc_timestamp();
  for (const auto& [key, value] : extra.items()) m[key] = value;
  write_file(path, m.dump(2) + "\n");
}

fs::path default_manifest(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

SummaryStats load_stats(const std::string& path) {
  if (fs::path(path).extension() == ".csv") return summarize(load_population_csv(path));
  std::ifstream in(path);
  if (!in) input_error("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    input_error("cannot parse '" + path + "' as JSON: " + e.what());
  }
  return stats_from_json(j);
}

void check_simulation_invariants(const SimResult& result) {
  for (const auto& r : result.reports) {
    if (r.valid_count + r.singular_count != result.metadata.reps)
      throw InvariantViolation("draw counts do not add up for " + r.label);
    if (r.valid_count == 0) continue;
    const double total = r.coverage + r.neg_bias_rate + r.pos_bias_rate;
    if (std::abs(total - 1.0) > 1e-12)
      throw InvariantViolation("coverage and bias rates do not sum to 1 for " + r.label);
    if (!(r.q1 <= r.median && r.median <= r.q3))
      throw InvariantViolation("quartiles out of order for " + r.label);
  }
  if (result.ranking.total() > result.metadata.reps)
    throw InvariantViolation("ranking table counts exceed the number of draws");
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
  std::string csv;
  std::string design;
  std::string format = "json";
};

void cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const Population pop = load_population_csv(o.csv);
  const SummaryStats st = summarize(pop);
  std::optional<SamplingDesign> design;
  if (!o.design.empty()) design = parse_design(o.design);
  if (design && design->N != pop.size())
    input_error("--design N does not match the population size");

  if (o.format == "text") {
    out << summary_text(st);
    if (design)
      out << "n = " << design->n << "  N = " << design->N << "  f = " << design->f
          << "  (1-f)/n = " << design->fpc_rate << '\n';
    return;
  }
  Json j = to_json(st);
  if (design) j["design"] = to_json(*design);
  out << j.dump(2) << '\n';
}

// ------------------------------------------------------------------- plan

struct PlanOptions {
  double sigma2 = 0.0;
  std::optional<double> margin;
  std::optional<double> margin_percent;
  std::optional<double> mean;
  double confidence = 0.90;
  std::size_t population_size = 0;
  std::string format = "json";
};

void cmd_plan(const PlanOptions& o, std::ostream& out) {
  double d = 0.0;
  if (o.margin) {
    d = *o.margin;
  } else if (o.margin_percent) {
    if (!o.mean) input_error("--margin-percent needs --mean");
    d = *o.margin_percent / 100.0 * std::abs(*o.mean);
  } else {
    input_error("one of --margin or --margin-percent is required");
  }
  const SamplePlan plan = plan_sample_size(o.sigma2, d, o.confidence, o.population_size);
  if (o.format == "text") out << plan_text(plan);
  else out << to_json(plan).dump(2) << '\n';
}

// ----------------------------------------------------------------- theory

struct TheoryOptions {
  std::string stats;
  std::optional<double> c;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string design;
  bool aoe = false;
  std::string branch = "minus";
  bool re = false;
};

void cmd_theory(const TheoryOptions& o, std::ostream& out) {
  std::optional<SummaryStats> st;
  if (!o.stats.empty()) st = load_stats(o.stats);
  if (st && o.c) st->c = *o.c;
  std::optional<double> c = o.c;
  if (!c && st) c = st->c;
  if (!c) input_error("theory needs --stats or --c");

  std::optional<SamplingDesign> design;
  if (!o.design.empty()) design = parse_design(o.design);

  Json j;
  if (st) j["stats"] = to_json(*st);
  j["c"] = *c;
  if (design) j["design"] = to_json(*design);

  if (o.alpha.has_value() != o.beta.has_value()) input_error("--alpha and --beta go together");
  if (o.alpha) {
    const double a = *o.alpha, b = *o.beta;
    Json p;
    p["alpha"] = a;
    p["beta"] = b;
    const auto [pa, pb] = symmetry_partner(a, b);
    p["symmetry_partner"] = {pa, pb};
    const auto [b1, b2] = biasfree_betas(a, *c);
    p["biasfree_betas"] = {b1, b2};
    if (st && design) {
      p["bias1"] = bias1_rpr(a, b, *st, *design);
      p["mse1"] = mse1_rpr(a, b, *st, *design);
      const auto g = mse1_grad(a, b, *st, *design);
      p["gradient"] = {g[0], g[1]};
    }
    p["dominates"] = {{"over_product", dominates(Dominance::OverProduct, a, b, *c)},
                      {"over_ratio", dominates(Dominance::OverRatio, a, b, *c)},
                      {"over_sample_mean", dominates(Dominance::OverSampleMean, a, b, *c)}};
    j["point"] = std::move(p);
  }

  if (o.aoe) {
    AoeBranch branch = AoeBranch::MinusMinus;
    if (o.branch == "plus") branch = AoeBranch::PlusPlus;
    else if (o.branch != "minus") input_error("--branch must be 'minus' or 'plus'");
    const AoeSolution sol = aoe_parameters(*c, branch);
    Json a;
    a["branch"] = branch == AoeBranch::MinusMinus ? "minus" : "plus";
    a["is_real"] = sol.is_real;
    if (sol.is_real) {
      a["alpha_star"] = sol.alpha_star;
      a["beta_star"] = sol.beta_star;
      a["constraint_residual"] =
          (1.0 - 2.0 * sol.alpha_star) * (1.0 - 2.0 * sol.beta_star) - *c;
      if (st) {
        const auto interval = dominance_alpha_interval(Dominance::OverRatio, sol.beta_star, *c);
        if (interval) a["over_ratio_alpha_interval"] = {interval->first, interval->second};
      }
      if (st && design) {
        a["bias1"] = bias1_rpr(sol.alpha_star, sol.beta_star, *st, *design);
        a["mse1"] = mse1_rpr(sol.alpha_star, sol.beta_star, *st, *design);
      }
    } else {
      a["alpha_star"] = nullptr;
      a["beta_star"] = nullptr;
    }
    j["aoe"] = std::move(a);
  }

  if (o.re) {
    if (!st) input_error("--re needs --stats");
    // The fpc factor cancels; any valid design gives the same ratios.
    const SamplingDesign unit = design.value_or(make_design(1, 2));
    const OptimalFamily fam = optimal_family(st->c);
    const auto re = [&](const EstimatorSpec& e) {
      return 100.0 * relative_efficiency(SampleMean{}, e, *st, unit);
    };
    Json r;
    r["unit"] = "percent of MSE(sample mean) / MSE1(estimator)";
    r["sample_mean"] = re(SampleMean{});
    r["ratio"] = re(Ratio{});
    r["product"] = re(Product{});
    r["unbiased_aoe"] = re(fam.unbiased_aoe);
    r["srivastava"] = re(fam.srivastava);
    r["reddy"] = re(fam.reddy);
    r["sahai"] = re(fam.sahai);
    r["singh"] = re(fam.singh);
    j["relative_efficiency"] = std::move(r);
  }
  out << j.dump(2) << '\n';
}

// --------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string population;
  std::size_t reps = 10'000;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double confidence = 0.90;
  std::vector<std::string> estimators;
  unsigned threads = 1;
  std::string output;
  std::string manifest;
  std::string estimates_csv;
  bool text = false;
};

void cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  SimConfig cfg;
  cfg.reps = o.reps;
  cfg.n = o.n;
  cfg.seed = o.seed;
  cfg.confidence = o.confidence;
  cfg.threads = o.threads;
  for (const auto& token : o.estimators) cfg.estimators.push_back(parse_estimator(token));

  const Population pop = load_population_csv(o.population);
  const SimResult result = run_simulation(pop, cfg);
  check_simulation_invariants(result);

  const fs::path manifest = o.manifest.empty() ? default_manifest(o.output) : fs::path(o.manifest);
  Json report = to_json(result);
  report["manifest"] = manifest.string();
  write_file(o.output, report.dump(2) + "\n");

  std::vector<std::string> outputs{o.output};
  if (!o.estimates_csv.empty()) {
    std::ostringstream csv;
    write_estimates_csv(csv, result);
    write_file(o.estimates_csv, csv.str());
    outputs.push_back(o.estimates_csv);
  }
  write_manifest(manifest, "simulate", o.seed, {o.population}, outputs,
                 Json{{"threads", result.metadata.threads},
                      {"wall_seconds", result.metadata.wall_seconds},
                      {"prng", result.metadata.prng},
                      {"reps", result.metadata.reps}});

  if (o.text) out << simulation_text(result);
}

// ---------------------------------------------------------------- surface

struct SurfaceOptions {
  std::string kind;
  std::string alpha = "-1:2:0.05";
  std::string beta = "-1:2:0.05";
  std::string c = "-1.5:1.5:0.1";
  std::string output;
};

void cmd_surface(const SurfaceOptions& o, std::ostream& out) {
  const SurfaceKind kind = parse_surface_kind(o.kind);
  const GridSpec grid{parse_grid_axis(o.alpha), parse_grid_axis(o.beta), parse_grid_axis(o.c)};
  const auto rows = surface_grid(kind, grid);
  if (o.output.empty()) {
    write_surface_csv(out, kind, rows);
    return;
  }
  std::ostringstream csv;
  write_surface_csv(csv, kind, rows);
  write_file(o.output, csv.str());
}

// --------------------------------------------------------------- generate

struct GenerateOptions {
  MomentTargets targets;
  std::uint64_t seed = 0;
  std::string output;
  std::string manifest;
};

void cmd_generate(const GenerateOptions& o, std::ostream& out) {
  const Population pop = generate_population(o.targets, o.seed);
  std::ostringstream csv;
  write_population_csv(csv, pop);
  write_file(o.output, csv.str());
  const fs::path manifest = o.manifest.empty() ? default_manifest(o.output) : fs::path(o.manifest);
  const MomentTargets& t = o.targets;
  write_manifest(manifest, "generate", o.seed, {}, {o.output},
                 Json{{"targets", {{"N", t.N},
                                   {"mean_y", t.mean_y},
                                   {"mean_x", t.mean_x},
                                   {"cv_y", t.cv_y},
                                   {"cv_x", t.cv_x},
                                   {"r", t.r}}}});
  out << summary_text(summarize(pop));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ratio-product-ratio estimation of a finite population mean"};
  app.name(args.empty() ? "rpr" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Summary statistics of a y,x population CSV");
  a->add_option("csv", analyze.csv, "Population CSV")->required();
  a->add_option("--design", analyze.design, "Append design constants for 'n,N'");
  a->add_option("--format", analyze.format)->check(CLI::IsMember({"json", "text"}));

  PlanOptions plan;
  auto* p = app.add_subcommand("plan", "Sample size for a margin of error");
  p->add_option("--sigma2", plan.sigma2, "Population variance S_Y^2")->required();
  p->add_option("--margin", plan.margin, "Margin of error d");
  p->add_option("--margin-percent", plan.margin_percent, "Margin as a percentage of --mean");
  p->add_option("--mean", plan.mean, "Population mean used with --margin-percent");
  p->add_option("--confidence", plan.confidence)->capture_default_str();
  p->add_option("--population-size", plan.population_size, "N")->required();
  p->add_option("--format", plan.format)->check(CLI::IsMember({"json", "text"}));

  TheoryOptions theory;
  auto* t = app.add_subcommand("theory", "First-order bias, MSE, optima and dominance");
  t->add_option("--stats", theory.stats, "Stats JSON or population CSV");
  t->add_option("--c", theory.c, "Override C");
  t->add_option("--alpha", theory.alpha);
  t->add_option("--beta", theory.beta);
  t->add_option("--design", theory.design, "Design 'n,N' for bias and MSE");
  t->add_flag("--aoe", theory.aoe, "Report unbiased optimal parameters");
  t->add_option("--branch", theory.branch, "minus or plus")->capture_default_str();
  t->add_flag("--re", theory.re, "Relative efficiencies against the sample mean");

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo comparison under SRSWOR");
  s->add_option("--population", sim.population, "Population CSV")->required();
  s->add_option("--reps", sim.reps)->capture_default_str();
  s->add_option("--n", sim.n, "Sample size")->required();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--confidence", sim.confidence)->capture_default_str();
  s->add_option("--estimators", sim.estimators, "Estimator tokens")->required()->expected(1, -1);
  s->add_option("--threads", sim.threads)->capture_default_str()->check(CLI::Range(1u, 1024u));
  s->add_option("--output", sim.output, "Report JSON path")->required();
  s->add_option("--manifest", sim.manifest, "Manifest path (default <output>.manifest.json)");
  s->add_option("--estimates-csv", sim.estimates_csv, "Per-replication estimates CSV");
  s->add_flag("--text", sim.text, "Print the human-readable tables");

  SurfaceOptions surf;
  auto* f = app.add_subcommand("surface", "Emit a parameter-space grid as CSV");
  f->add_option("--kind", surf.kind, "biasfree, aoe or region")->required();
  f->add_option("--alpha", surf.alpha, "lo:hi:step")->capture_default_str();
  f->add_option("--beta", surf.beta, "lo:hi:step")->capture_default_str();
  f->add_option("--c", surf.c, "lo:hi:step")->capture_default_str();
  f->add_option("--output", surf.output, "CSV path (default stdout)");

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Synthetic population with given moments");
  g->add_option("--N", gen.targets.N)->required();
  g->add_option("--mean-y", gen.targets.mean_y)->required();
  g->add_option("--mean-x", gen.targets.mean_x)->required();
  g->add_option("--cv-y", gen.targets.cv_y)->required();
  g->add_option("--cv-x", gen.targets.cv_x)->required();
  g->add_option("--r", gen.targets.r)->required();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--output", gen.output, "Population CSV path")->required();
  g->add_option("--manifest", gen.manifest, "Manifest path (default <output>.manifest.json)");

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*a) cmd_analyze(analyze, out);
    else if (*p) cmd_plan(plan, out);
    else if (*t) cmd_theory(theory, out);
    else if (*s) cmd_simulate(sim, out);
    else if (*f) cmd_surface(surf, out);
    else if (*g) cmd_generate(gen, out);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

} // namespace rpr::cli
