// Command-line front end: forward solves, sweeps, bound-line tables and
// ensemble reports for the EIT size-estimates laboratory.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eit/bounds.hpp"
#include "eit/config.hpp"
#include "eit/errors.hpp"
#include "eit/experiments.hpp"
#include "eit/forward.hpp"
#include "eit/records.hpp"
#include "eit/surface_spectrum.hpp"

namespace {

bool log_enabled() {
  const char* v = std::getenv("EIT_LOG");
  return v != nullptr && v[0] != '\0' && std::string(v) != "0";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_solve(const std::string& config_path) {
  const eit::ExperimentConfig cfg = eit::load_config(config_path);
  const eit::StructuredMesh mesh = cfg.make_mesh();
  eit::ForwardContext ctx(mesh);

  eit::SolveRecord rec;
  rec.test_id = cfg.test_id;
  rec.model = cfg.model;
  rec.dim = mesh.dim;
  rec.n_e = mesh.n_e;

  std::optional<eit::InclusionMask> inclusion;
  if (cfg.inclusion_elements) {
    std::vector<std::size_t> ids;
    for (const auto& e : *cfg.inclusion_elements) {
      if (static_cast<int>(e.size()) != mesh.dim)
        throw eit::ConfigError("inclusion element index dimension mismatch");
      eit::MultiIndex idx{0, 0, 0};
      for (int a = 0; a < mesh.dim; ++a) idx[a] = e[a];
      if (!mesh.element_in_grid(idx)) throw eit::ConfigError("inclusion element outside grid");
      ids.push_back(mesh.element_id(idx));
    }
    inclusion = eit::make_inclusion(mesh, std::move(ids), *cfg.k_single);
  }

  if (cfg.model == "neumann") {
    const eit::NeumannSpec spec = cfg.make_neumann();
    if (inclusion) {
      eit::RunPairOptions opts;
      opts.test_id = cfg.test_id;
      rec = eit::run_pair(ctx, spec, *inclusion, opts);
    } else {
      const eit::ForwardSolve& hom = ctx.homogeneous(spec);
      rec.W0 = rec.W = hom.power;
      rec.gap = 0.0;
    }
  } else {
    const eit::ElectrodeLayout layout = cfg.make_layout(mesh);
    if (inclusion) {
      eit::RunPairOptions opts;
      opts.test_id = cfg.test_id;
      rec = eit::run_pair_cem(ctx, layout, *inclusion, opts);
    } else {
      const eit::ForwardSolve& hom = ctx.homogeneous_cem(layout);
      rec.W0 = rec.W = hom.power;
      rec.gap = 0.0;
    }
  }
  std::printf("%s\n", eit::record_to_json(rec).c_str());
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              std::uint64_t seed_override, bool has_seed, int workers) {
  eit::ExperimentConfig cfg = eit::load_config(config_path);
  eit::SweepPlan plan = cfg.make_plan();
  if (has_seed) plan.seed = seed_override;
  if (workers > 0) plan.workers = workers;
  const std::string out = out_override.empty() ? cfg.output_path : out_override;
  if (out.empty()) throw eit::ConfigError("sweep needs an output path (--out or config)");

  if (log_enabled()) std::fprintf(stderr, "sweep: running plan \"%s\"\n", plan.test_id.c_str());
  const std::vector<eit::SolveRecord> records = eit::run_sweep(plan);
  eit::write_csv(out, records);
  if (log_enabled())
    std::fprintf(stderr, "sweep: wrote %zu records to %s\n", records.size(), out.c_str());
  return 0;
}

void print_line(const char* scenario, const eit::BoundsLine& line, double endpoints_gap) {
  std::printf(
      "{\"scenario\": \"%s\", \"k\": %s, \"lower_coef\": %s, \"upper_coef\": %s, "
      "\"exponent\": %s}\n",
      scenario, fmt(line.k).c_str(), fmt(line.lower_coef).c_str(), fmt(line.upper_coef).c_str(),
      fmt(line.exponent).c_str());
  if (endpoints_gap > 0.0) {
    // gnuplot-ready segments: gap on x, volume fraction on y, blocks
    // separated by blank lines
    std::printf("# lower bound line\n0 0\n%s %s\n\n# upper bound line\n0 0\n%s %s\n",
                fmt(endpoints_gap).c_str(), fmt(line.lower_coef * endpoints_gap).c_str(),
                fmt(endpoints_gap).c_str(),
                fmt(line.upper_coef * std::pow(endpoints_gap, line.exponent)).c_str());
  }
}

int cmd_lines(double k, const std::string& scenario, int n, double zeta, double side_l,
              double endpoints_gap) {
  if (scenario == "uniform") {
    print_line("uniform", eit::theoretical_line_uniform(k), endpoints_gap);
  } else if (scenario == "cosine") {
    print_line("cosine", eit::theoretical_line_cosine(k, n), endpoints_gap);
  } else if (scenario == "cem") {
    print_line("cem", eit::theoretical_line_cem_uniform(k, side_l, zeta * side_l), endpoints_gap);
  } else {
    throw eit::ConfigError("unknown scenario \"" + scenario + "\"");
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& csv_paths, double k, bool has_k) {
  std::printf("[\n");
  bool first = true;
  for (const std::string& path : csv_paths) {
    std::vector<eit::SolveRecord> records = eit::read_csv(path);
    std::vector<eit::SolveRecord> usable;
    for (const auto& r : records)
      if (r.status == "ok" && (!has_k || r.k == k)) usable.push_back(r);
    if (usable.empty()) throw eit::ConfigError("no usable records in " + path);
    const double k_used = has_k ? k : usable.front().k;
    for (const auto& r : usable)
      if (r.k != k_used)
        throw eit::ConfigError("mixed contrasts in " + path + "; select one with --k");
    const eit::EmpiricalConstants ec = eit::empirical_constants(usable, k_used);
    const eit::BoundsLine line = eit::empirical_line(ec);
    std::string fit_json = "null";
    try {
      const eit::PowerLawFit fit = eit::powerlaw_fit(usable);
      fit_json = "{\"C\": " + fmt(fit.C) + ", \"exponent\": " + fmt(fit.exponent) + "}";
    } catch (const eit::ConfigError&) {
      // fewer than 3 distinct gaps: fit omitted
    }
    if (!first) std::printf(",\n");
    first = false;
    std::printf(
        "  {\"file\": \"%s\", \"k\": %s, \"samples\": %zu, \"C1_emp\": %s, \"C2_emp\": %s,\n"
        "   \"lower_coef\": %s, \"upper_coef\": %s, \"powerlaw\": %s}",
        path.c_str(), fmt(k_used).c_str(), ec.samples, fmt(ec.C1).c_str(), fmt(ec.C2).c_str(),
        fmt(line.lower_coef).c_str(), fmt(line.upper_coef).c_str(), fit_json.c_str());
  }
  std::printf("\n]\n");
  return 0;
}

int cmd_freq(const std::string& config_path) {
  const eit::ExperimentConfig cfg = eit::load_config(config_path);
  if (cfg.model != "neumann")
    throw eit::ConfigError("frequency needs a Neumann excitation (boundary current density)");
  const eit::StructuredMesh mesh = cfg.make_mesh();
  const double F = eit::frequency(mesh, cfg.make_neumann());
  std::printf("{\"F\": %s}\n", fmt(F).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eitlab: forward solves and size-estimate bounds for EIT"};
  app.require_subcommand(1);

  std::string config_path, out_path, scenario = "uniform";
  std::vector<std::string> csv_paths;
  double k = 10.0, zeta = 0.2, side_l = 1.0;
  int n = 1, workers = 0;
  std::uint64_t seed = 0;

  CLI::App* solve = app.add_subcommand("solve", "single forward pair, JSON record on stdout");
  solve->add_option("--config", config_path, "config JSON path")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "batch sweep writing a records CSV");
  sweep->add_option("--config", config_path, "config JSON path")->required();
  sweep->add_option("--out", out_path, "output CSV path (overrides config)");
  CLI::Option* seed_opt = sweep->add_option("--seed", seed, "RNG seed override");
  sweep->add_option("--workers", workers, "worker threads (default: cores)");

  CLI::App* lines = app.add_subcommand("lines", "theoretical bound-line coefficients");
  lines->add_option("--k", k, "conductivity contrast")->required();
  lines->add_option("--scenario", scenario, "uniform | cosine | cem");
  lines->add_option("--n", n, "cosine order (scenario cosine)");
  lines->add_option("--zeta", zeta, "z / l (scenario cem)");
  lines->add_option("--side-l", side_l, "domain side length");
  double endpoints_gap = 0.0;
  lines->add_option("--endpoints", endpoints_gap,
                    "also print gnuplot-ready line segments up to this gap");

  CLI::App* report = app.add_subcommand("report", "empirical constants and power-law fit");
  CLI::Option* k_opt = report->add_option("--k", k, "restrict to one contrast value");
  report->add_option("csv", csv_paths, "records CSV paths")->required();

  CLI::App* freq = app.add_subcommand("freq", "frequency F[phi] of the configured excitation");
  freq->add_option("--config", config_path, "config JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(config_path);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_path, seed, seed_opt->count() > 0, workers);
    if (lines->parsed()) return cmd_lines(k, scenario, n, zeta, side_l, endpoints_gap);
    if (report->parsed()) return cmd_report(csv_paths, k, k_opt->count() > 0);
    if (freq->parsed()) return cmd_freq(config_path);
  } catch (const eit::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const eit::SolverError& e) {
    std::fprintf(stderr, "solver error: %s (residual %.3e)\n", e.what(), e.residual);
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
