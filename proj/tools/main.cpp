// phiproj command-line front end.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "manifest.hpp"
#include "phiproj/errors.hpp"
#include "report_json.hpp"

namespace {

using namespace phiproj::cli;

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError(path + ": cannot write output");
  out << text;
}

void write_json(const nlohmann::json& j, const std::string& path) { write_text(dump(j) + "\n", path); }

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? RunConfig{} : load_config(path);
}

std::vector<double> linspace(double from, double to, int points) {
  std::vector<double> grid;
  if (points == 1) return {from};
  for (int k = 0; k < points; ++k) grid.push_back(from + (to - from) * k / (points - 1));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("phiproj"));
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();

  CLI::App app{"Divergence projections under linear moment constraints"};
  app.require_subcommand(1);

  std::string data, config, output, manifest;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  unsigned jobs = 1;

  auto* project = app.add_subcommand("project", "Project the reference measure onto the constraint set");
  project->add_option("data", data, "CSV with optional id and weight columns");
  project->add_option("-c,--config", config, "JSON run configuration");
  project->add_flag("--oracle", oracle, "Cross-check with the brute-force primal oracle");
  project->add_option("--seed", seed, "Seed for the randomized diagnostics");
  project->add_option("-o,--output", output, "Write the report here instead of stdout");
  project->add_option("--manifest", manifest, "JSON list of {data, config, output} jobs");
  project->add_option("-j,--jobs", jobs, "Worker threads for --manifest")->check(CLI::PositiveNumber);

  std::vector<double> targets;
  auto* el = app.add_subcommand("el", "Empirical-likelihood weights for target means");
  el->add_option("sample", data, "CSV of numeric sample columns")->required();
  el->add_option("-t,--target", targets, "Target mean, one per column in order")->required();
  el->add_option("-c,--config", config, "JSON run configuration (tol, max_iter, seed)");
  el->add_option("--seed", seed, "Seed for the randomized diagnostics");
  el->add_option("-o,--output", output, "Write the report here instead of stdout");

  std::string q_path;
  auto* div = app.add_subcommand("divergence", "Divergence between two weighted tables");
  div->add_option("P", data, "Reference measure CSV (id, weight)")->required();
  div->add_option("Q", q_path, "Second measure CSV (id, weight)")->required();
  div->add_option("-c,--config", config, "JSON run configuration (divergence)");
  div->add_option("-o,--output", output, "Write the result here instead of stdout");

  double t_from = -2.0, t_to = 2.0;
  int t_points = 41;
  std::vector<double> t_values;
  auto* conj = app.add_subcommand("conjugate", "Tabulate the convex conjugate");
  conj->add_option("-c,--config", config, "JSON run configuration (divergence)");
  conj->add_option("--from", t_from, "First grid point");
  conj->add_option("--to", t_to, "Last grid point");
  conj->add_option("--points", t_points, "Number of grid points")->check(CLI::PositiveNumber);
  conj->add_option("--t", t_values, "Explicit grid points (overrides --from/--to/--points)");
  conj->add_option("-o,--output", output, "Write the table here instead of stdout");

  bool allow_rank_deficient = false;
  auto* diag = app.add_subcommand("diagnose", "Existence and qualification diagnostics");
  diag->add_option("data", data, "CSV with optional id and weight columns")->required();
  diag->add_option("-c,--config", config, "JSON run configuration");
  diag->add_option("--seed", seed, "Seed for the randomized diagnostics");
  diag->add_flag("--allow-rank-deficient", allow_rank_deficient,
                 "Classify linearly dependent constraints instead of rejecting them");
  diag->add_option("-o,--output", output, "Write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  Overrides overrides;
  if (oracle) overrides.oracle = true;
  overrides.seed = seed;

  try {
    if (project->parsed()) {
      if (!manifest.empty()) {
        if (!data.empty()) throw InputError("project: give either a data file or --manifest");
        const auto outcome = run_manifest(load_manifest(manifest), jobs, overrides);
        write_json(outcome.summary, output);
        return outcome.exit_code;
      }
      if (data.empty()) throw InputError("project: a data file or --manifest is required");
      auto cfg = config_or_default(config);
      overrides.apply(cfg);
      const auto result = cmd_project(read_csv_file(data), cfg);
      write_json(result.report, output);
      return result.exit_code;
    }
    if (el->parsed()) {
      auto cfg = config_or_default(config);
      overrides.apply(cfg);
      const auto result = cmd_el(read_csv_file(data), targets, cfg);
      write_json(result.report, output);
      return result.exit_code;
    }
    if (div->parsed()) {
      const auto result = cmd_divergence(read_csv_file(data), read_csv_file(q_path),
                                         config_or_default(config));
      write_json(result.report, output);
      return result.exit_code;
    }
    if (conj->parsed()) {
      const auto grid = t_values.empty() ? linspace(t_from, t_to, t_points) : t_values;
      write_text(cmd_conjugate(config_or_default(config), grid), output);
      return kExitConverged;
    }
    if (diag->parsed()) {
      auto cfg = config_or_default(config);
      overrides.apply(cfg);
      const auto result = cmd_diagnose(read_csv_file(data), cfg, allow_rank_deficient);
      write_json(result.report, output);
      return result.exit_code;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    if (const auto* rd = dynamic_cast<const phiproj::RankDeficient*>(&e)) {
      std::string k;
      for (double x : rd->kernel()) k += (k.empty() ? "" : ", ") + std::to_string(x);
      spdlog::error("kernel witness: lambda = [{}] has lambda^T g(x_j) = 0 on every atom", k);
    }
    try {
      write_json(error_json(e), output);
    } catch (const std::exception&) {
    }
    return kExitInputError;
  }
  return kExitInputError;
}
