#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phiproj/divergence_family.hpp"
#include "phiproj/dual_solver.hpp"

namespace phiproj::cli {

/// Centering targets for raw data columns: either one per column in file
/// order, or keyed by column name (missing names mean "already centred").
struct Targets {
  std::vector<double> by_position;
  std::vector<std::pair<std::string, double>> by_name;
  bool empty() const noexcept { return by_position.empty() && by_name.empty(); }
};

struct RunConfig {
  double gamma = 1.0;
  bool nonnegative = true;
  bool divergence_given = false;  ///< set when the config names a divergence
  double tol = 1e-10;
  int max_iter = 200;
  bool oracle = false;
  std::size_t oracle_resolution = 401;  ///< grid points per null-space axis
  std::uint64_t seed = 0;
  bool renormalize = false;  ///< rescale the `weight` column to sum to one
  Targets targets;

  DivergenceFamily family() const;
  SolveOptions solve_options() const;
};

/// Unknown keys are rejected so that typos do not silently fall back to
/// defaults. `source` names the origin in error messages.
RunConfig parse_config(const nlohmann::json& j, const std::string& source);
RunConfig parse_config_text(const std::string& text, const std::string& source);
RunConfig load_config(const std::string& path);

}  // namespace phiproj::cli
