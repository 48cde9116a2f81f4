#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csv_reader.hpp"
#include "phiproj/diagnostics.hpp"
#include "phiproj/dual_solver.hpp"
#include "phiproj/moment_problem.hpp"
#include "run_config.hpp"

namespace phiproj::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitConverged = 0,
  kExitInputError = 1,
  kExitNotConverged = 2,  ///< boundary, unbounded or iteration_limit
  kExitInfeasible = 3,    ///< constraint qualification fails provably
};

int exit_code_for(SolveStatus status);

struct CommandResult {
  nlohmann::json report;
  int exit_code = kExitConverged;
};

/// Flags that take precedence over the config file.
struct Overrides {
  std::optional<bool> oracle;
  std::optional<std::uint64_t> seed;
  void apply(RunConfig& cfg) const;
};

/// P from the `weight` column (uniform when absent; zero-weight rows are
/// dropped), G from the data columns centred by the config targets.
MomentProblem problem_from_table(const DataTable& table, const RunConfig& cfg,
                                 const BuildOptions& build = {});

/// Solve, recover, diagnose and optionally cross-check with the oracle.
/// Report keys: status, lambda, dual_value, primal_value, gap, q_star,
/// diagnostics, iterations and, with the oracle enabled, oracle.
/// primal_value, gap and q_star are null unless the solve converged.
CommandResult cmd_project(const DataTable& table, const RunConfig& cfg);

/// Empirical likelihood: uniform P over the sample rows, KL_m, g = x - m.
/// Adds "weights" (w_j = q*_j / n, null unless converged) to the report.
CommandResult cmd_el(const DataTable& sample, const std::vector<double>& targets,
                     const RunConfig& cfg);

/// P and Q tables carry `weight` columns and are matched by `id`.
CommandResult cmd_divergence(const DataTable& P, const DataTable& Q, const RunConfig& cfg);

/// CSV with columns t,conj,conj_prime,conj_second. Derivatives outside the
/// open domain of phi* are left empty.
std::string cmd_conjugate(const RunConfig& cfg, const std::vector<double>& grid);

/// Diagnostics only. Exit 3 when the constraint qualification fails
/// provably, which needs allow_rank_deficient for contradictory data.
CommandResult cmd_diagnose(const DataTable& table, const RunConfig& cfg,
                           bool allow_rank_deficient);

/// {"error": message} plus "kernel" for rank-deficient data.
nlohmann::json error_json(const std::exception& e);

}  // namespace phiproj::cli
