#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "phiproj/errors.hpp"
#include "phiproj/measures.hpp"
#include "phiproj/primal_oracle.hpp"
#include "report_json.hpp"

namespace phiproj::cli {

int exit_code_for(SolveStatus status) {
  return status == SolveStatus::converged ? kExitConverged : kExitNotConverged;
}

void Overrides::apply(RunConfig& cfg) const {
  if (oracle) cfg.oracle = *oracle;
  if (seed) cfg.seed = *seed;
}

namespace {

Eigen::MatrixXd centred_columns(const DataTable& table, const Targets& targets) {
  Eigen::MatrixXd G = table.values;
  if (!targets.by_position.empty()) {
    if (targets.by_position.size() != table.columns.size()) {
      throw InputError("config targets: " + std::to_string(targets.by_position.size()) +
                       " values for " + std::to_string(table.columns.size()) + " data columns");
    }
    for (std::size_t i = 0; i < targets.by_position.size(); ++i) {
      G.col(static_cast<Eigen::Index>(i)).array() -= targets.by_position[i];
    }
  }
  for (const auto& [name, m] : targets.by_name) {
    std::size_t i = 0;
    while (i < table.columns.size() && table.columns[i] != name) ++i;
    if (i == table.columns.size()) {
      throw InputError("config targets: no data column named '" + name + "'");
    }
    G.col(static_cast<Eigen::Index>(i)).array() -= m;
  }
  return G;
}

std::vector<Atom> atoms_of(const DataTable& table) {
  std::vector<Atom> atoms;
  atoms.reserve(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto row = table.values.row(static_cast<Eigen::Index>(r));
    atoms.push_back({table.ids[r], std::vector<double>(row.begin(), row.end())});
  }
  return atoms;
}

nlohmann::json base_report(const DualSolution& sol,
                           const std::optional<ProjectionReport>& rep,
                           const DiagnosticsReport& diag) {
  nlohmann::json j;
  j["status"] = std::string(to_string(sol.status));
  j["lambda"] = vector_json(sol.lambda);
  j["dual_value"] = number_json(sol.dual_value);
  if (rep) {
    j["primal_value"] = number_json(rep->primal_value);
    j["gap"] = number_json(rep->gap);
    j["q_star"] = vector_json(rep->q_star);
  } else {
    j["primal_value"] = nullptr;
    j["gap"] = nullptr;
    j["q_star"] = nullptr;
  }
  j["diagnostics"] = diagnostics_json(diag);
  j["iterations"] = sol.iterations;
  return j;
}

struct Solved {
  DualSolution solution;
  std::optional<ProjectionReport> projection;
  DiagnosticsReport diagnostics;
};

Solved solve_and_diagnose(const MomentProblem& problem, const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Solved out;
  out.solution = solve_dual(problem, cfg.solve_options());
  spdlog::info("solve: status={} iterations={} grad_norm={:.3e}", to_string(out.solution.status),
               out.solution.iterations, out.solution.grad_norm);
  if (out.solution.status == SolveStatus::converged) {
    out.projection = recover_primal(problem, out.solution);
    out.diagnostics = existence_report(problem, rng, out.projection->q_star);
  } else {
    out.diagnostics = existence_report(problem, rng);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

MomentProblem problem_from_table(const DataTable& table, const RunConfig& cfg,
                                 const BuildOptions& build) {
  const Eigen::MatrixXd G_all = centred_columns(table, cfg.targets);
  const auto atoms_all = atoms_of(table);

  std::vector<Atom> atoms;
  std::vector<double> weights;
  std::vector<Eigen::Index> kept;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const double w = table.weights ? (*table.weights)[r] : 1.0 / static_cast<double>(table.rows());
    if (w == 0.0) continue;
    atoms.push_back(atoms_all[r]);
    weights.push_back(w);
    kept.push_back(static_cast<Eigen::Index>(r));
  }
  if (kept.size() != table.rows()) {
    spdlog::info("dropped {} zero-weight rows", table.rows() - kept.size());
  }
  const auto norm = (cfg.renormalize || !table.weights) ? Normalization::renormalize
                                                        : Normalization::strict;
  ProbabilityMeasure P(std::move(atoms), std::move(weights), norm);
  Eigen::MatrixXd G(static_cast<Eigen::Index>(kept.size()), G_all.cols());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    G.row(static_cast<Eigen::Index>(r)) = G_all.row(kept[r]);
  }
  return build_problem(std::move(P), std::move(G), cfg.family(), build);
}

CommandResult cmd_project(const DataTable& table, const RunConfig& cfg) {
  const auto problem = problem_from_table(table, cfg);
  spdlog::info("project: n={} l={} family={}", problem.atom_count(), problem.constraint_count(),
               problem.family().name());
  const auto solved = solve_and_diagnose(problem, cfg);
  CommandResult out;
  out.report = base_report(solved.solution, solved.projection, solved.diagnostics);
  out.exit_code = exit_code_for(solved.solution.status);

  if (cfg.oracle) {
    const std::size_t null_dim = problem.atom_count() - problem.dual_dimension();
    OracleOptions opts;
    opts.resolution = cfg.oracle_resolution;
    if (null_dim > opts.max_dimension) {
      out.report["oracle"] = {{"skipped", "null-space dimension " + std::to_string(null_dim) +
                                              " exceeds " +
                                              std::to_string(opts.max_dimension)}};
    } else {
      const auto res = oracle_solve(problem, opts);
      const double primal = solved.projection ? solved.projection->primal_value
                                              : std::numeric_limits<double>::quiet_NaN();
      out.report["oracle"] = oracle_json(res, primal);
    }
  }
  return out;
}

CommandResult cmd_el(const DataTable& sample, const std::vector<double>& targets,
                     const RunConfig& cfg) {
  if (sample.weights) throw InputError("el: the sample must not carry a weight column");
  if (targets.size() != sample.columns.size()) {
    throw InputError("el: " + std::to_string(targets.size()) + " targets for " +
                     std::to_string(sample.columns.size()) + " sample columns");
  }
  if (cfg.divergence_given && (cfg.gamma != 0.0 || !cfg.nonnegative)) {
    spdlog::warn("el: divergence in config ignored, empirical likelihood uses KL_m");
  }
  RunConfig el_cfg = cfg;
  el_cfg.gamma = 0.0;
  el_cfg.nonnegative = true;
  el_cfg.targets = Targets{targets, {}};
  el_cfg.oracle = false;

  const auto problem = problem_from_table(sample, el_cfg);
  const auto solved = solve_and_diagnose(problem, el_cfg);
  CommandResult out;
  out.report = base_report(solved.solution, solved.projection, solved.diagnostics);
  out.exit_code = exit_code_for(solved.solution.status);
  if (solved.projection) {
    out.report["weights"] =
        vector_json(solved.projection->q_star.cwiseProduct(problem.weights()));
  } else {
    out.report["weights"] = nullptr;
  }
  return out;
}

CommandResult cmd_divergence(const DataTable& P_table, const DataTable& Q_table,
                             const RunConfig& cfg) {
  if (!P_table.weights) throw InputError("divergence: P needs a weight column");
  if (!Q_table.weights) throw InputError("divergence: Q needs a weight column");
  const ProbabilityMeasure P(atoms_of(P_table), *P_table.weights,
                             cfg.renormalize ? Normalization::renormalize : Normalization::strict);
  const DiscreteSignedMeasure Q(atoms_of(Q_table), *Q_table.weights);
  const auto fam = cfg.family();
  const auto dec = density(Q, P);
  CommandResult out;
  out.report = {{"family", fam.name()},
                {"divergence", number_json(divergence(fam, Q, P))},
                {"divergence_extended", number_json(divergence_extended(fam, Q, P))},
                {"absolutely_continuous", dec.absolutely_continuous()},
                {"singular_pos", number_json(dec.singular_pos)},
                {"singular_neg", number_json(dec.singular_neg)}};
  return out;
}

std::string cmd_conjugate(const RunConfig& cfg, const std::vector<double>& grid) {
  const auto fam = cfg.family();
  std::ostringstream os;
  os << "t,conj,conj_prime,conj_second\n";
  for (double t : grid) {
    os << format_double(t) << ',' << format_double(fam.conj(t)) << ',';
    if (t > fam.a_conj() && t < fam.b_conj()) {
      os << format_double(fam.conj_prime(t)) << ',' << format_double(fam.conj_second(t));
    } else {
      os << ',';
    }
    os << '\n';
  }
  return os.str();
}

CommandResult cmd_diagnose(const DataTable& table, const RunConfig& cfg,
                           bool allow_rank_deficient) {
  BuildOptions build;
  build.require_full_rank = !allow_rank_deficient;
  const auto problem = problem_from_table(table, cfg, build);
  std::mt19937_64 rng(cfg.seed);
  const auto diag = existence_report(problem, rng);
  CommandResult out;
  out.report = {{"rank", problem.rank()},
                {"full_rank", problem.full_rank()},
                {"diagnostics", diagnostics_json(diag)}};
  out.exit_code = diag.cq.status == CqStatus::fails_provably ? kExitInfeasible : kExitConverged;
  return out;
}

nlohmann::json error_json(const std::exception& e) {
  nlohmann::json j{{"error", e.what()}};
  if (const auto* rd = dynamic_cast<const RankDeficient*>(&e)) {
    auto k = nlohmann::json::array();
    for (double x : rd->kernel()) k.push_back(number_json(x));
    j["kernel"] = std::move(k);
  }
  return j;
}

}  // namespace phiproj::cli
