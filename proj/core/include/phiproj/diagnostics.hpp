#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/divergence_family.hpp"
#include "phiproj/moment_problem.hpp"

namespace phiproj {

// Family-level flags.

/// Superlinear growth phi(x)/|x| -> inf: b_conj = inf and, when
/// a_phi = -inf, a_conj = -inf.
bool coercivity(const DivergenceFamily& family);
/// phi' blows up at every finite endpoint of dom phi.
bool essential_smoothness(const DivergenceFamily& family);
bool strict_convexity(const DivergenceFamily& family);
/// phi(c x) <= c1 phi(x) + c2 |x| + c3 for c near 1. Holds for every power
/// divergence; the constants are not computed.
bool condition_c0(const DivergenceFamily& family);

enum class CqStatus { holds, fails_provably, inconclusive };
std::string_view to_string(CqStatus status);

struct CqOptions {
  double margin = 1e-9;  ///< strictness width for lower < q < upper
  int max_draws = 500;
  /// Clip level used by the randomized search, relative to the box.
  double search_margin = 1e-3;
};

struct CqResult {
  CqStatus status = CqStatus::inconclusive;
  std::optional<Eigen::VectorXd> witness;  ///< feasible density, set iff holds
  int draws = 0;                           ///< randomized draws consumed
};

/// Looks for a feasible density q with lower + margin < q_j < upper - margin:
///  1. affine system infeasible -> fails_provably;
///  2. the chi-square projection of P is strictly inside -> holds;
///  3. otherwise up to max_draws randomized null-space perturbations
///     alternated with clipping and affine re-projection; success -> holds,
///     else inconclusive.
CqResult interior_feasibility(const MomentProblem& problem, double lower, double upper,
                              std::mt19937_64& rng, const CqOptions& options = {});

/// Constraint qualification: a feasible density strictly inside dom phi.
CqResult cq_check(const MomentProblem& problem, std::mt19937_64& rng,
                  const CqOptions& options = {});

/// Relative P-weighted least-squares residual of regressing phi'(q*) on
/// [1 | G], restricted to atoms where q* lies strictly inside dom phi.
/// Normalized by max(||phi'(q*)||_P, 1). Throws BoundaryError when no atom
/// survives the restriction.
double characterization_residual(const MomentProblem& problem, const Eigen::VectorXd& q_star);

struct SupportCheck {
  bool full_support = false;  ///< min_j q*_j > 0
  bool lemma_applies = false; ///< C.0, a_phi = 0, phi'(0) = -inf and an interior witness
  bool inconsistent = false;  ///< lemma applies yet q* has a zero atom
};

SupportCheck support_check(const MomentProblem& problem, const Eigen::VectorXd& q_star,
                           const CqResult& cq);

struct ConditionFlag {
  std::string label;
  bool holds = false;
  std::string note;
};

struct DiagnosticsReport {
  std::string family;
  bool coercive = false;
  bool essentially_smooth = false;
  bool strictly_convex = false;
  bool condition_c0 = false;
  CqResult cq;
  /// Existence of a feasible density strictly positive on supp P.
  CqResult positive_witness;
  std::optional<double> characterization_residual;
  std::optional<SupportCheck> support;
  /// C.1 through C.7 side by side; no necessity is claimed.
  std::vector<ConditionFlag> conditions;
  bool predicts_primal_existence = false;
  bool predicts_primal_uniqueness = false;
  bool predicts_dual_attainment = false;
  bool predicts_dual_uniqueness = false;
  std::vector<std::string> notes;
};

/// Aggregates the flags above. With `q_star`, also fills the
/// characterization residual and support check for that candidate.
DiagnosticsReport existence_report(const MomentProblem& problem, std::mt19937_64& rng,
                                   const std::optional<Eigen::VectorXd>& q_star = std::nullopt,
                                   const CqOptions& options = {});

}  // namespace phiproj
