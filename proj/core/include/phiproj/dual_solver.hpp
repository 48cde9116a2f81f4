#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "phiproj/divergence_family.hpp"
#include "phiproj/measures.hpp"
#include "phiproj/moment_problem.hpp"

namespace phiproj {

enum class SolveStatus { converged, boundary, unbounded, iteration_limit };
std::string_view to_string(SolveStatus status);

struct SolveOptions {
  double tolerance = 1e-10;  ///< on the max-norm of the dual gradient
  int max_iterations = 200;
  double fraction_to_boundary = 0.99;
  double armijo = 1e-4;
  int max_damping_attempts = 10;
  double unbounded_objective = 1e12;
  double unbounded_lambda = 1e8;
};

struct DualSolution {
  Eigen::VectorXd lambda;  ///< (lambda_0, lambda_1, ..., lambda_l)
  double dual_value = 0.0;
  SolveStatus status = SolveStatus::iteration_limit;
  double grad_norm = 0.0;
  int iterations = 0;
};

struct ProjectionReport {
  Eigen::VectorXd lambda;
  Eigen::VectorXd q_star;  ///< dQ*/dP on supp P
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  ///< primal_value - dual_value
  double characterization_residual = 0.0;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
};

/// lambda_0 - sum_j P_j phi*(lambda^T g(x_j)); -inf once any argument leaves dom phi*.
double dual_objective(const MomentProblem& problem, const Eigen::VectorXd& lambda);

/// Gradient and Hessian of the dual objective. Every lambda^T g(x_j) must
/// lie in the open domain of phi*, otherwise BoundaryError.
Eigen::VectorXd dual_gradient(const MomentProblem& problem, const Eigen::VectorXd& lambda);
Eigen::MatrixXd dual_hessian(const MomentProblem& problem, const Eigen::VectorXd& lambda);

/// Maximizes the dual from lambda = 0 with damped Newton steps, a
/// Levenberg fallback, Armijo backtracking and a fraction-to-boundary rule
/// that keeps every lambda^T g(x_j) inside dom phi*. Outcomes are reported
/// through `status`; only invalid options throw.
DualSolution solve_dual(const MomentProblem& problem, const SolveOptions& options = {});

/// dQ*/dP = (phi*)'(lambda^T g). Throws NotConverged unless the solution
/// converged.
ProjectionReport recover_primal(const MomentProblem& problem, const DualSolution& solution);

/// phi(Q, P) minus the dual objective at lambda; nonnegative up to rounding by
/// weak duality. Throws InfeasibleCandidate when Q violates the constraints
/// by more than feasibility_tolerance.
double duality_gap(const MomentProblem& problem, const Eigen::VectorXd& lambda,
                   const CandidateMeasure& Q, double feasibility_tolerance = 1e-8);

struct DualRepresentation {
  double value = 0.0;
  Eigen::VectorXd lambda;
  SolveStatus status = SolveStatus::iteration_limit;
  int iterations = 0;
};

/// sup over lambda of sum_j Q(x_j) lambda^T g(x_j) - sum_j P_j phi*(lambda^T g(x_j)).
/// Equals phi(Q, P) when phi'(dQ/dP) lies in span{1, g_1..g_l}; smaller
/// otherwise. Q must be absolutely continuous w.r.t. P with finite divergence.
DualRepresentation dual_representation(const DivergenceFamily& family,
                                       const DiscreteSignedMeasure& Q,
                                       const ProbabilityMeasure& P, const Eigen::MatrixXd& G,
                                       const SolveOptions& options = {});

}  // namespace phiproj
