#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/moment_problem.hpp"

namespace phiproj {

/// Affine description of the feasible densities:
/// { q : sum_j P_j q_j g(x_j) = e_0 } = { base_point + basis * c }.
/// base_point is the P-weighted minimum-norm solution (the chi-square
/// projection of P) and basis is P-orthonormal: basis^T diag(P) basis = I.
struct FeasibleParametrization {
  Eigen::VectorXd base_point;
  Eigen::MatrixXd basis;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

/// P-weighted minimum-norm density satisfying the constraints, i.e. the
/// full-line chi-square projection of P. Throws InfeasibleAffineSystem when
/// the linear system has no solution.
Eigen::VectorXd minimum_norm_density(const MomentProblem& problem);

/// Throws InfeasibleAffineSystem when no density satisfies the constraints.
FeasibleParametrization parametrize_feasible(const MomentProblem& problem);

struct OracleOptions {
  std::size_t resolution = 401;  ///< grid points per null-space axis
  double radius = 10.0;          ///< box [-radius, radius]^dim
  int max_refine_passes = 2000;
  std::size_t max_dimension = 3;
};

struct OracleResult {
  double value = 0.0;       ///< minimal divergence found, +inf if none finite
  Eigen::VectorXd density;  ///< minimizing density over supp P
  Eigen::VectorXd coefficients;
  bool touches_box = false;  ///< minimizer on the box boundary
  std::vector<double> pass_values;  ///< best value after the grid and each refinement pass
};

/// Desk-scale brute-force primal minimizer: dense grid over the null-space
/// coefficients, then coordinate-wise golden-section refinement around the
/// best grid point. Null-space dimension above options.max_dimension is
/// rejected with InvalidOptions.
OracleResult oracle_solve(const MomentProblem& problem, const OracleOptions& options = {});

}  // namespace phiproj
