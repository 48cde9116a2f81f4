#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "phiproj/dual_solver.hpp"
#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"
#include "phiproj/primal_oracle.hpp"
#include "support/oracles.hpp"

namespace phiproj {
namespace {

const DivergenceFamily kKL = make_family(1.0);
const DivergenceFamily kChi2 = make_family(2.0, DomainMode::full_line);

TEST(ParametrizeFeasible, MassOnly) {
  const auto problem =
      build_problem(ProbabilityMeasure::uniform(5), Eigen::MatrixXd(5, 0), kKL);
  const auto par = parametrize_feasible(problem);
  EXPECT_EQ(par.dimension(), 4u);
  EXPECT_LE((par.base_point - Eigen::VectorXd::Ones(5)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ParametrizeFeasible, SingletonHasNoFreeDirections) {
  const auto par = parametrize_feasible(testing::singleton_problem(kKL));
  EXPECT_EQ(par.dimension(), 0u);
  EXPECT_NEAR(par.base_point(0), 1.5, 1e-14);
  EXPECT_NEAR(par.base_point(1), 0.5, 1e-14);
}

TEST(ParametrizeFeasible, ContradictoryConstraintsAreInfeasible) {
  // g_1 = 1 on every atom forces Q(X) = 0 against Q(X) = 1.
  const auto problem = build_problem(ProbabilityMeasure::uniform(4), Eigen::MatrixXd::Ones(4, 1),
                                     kKL, BuildOptions{1e-10, false});
  EXPECT_THROW(parametrize_feasible(problem), InfeasibleAffineSystem);
  EXPECT_THROW(oracle_solve(problem), InfeasibleAffineSystem);
}

TEST(ParametrizeFeasible, BaseAndBasisInvariants) {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 12, l = trial % 4;
    const auto inst = testing::random_instance(rng, n, l, kKL);
    const auto par = parametrize_feasible(inst.problem);
    ASSERT_EQ(par.dimension(), static_cast<std::size_t>(n - 1 - l));
    const auto& A = inst.problem.augmented();
    const auto& p = inst.problem.weights();
    const auto r = feasibility_residual(inst.problem,
                                        CandidateMeasure::from_density(inst.problem, par.base_point));
    EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-10);
    const Eigen::MatrixXd AtPB = A.transpose() * p.asDiagonal() * par.basis;
    EXPECT_LE(AtPB.cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd gram = par.basis.transpose() * p.asDiagonal() * par.basis;
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm(), 1e-10);
  }
}

TEST(OracleSolve, MassOnlyReturnsReference) {
  for (const auto& f : testing::standard_families()) {
    const auto problem = build_problem(ProbabilityMeasure::uniform(3), Eigen::MatrixXd(3, 0), f);
    const auto res = oracle_solve(problem);
    EXPECT_NEAR(res.value, 0.0, 1e-12);
    EXPECT_LE((res.density - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(OracleSolve, SingletonKullbackLeibler) {
  const auto res = oracle_solve(testing::singleton_problem(kKL));
  EXPECT_NEAR(res.value, 0.130812, 5e-7);
  EXPECT_EQ(res.coefficients.size(), 0);
}

TEST(OracleSolve, ThreePointChiSquareMatchesSolver) {
  Eigen::MatrixXd G(3, 1);
  G << -0.25, 0.25, 0.75;
  const auto problem = build_problem(ProbabilityMeasure::uniform(3), G, kChi2);
  const auto res = oracle_solve(problem);
  const auto sol = solve_dual(problem);
  ASSERT_EQ(sol.status, SolveStatus::converged);
  EXPECT_NEAR(res.value, recover_primal(problem, sol).primal_value, 1e-5);
}

TEST(OracleSolve, RejectsLargeNullSpace) {
  const auto problem = build_problem(ProbabilityMeasure::uniform(6), Eigen::MatrixXd(6, 0), kKL);
  EXPECT_THROW(oracle_solve(problem), InvalidOptions);
}

TEST(OracleSolve, InfiniteWhenNoGridPointIsInDomain) {
  // Every feasible density is forced negative somewhere; KL needs q >= 0.
  Eigen::MatrixXd G(3, 1);
  G << 1.0, 2.0, 3.0;
  const auto problem = build_problem(ProbabilityMeasure::uniform(3), G, kKL);
  const auto res = oracle_solve(problem);
  EXPECT_EQ(res.value, kInf);
}

TEST(OracleSolve, AgreesWithSolverAndRespectsWeakDuality) {
  std::mt19937_64 rng(223);
  for (const auto& f : testing::standard_families()) {
    SCOPED_TRACE(f.name());
    for (int trial = 0; trial < 6; ++trial) {
      const int l = 1 + trial % 2;
      const int n = l + 2 + trial % 2;  // null-space dimension 1 or 2
      const auto inst = testing::random_instance(rng, n, l, f);
      const auto res = oracle_solve(inst.problem);
      const auto sol = solve_dual(inst.problem);
      ASSERT_EQ(sol.status, SolveStatus::converged);
      const auto rep = recover_primal(inst.problem, sol);
      const double diff = res.value - rep.primal_value;
      EXPECT_GE(diff, -1e-5);
      EXPECT_LE(diff, 1e-3);
      EXPECT_GE(res.value, sol.dual_value - 1e-9);
      std::normal_distribution<double> normal(0.0, 0.2);
      for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd lambda(inst.problem.dual_dimension());
        for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = normal(rng);
        const double d = dual_objective(inst.problem, lambda);
        EXPECT_GE(res.value, d);
      }
    }
  }
}

TEST(OracleSolve, RefinementPassesNeverIncrease) {
  std::mt19937_64 rng(227);
  for (const auto& f : testing::standard_families()) {
    const auto inst = testing::random_instance(rng, 5, 2, f);
    OracleOptions opts;
    opts.resolution = 41;
    const auto res = oracle_solve(inst.problem, opts);
    ASSERT_GE(res.pass_values.size(), 2u);
    for (std::size_t k = 1; k < res.pass_values.size(); ++k) {
      EXPECT_LE(res.pass_values[k], res.pass_values[k - 1]);
    }
    EXPECT_EQ(res.value, res.pass_values.back());
  }
}

}  // namespace
}  // namespace phiproj
