#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "phiproj/dual_solver.hpp"
#include "phiproj/primal_oracle.hpp"

namespace {

using namespace phiproj;

// Uniform midpoint grid on [0, 1] with a single mean constraint E[x] = 1/4.
MomentProblem grid_problem(int n, const DivergenceFamily& fam) {
  std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
  Eigen::MatrixXd G(n, 1);
  for (int j = 0; j < n; ++j) G(j, 0) = (j + 0.5) / n - 0.25;
  return build_problem(ProbabilityMeasure::from_weights(w, Normalization::renormalize), G, fam);
}

MomentProblem random_problem(std::mt19937_64& rng, int n, int l, const DivergenceFamily& fam) {
  std::uniform_real_distribution<double> u(0.2, 1.0), witness(0.3, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (auto& x : w) x = u(rng);
  auto P = ProbabilityMeasure::from_weights(w, Normalization::renormalize);
  Eigen::VectorXd q(n);
  for (int j = 0; j < n; ++j) q(j) = witness(rng);
  Eigen::Map<const Eigen::VectorXd> p(P.weights().data(), n);
  q /= q.dot(p);
  Eigen::MatrixXd G(n, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < n; ++j) G(j, i) = normal(rng);
    G.col(i).array() -= G.col(i).dot(q.cwiseProduct(p));
  }
  return build_problem(std::move(P), std::move(G), fam);
}

void BM_GridChiSquare(benchmark::State& state) {
  const auto problem = grid_problem(static_cast<int>(state.range(0)),
                                    make_family(2.0, DomainMode::full_line));
  for (auto _ : state) {
    auto sol = solve_dual(problem);
    benchmark::DoNotOptimize(sol.lambda.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GridChiSquare)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_GridKL(benchmark::State& state) {
  const auto problem = grid_problem(static_cast<int>(state.range(0)), make_family(1.0));
  for (auto _ : state) {
    auto rep = recover_primal(problem, solve_dual(problem));
    benchmark::DoNotOptimize(rep.primal_value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GridKL)->RangeMultiplier(4)->Range(16, 16384)->Complexity();

void BM_RandomInstance(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto problem = random_problem(rng, 50, static_cast<int>(state.range(0)),
                                      make_family(static_cast<double>(state.range(1)) / 2.0));
  for (auto _ : state) {
    auto sol = solve_dual(problem);
    benchmark::DoNotOptimize(sol.dual_value);
  }
}
BENCHMARK(BM_RandomInstance)->ArgsProduct({{1, 3}, {-2, 0, 1, 2, 4}});

void BM_Oracle(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const int dim = static_cast<int>(state.range(0));
  const auto problem = random_problem(rng, 2 + dim, 1, make_family(1.0));
  for (auto _ : state) {
    auto res = oracle_solve(problem);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_Oracle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
