#pragma once

// Test-only reference computations. Nothing here calls into the solver
// paths it is used to check.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phiproj/divergence_family.hpp"
#include "phiproj/measures.hpp"
#include "phiproj/moment_problem.hpp"

namespace phiproj::testing {

/// Plain bisection for an increasing function with f(lo) < 0 < f(hi).
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 400) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Solves phi'(x) = t by bisection using only phi itself: phi' is
/// approximated by a symmetric difference quotient, so this stays
/// independent of DivergenceFamily::phi_prime_inv.
inline double inverse_derivative_by_bisection(const DivergenceFamily& fam, double t) {
  auto slope = [&](double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (fam.phi(x + h) - fam.phi(x - h)) / (2.0 * h) - t;
  };
  double lo = std::isfinite(fam.a_phi()) ? fam.a_phi() + 1e-12 : -1e6;
  double hi = 1e6;
  return bisect(slope, lo, hi);
}

inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd central_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
    double h) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

/// Cramer's rule in long double for [a b; c d] x = [e; f].
inline std::pair<long double, long double> solve2x2(long double a, long double b, long double c,
                                                    long double d, long double e,
                                                    long double f) {
  const long double det = a * d - b * c;
  return {(e * d - b * f) / det, (a * f - e * c) / det};
}

/// Cell midpoints of n equal cells of [0, 1].
inline double example_grid_point(int j, int n) { return (j + 0.5) / n; }

/// Affine density c0 + c1 x satisfying mean-one and (x - 1/4)-moment zero
/// under the uniform measure on the n-point grid of [0, 1]. Exact grid
/// moments in long double.
inline std::pair<long double, long double> example_grid_constants(int n) {
  long double m1 = 0.0L, m2 = 0.0L;
  for (int j = 0; j < n; ++j) {
    const long double x = (static_cast<long double>(j) + 0.5L) / static_cast<long double>(n);
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  // c0 + c1 m1 = 1 ;  c0 (m1 - 1/4) + c1 (m2 - m1 / 4) = 0
  return solve2x2(1.0L, m1, m1 - 0.25L, m2 - m1 / 4.0L, 1.0L, 0.0L);
}

/// Uniform P on the n-point grid of [0, 1] with the single constraint x - 1/4.
inline MomentProblem example_grid_problem(int n, const DivergenceFamily& fam) {
  Eigen::MatrixXd G(n, 1);
  for (int j = 0; j < n; ++j) G(j, 0) = example_grid_point(j, n) - 0.25;
  return build_problem(ProbabilityMeasure::uniform(static_cast<std::size_t>(n)), G, fam);
}

/// P = (1/2, 1/2) on {0, 1}, g = x - 1/4: the only feasible density is (1.5, 0.5).
inline MomentProblem singleton_problem(const DivergenceFamily& fam) {
  Eigen::MatrixXd G(2, 1);
  G << -0.25, 0.75;
  return build_problem(ProbabilityMeasure::from_weights({0.5, 0.5}), G, fam);
}

struct RandomInstance {
  MomentProblem problem;
  Eigen::VectorXd witness;  ///< feasible density in [0.3, 3], built with the instance
};

/// Random P (weights bounded away from 0), Gaussian raw columns, centred so a
/// random positive density is feasible by construction.
inline RandomInstance random_instance(std::mt19937_64& rng, int n, int l,
                                      const DivergenceFamily& fam) {
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  std::uniform_real_distribution<double> dens(0.3, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> pw(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& w : pw) total += (w = unit(rng));
  for (auto& w : pw) w /= total;
  ProbabilityMeasure P = ProbabilityMeasure::from_weights(pw, Normalization::renormalize);

  Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(P.weights().data(), n);
  Eigen::VectorXd q(n);
  for (int j = 0; j < n; ++j) q(j) = dens(rng);
  q /= p.dot(q);

  Eigen::MatrixXd F(n, l);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < l; ++i) F(j, i) = normal(rng);
  for (int i = 0; i < l; ++i) {
    const double target = (p.cwiseProduct(q)).dot(F.col(i));
    F.col(i).array() -= target;
  }
  return {build_problem(std::move(P), std::move(F), fam), q};
}

/// Families exercised by the randomized suites: KL_m, chi2_m, Hellinger, KL,
/// chi2 on both domains.
inline std::vector<DivergenceFamily> standard_families() {
  return {make_family(-1.0), make_family(0.0), make_family(0.5), make_family(1.0),
          make_family(2.0), make_family(2.0, DomainMode::full_line)};
}

}  // namespace phiproj::testing
