#include "phiproj/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <spdlog/spdlog.h>

#include "phiproj/diagnostics.hpp"
#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"

namespace phiproj {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::boundary: return "boundary";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

/// Concave objective  c^T lambda - sum_j p_j phi*(g_j^T lambda).
/// The dual problem uses c = e_0; the dual representation of a divergence
/// uses c = sum_j Q(x_j) g_j.
class ConcaveDual {
 public:
  ConcaveDual(const Eigen::VectorXd& p, const Eigen::MatrixXd& g, const DivergenceFamily& fam,
              Eigen::VectorXd linear)
      : p_(p), g_(g), fam_(fam), linear_(std::move(linear)) {}

  Eigen::Index dimension() const { return g_.cols(); }
  const DivergenceFamily& family() const { return fam_; }

  Eigen::VectorXd arguments(const Eigen::VectorXd& lambda) const { return g_ * lambda; }

  double value(const Eigen::VectorXd& lambda) const {
    const Eigen::VectorXd t = arguments(lambda);
    double s = 0.0;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      const double c = fam_.conj(t(j));
      if (c == kInf) return -kInf;
      s = ext_add(s, p_(j) * c);
    }
    return ext_add(linear_.dot(lambda), -s);
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& t) const {
    Eigen::VectorXd w(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) w(j) = p_(j) * fam_.conj_prime(t(j));
    return linear_ - g_.transpose() * w;
  }

  /// Hessian of the negated objective (positive semidefinite).
  Eigen::MatrixXd curvature(const Eigen::VectorXd& t) const {
    Eigen::VectorXd w(t.size());
    for (Eigen::Index j = 0; j < t.size(); ++j) w(j) = p_(j) * fam_.conj_second(t(j));
    return g_.transpose() * w.asDiagonal() * g_;
  }

  const Eigen::MatrixXd& design() const { return g_; }

 private:
  const Eigen::VectorXd& p_;
  const Eigen::MatrixXd& g_;
  const DivergenceFamily& fam_;
  Eigen::VectorXd linear_;
};

void validate(const SolveOptions& o) {
  if (!(o.tolerance > 0.0)) throw InvalidOptions("tolerance must be positive");
  if (o.max_iterations < 1) throw InvalidOptions("max_iterations must be at least 1");
  if (!(o.fraction_to_boundary > 0.0 && o.fraction_to_boundary < 1.0)) {
    throw InvalidOptions("fraction_to_boundary must lie in (0, 1)");
  }
  if (!(o.armijo > 0.0 && o.armijo < 0.5)) throw InvalidOptions("armijo must lie in (0, 1/2)");
  if (o.max_damping_attempts < 1) throw InvalidOptions("max_damping_attempts must be >= 1");
  if (!(o.unbounded_objective > 0.0) || !(o.unbounded_lambda > 0.0)) {
    throw InvalidOptions("unboundedness thresholds must be positive");
  }
}

/// Relative distance of the closest argument to a finite end of dom phi*.
bool touches_boundary(const DivergenceFamily& fam, const Eigen::VectorXd& t) {
  const double a = fam.a_conj();
  const double b = fam.b_conj();
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    if (std::isfinite(b) && b - t(j) <= 1e-12 * std::max(1.0, std::abs(b))) return true;
    if (std::isfinite(a) && t(j) - a <= 1e-12 * std::max(1.0, std::abs(a))) return true;
  }
  return false;
}

struct StepOutcome {
  bool accepted = false;
  bool capped = false;
  Eigen::VectorXd lambda;
  double value = 0.0;
};

DualSolution maximize(const ConcaveDual& dual, const SolveOptions& opt) {
  validate(opt);
  const auto& fam = dual.family();
  const Eigen::Index m = dual.dimension();

  DualSolution sol;
  sol.lambda = Eigen::VectorXd::Zero(m);
  double value = dual.value(sol.lambda);
  Eigen::VectorXd t = dual.arguments(sol.lambda);

  for (int iter = 0;; ++iter) {
    sol.iterations = iter;
    const Eigen::VectorXd grad = dual.gradient(t);
    sol.grad_norm = grad.cwiseAbs().maxCoeff();
    sol.dual_value = value;
    spdlog::debug("dual iter {:3d}  value {:.17g}  |grad| {:.3e}", iter, value, sol.grad_norm);

    if (sol.grad_norm <= opt.tolerance) {
      sol.status = SolveStatus::converged;
      return sol;
    }
    if (value > opt.unbounded_objective || sol.lambda.norm() > opt.unbounded_lambda) {
      sol.status = SolveStatus::unbounded;
      return sol;
    }
    if (touches_boundary(fam, t)) {
      sol.status = SolveStatus::boundary;
      return sol;
    }
    if (iter >= opt.max_iterations) {
      sol.status = SolveStatus::iteration_limit;
      return sol;
    }

    const Eigen::MatrixXd curv = dual.curvature(t);
    const double mu0 = 1e-8 * std::max(1.0, curv.diagonal().cwiseAbs().maxCoeff());
    double mu = 0.0;
    StepOutcome step;
    for (int attempt = 0; attempt < opt.max_damping_attempts && !step.accepted; ++attempt) {
      if (attempt > 0) mu = mu == 0.0 ? mu0 : 10.0 * mu;
      Eigen::MatrixXd damped = curv;
      damped.diagonal().array() += mu;
      Eigen::LLT<Eigen::MatrixXd> llt(damped);
      if (llt.info() != Eigen::Success) continue;
      const Eigen::VectorXd dir = llt.solve(grad);
      if (!dir.allFinite()) continue;
      const double slope = grad.dot(dir);
      if (!(slope > 0.0)) continue;

      // Fraction to boundary: each argument keeps at least (1 - fraction)
      // of its current distance to a finite end of dom phi*.
      const Eigen::VectorXd s = dual.design() * dir;
      double alpha = 1.0;
      step.capped = false;
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        double limit = kInf;
        if (s(j) > 0.0 && std::isfinite(fam.b_conj())) {
          limit = opt.fraction_to_boundary * (fam.b_conj() - t(j)) / s(j);
        } else if (s(j) < 0.0 && std::isfinite(fam.a_conj())) {
          limit = opt.fraction_to_boundary * (fam.a_conj() - t(j)) / s(j);
        }
        if (limit < alpha) {
          alpha = limit;
          step.capped = true;
        }
      }

      const double roundoff = 1e-12 * (1.0 + std::abs(value));
      for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
        const Eigen::VectorXd trial = sol.lambda + alpha * dir;
        const double v = dual.value(trial);
        if (!std::isfinite(v) && v != kInf) continue;
        if (v >= value + opt.armijo * alpha * slope) {
          step = {true, step.capped, trial, v};
          break;
        }
        // Close to the optimum the predicted increase drops below the
        // rounding level of the objective; fall back to gradient decrease.
        if (bt == 0 && alpha * slope <= roundoff && v >= value - roundoff) {
          const Eigen::VectorXd tt = dual.arguments(trial);
          bool inside = true;
          for (Eigen::Index j = 0; j < tt.size() && inside; ++j) {
            inside = fam.a_conj() < tt(j) && tt(j) < fam.b_conj();
          }
          if (inside && dual.gradient(tt).cwiseAbs().maxCoeff() < sol.grad_norm) {
            step = {true, step.capped, trial, v};
            break;
          }
        }
      }
    }

    if (!step.accepted) {
      sol.status = step.capped ? SolveStatus::boundary : SolveStatus::iteration_limit;
      spdlog::debug("dual line search failed at iteration {} ({})", iter,
                    to_string(sol.status));
      return sol;
    }
    sol.lambda = std::move(step.lambda);
    value = step.value;
    t = dual.arguments(sol.lambda);
  }
}

Eigen::VectorXd unit_e0(Eigen::Index m) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e(0) = 1.0;
  return e;
}

void require_dimension(const MomentProblem& problem, const Eigen::VectorXd& lambda) {
  if (static_cast<std::size_t>(lambda.size()) != problem.dual_dimension()) {
    throw DimensionMismatch("lambda must have 1 + l components");
  }
}

}  // namespace

double dual_objective(const MomentProblem& problem, const Eigen::VectorXd& lambda) {
  require_dimension(problem, lambda);
  const ConcaveDual dual(problem.weights(), problem.augmented(), problem.family(),
                         unit_e0(lambda.size()));
  return dual.value(lambda);
}

Eigen::VectorXd dual_gradient(const MomentProblem& problem, const Eigen::VectorXd& lambda) {
  require_dimension(problem, lambda);
  const ConcaveDual dual(problem.weights(), problem.augmented(), problem.family(),
                         unit_e0(lambda.size()));
  return dual.gradient(dual.arguments(lambda));
}

Eigen::MatrixXd dual_hessian(const MomentProblem& problem, const Eigen::VectorXd& lambda) {
  require_dimension(problem, lambda);
  const ConcaveDual dual(problem.weights(), problem.augmented(), problem.family(),
                         unit_e0(lambda.size()));
  return -dual.curvature(dual.arguments(lambda));
}

DualSolution solve_dual(const MomentProblem& problem, const SolveOptions& options) {
  if (!problem.full_rank()) {
    throw InvalidOptions("solve_dual requires linearly independent constraints");
  }
  const ConcaveDual dual(problem.weights(), problem.augmented(), problem.family(),
                         unit_e0(static_cast<Eigen::Index>(problem.dual_dimension())));
  return maximize(dual, options);
}

ProjectionReport recover_primal(const MomentProblem& problem, const DualSolution& solution) {
  if (solution.status != SolveStatus::converged) {
    throw NotConverged(std::string("cannot recover a projection from a dual solve with status ") +
                       std::string(to_string(solution.status)));
  }
  require_dimension(problem, solution.lambda);
  const auto& fam = problem.family();
  const Eigen::VectorXd t = problem.augmented() * solution.lambda;

  ProjectionReport r;
  r.lambda = solution.lambda;
  r.q_star.resize(t.size());
  for (Eigen::Index j = 0; j < t.size(); ++j) r.q_star(j) = fam.conj_prime(t(j));
  const auto& p = problem.weights();
  r.primal_value = weighted_divergence(fam, {p.data(), static_cast<std::size_t>(p.size())},
                                       {r.q_star.data(), static_cast<std::size_t>(r.q_star.size())});
  r.dual_value = solution.dual_value;
  r.gap = ext_add(r.primal_value, -r.dual_value);
  r.characterization_residual = characterization_residual(problem, r.q_star);
  r.status = solution.status;
  r.iterations = solution.iterations;
  return r;
}

double duality_gap(const MomentProblem& problem, const Eigen::VectorXd& lambda,
                   const CandidateMeasure& Q, double feasibility_tolerance) {
  const double infeas = feasibility_residual(problem, Q).cwiseAbs().maxCoeff();
  if (!(infeas <= feasibility_tolerance)) {
    std::ostringstream os;
    os << "candidate violates the moment constraints by " << infeas;
    throw InfeasibleCandidate(os.str());
  }
  const Eigen::VectorXd q = Q.density(problem);
  const auto& p = problem.weights();
  const double primal = weighted_divergence(
      problem.family(), {p.data(), static_cast<std::size_t>(p.size())},
      {q.data(), static_cast<std::size_t>(q.size())});
  return ext_add(primal, -dual_objective(problem, lambda));
}

DualRepresentation dual_representation(const DivergenceFamily& family,
                                       const DiscreteSignedMeasure& Q,
                                       const ProbabilityMeasure& P, const Eigen::MatrixXd& G,
                                       const SolveOptions& options) {
  const MomentProblem problem = build_problem(P, G, family);
  const CandidateMeasure aligned = CandidateMeasure::align(problem, Q);
  const Eigen::VectorXd q = aligned.density(problem);
  const auto& p = problem.weights();
  const double div = weighted_divergence(family, {p.data(), static_cast<std::size_t>(p.size())},
                                         {q.data(), static_cast<std::size_t>(q.size())});
  if (!std::isfinite(div)) {
    throw InvalidOptions("dual representation requires a finite divergence");
  }
  const ConcaveDual dual(problem.weights(), problem.augmented(), family,
                         problem.augmented().transpose() * aligned.weights);
  const DualSolution sol = maximize(dual, options);
  return {sol.dual_value, sol.lambda, sol.status, sol.iterations};
}

}  // namespace phiproj
