#include "phiproj/primal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "phiproj/detail/scalar_search.hpp"
#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"

namespace phiproj {

Eigen::VectorXd minimum_norm_density(const MomentProblem& problem) {
  const Eigen::VectorXd sqrt_p = problem.weights().cwiseSqrt();
  // Work in u = sqrt(P) q so that the P-weighted norm becomes Euclidean.
  const Eigen::MatrixXd A = (sqrt_p.asDiagonal() * problem.augmented()).transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
  rhs(0) = 1.0;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-10);
  const Eigen::VectorXd u0 = cod.solve(rhs);
  const double scale = std::max(1.0, problem.constraints().size() > 0
                                         ? problem.constraints().cwiseAbs().maxCoeff()
                                         : 0.0);
  const double residual = (A * u0 - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale)) {
    std::ostringstream os;
    os << "constraints admit no density: least-squares residual " << residual;
    throw InfeasibleAffineSystem(os.str());
  }
  return u0.cwiseQuotient(sqrt_p);
}

FeasibleParametrization parametrize_feasible(const MomentProblem& problem) {
  FeasibleParametrization out;
  out.base_point = minimum_norm_density(problem);

  const Eigen::VectorXd sqrt_p = problem.weights().cwiseSqrt();
  const Eigen::MatrixXd At = sqrt_p.asDiagonal() * problem.augmented();  // n x m
  const Eigen::Index n = At.rows();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank < n) {
    const Eigen::MatrixXd q = qr.householderQ();
    out.basis = sqrt_p.cwiseInverse().asDiagonal() * q.rightCols(n - rank);
  } else {
    out.basis.resize(n, 0);
  }
  return out;
}

namespace {

class OracleObjective {
 public:
  OracleObjective(const MomentProblem& problem, const FeasibleParametrization& param)
      : problem_(problem), param_(param), q_(param.base_point.size()) {}

  double operator()(const Eigen::VectorXd& c) {
    q_ = param_.base_point;
    if (c.size() > 0) q_.noalias() += param_.basis * c;
    const auto& fam = problem_.family();
    const auto& p = problem_.weights();
    double total = 0.0;
    for (Eigen::Index j = 0; j < q_.size(); ++j) {
      const double v = fam.phi(q_(j));
      if (std::isinf(v)) return kInf;
      total += p(j) * v;
    }
    return total;
  }

 private:
  const MomentProblem& problem_;
  const FeasibleParametrization& param_;
  Eigen::VectorXd q_;
};

}  // namespace

OracleResult oracle_solve(const MomentProblem& problem, const OracleOptions& options) {
  if (options.resolution == 0) throw InvalidOptions("oracle resolution must be positive");
  if (!(options.radius > 0.0)) throw InvalidOptions("oracle radius must be positive");

  const auto param = parametrize_feasible(problem);
  const auto dim = static_cast<Eigen::Index>(param.dimension());
  if (param.dimension() > options.max_dimension) {
    std::ostringstream os;
    os << "null-space dimension " << dim << " exceeds oracle limit " << options.max_dimension;
    throw InvalidOptions(os.str());
  }

  OracleObjective objective(problem, param);
  OracleResult result;
  Eigen::VectorXd best = Eigen::VectorXd::Zero(dim);
  double best_value = objective(best);

  const std::size_t res = options.resolution;
  const double step = res > 1 ? 2.0 * options.radius / static_cast<double>(res - 1) : 0.0;
  auto axis_value = [&](std::size_t k) {
    return res > 1 ? -options.radius + step * static_cast<double>(k) : 0.0;
  };

  if (dim > 0) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    Eigen::VectorXd c(dim);
    while (true) {
      for (Eigen::Index a = 0; a < dim; ++a) c(a) = axis_value(idx[static_cast<std::size_t>(a)]);
      const double v = objective(c);
      if (v < best_value) {
        best_value = v;
        best = c;
      }
      std::size_t a = 0;
      while (a < idx.size() && ++idx[a] == res) idx[a++] = 0;
      if (a == idx.size()) break;
    }
  }
  result.pass_values.push_back(best_value);

  if (dim > 0 && std::isfinite(best_value) && step > 0.0) {
    Eigen::VectorXd trial = best;
    for (int pass = 0; pass < options.max_refine_passes; ++pass) {
      const double start = best_value;
      for (Eigen::Index a = 0; a < dim; ++a) {
        const double centre = best(a);
        auto line = [&](double s) {
          trial = best;
          trial(a) = s;
          return objective(trial);
        };
        const auto [s, v] = detail::golden_minimize(line, centre - step, centre + step);
        if (v < best_value) {
          best_value = v;
          best(a) = s;
        }
      }
      result.pass_values.push_back(best_value);
      if (!(start - best_value > 1e-15 * (1.0 + std::abs(best_value)))) break;
    }
  }

  result.value = best_value;
  result.coefficients = best;
  result.density = param.base_point;
  if (dim > 0) result.density.noalias() += param.basis * best;
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (std::abs(best(a)) >= options.radius - 0.5 * step) result.touches_box = true;
  }
  if (result.touches_box) {
    spdlog::warn("primal oracle minimizer touches the coefficient box (radius {})",
                 options.radius);
  }
  return result;
}

}  // namespace phiproj
