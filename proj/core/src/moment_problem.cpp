#include "phiproj/moment_problem.hpp"

#include <sstream>
#include <vector>

#include "phiproj/errors.hpp"

namespace phiproj {

MomentProblem::MomentProblem(ProbabilityMeasure reference, Eigen::MatrixXd constraints,
                             DivergenceFamily family)
    : reference_(std::move(reference)),
      constraints_(std::move(constraints)),
      family_(family) {
  const auto n = static_cast<Eigen::Index>(reference_.size());
  weights_ = Eigen::Map<const Eigen::VectorXd>(reference_.weights().data(), n);
  augmented_.resize(n, constraints_.cols() + 1);
  augmented_.col(0).setOnes();
  augmented_.rightCols(constraints_.cols()) = constraints_;
}

MomentProblem MomentProblem::with_family(const DivergenceFamily& family) const {
  MomentProblem copy = *this;
  copy.family_ = family;
  return copy;
}

MomentProblem build_problem(ProbabilityMeasure P, Eigen::MatrixXd G, DivergenceFamily family,
                            const BuildOptions& options) {
  if (static_cast<std::size_t>(G.rows()) != P.size()) {
    std::ostringstream os;
    os << "constraint matrix has " << G.rows() << " rows but P has " << P.size() << " atoms";
    throw DimensionMismatch(os.str());
  }
  if (!G.allFinite()) throw DimensionMismatch("constraint matrix has non-finite entries");
  if (!(options.rank_tolerance > 0.0)) throw InvalidOptions("rank_tolerance must be positive");

  MomentProblem problem(std::move(P), std::move(G), family);

  const Eigen::MatrixXd scaled =
      problem.weights().cwiseSqrt().asDiagonal() * problem.augmented();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const auto m = static_cast<Eigen::Index>(problem.dual_dimension());
  const double threshold = options.rank_tolerance * (sv.size() > 0 ? sv(0) : 0.0);
  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > threshold) ++rank;
  }
  problem.rank_ = rank;

  if (rank < static_cast<std::size_t>(m) && options.require_full_rank) {
    const Eigen::VectorXd kernel = svd.matrixV().col(m - 1);
    std::vector<double> kv(kernel.data(), kernel.data() + kernel.size());
    std::ostringstream os;
    os << "constraint functions (1 and " << m - 1
       << " columns of G) are linearly dependent on supp P (rank " << rank << " < " << m << "); kernel lambda = [";
    os.precision(6);
    for (std::size_t i = 0; i < kv.size(); ++i) os << (i ? ", " : "") << kv[i];
    os << "]";
    throw RankDeficient(os.str(), std::move(kv));
  }
  return problem;
}

CandidateMeasure CandidateMeasure::from_density(const MomentProblem& problem,
                                                const Eigen::VectorXd& density) {
  if (density.size() != problem.weights().size()) {
    throw DimensionMismatch("density length differs from atom count");
  }
  return {problem.weights().cwiseProduct(density)};
}

CandidateMeasure CandidateMeasure::align(const MomentProblem& problem,
                                         const DiscreteSignedMeasure& Q) {
  const auto& P = problem.reference();
  CandidateMeasure out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(P.size()))};
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const double w = Q.weights()[i];
    auto j = P.index_of(Q.atoms()[i].id);
    if (!j) {
      if (w != 0.0) {
        throw DimensionMismatch("candidate charges atom '" + Q.atoms()[i].id +
                                "' outside supp P");
      }
      continue;
    }
    out.weights(static_cast<Eigen::Index>(*j)) = w;
  }
  return out;
}

Eigen::VectorXd CandidateMeasure::density(const MomentProblem& problem) const {
  return weights.cwiseQuotient(problem.weights());
}

DiscreteSignedMeasure CandidateMeasure::to_measure(const MomentProblem& problem) const {
  return {problem.reference().atoms(),
          std::vector<double>(weights.data(), weights.data() + weights.size())};
}

Eigen::VectorXd feasibility_residual(const MomentProblem& problem, const CandidateMeasure& Q) {
  if (Q.weights.size() != problem.weights().size()) {
    throw DimensionMismatch("candidate is not aligned with supp P");
  }
  Eigen::VectorXd r = problem.augmented().transpose() * Q.weights;
  r(0) -= 1.0;
  return r;
}

}  // namespace phiproj
