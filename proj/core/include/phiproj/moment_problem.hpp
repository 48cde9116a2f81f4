#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "phiproj/divergence_family.hpp"
#include "phiproj/measures.hpp"

namespace phiproj {

struct BuildOptions {
  /// A singular value of diag(sqrt P) [1 | G] below rank_tolerance * sigma_max
  /// counts as zero.
  double rank_tolerance = 1e-10;
  /// When false, rank-deficient instances are kept (with rank() < 1 + l)
  /// so feasibility tools can classify them. Solvers require full rank.
  bool require_full_rank = true;
};

/// Projection instance: reference measure P on n atoms, constraint values
/// G(j, i) = g_i(x_j) for i = 1..l (g_0 = 1 is implicit), and a divergence.
/// The constraint set is every Q << P with Q(X) = 1 and sum_j g_i(x_j) Q(x_j) = 0.
class MomentProblem {
 public:
  const ProbabilityMeasure& reference() const noexcept { return reference_; }
  const Eigen::MatrixXd& constraints() const noexcept { return constraints_; }
  const DivergenceFamily& family() const noexcept { return family_; }

  std::size_t atom_count() const noexcept { return reference_.size(); }
  std::size_t constraint_count() const noexcept {
    return static_cast<std::size_t>(constraints_.cols());
  }
  /// 1 + l.
  std::size_t dual_dimension() const noexcept { return constraint_count() + 1; }

  /// Reference weights P(x_j) as a column vector.
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  /// [1 | G], n x (1 + l); row j is g(x_j).
  const Eigen::MatrixXd& augmented() const noexcept { return augmented_; }

  std::size_t rank() const noexcept { return rank_; }
  bool full_rank() const noexcept { return rank_ == dual_dimension(); }

  /// Same reference and constraints under another divergence.
  MomentProblem with_family(const DivergenceFamily& family) const;

  friend MomentProblem build_problem(ProbabilityMeasure, Eigen::MatrixXd, DivergenceFamily,
                                     const BuildOptions&);

 private:
  MomentProblem(ProbabilityMeasure reference, Eigen::MatrixXd constraints,
                DivergenceFamily family);

  ProbabilityMeasure reference_;
  Eigen::MatrixXd constraints_;
  DivergenceFamily family_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd augmented_;
  std::size_t rank_ = 0;
};

/// Validates dimensions and the linear independence of {1, g_1..g_l} on
/// supp P. Throws DimensionMismatch, or RankDeficient carrying a kernel
/// vector (unless options.require_full_rank is false).
MomentProblem build_problem(ProbabilityMeasure P, Eigen::MatrixXd G, DivergenceFamily family,
                            const BuildOptions& options = {});

/// Signed measure aligned with the atoms of P, stored by weight.
struct CandidateMeasure {
  Eigen::VectorXd weights;

  static CandidateMeasure from_density(const MomentProblem& problem,
                                       const Eigen::VectorXd& density);
  /// Matches atoms by id; throws DimensionMismatch if Q charges an atom
  /// outside supp P.
  static CandidateMeasure align(const MomentProblem& problem,
                                const DiscreteSignedMeasure& Q);

  Eigen::VectorXd density(const MomentProblem& problem) const;
  DiscreteSignedMeasure to_measure(const MomentProblem& problem) const;
};

/// Component 0 is Q(X) - 1, component i is sum_j G(j, i) Q(x_j).
Eigen::VectorXd feasibility_residual(const MomentProblem& problem, const CandidateMeasure& Q);

}  // namespace phiproj
