#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "phiproj/divergence_family.hpp"

namespace phiproj {

/// A support point. Measures are matched by `id` only; `coords` is carried
/// along for reporting.
struct Atom {
  std::string id;
  std::vector<double> coords;
};

/// Finitely supported signed measure: unique atoms with finite real weights.
class DiscreteSignedMeasure {
 public:
  DiscreteSignedMeasure() = default;
  /// Throws InvalidMeasure on duplicate ids, non-finite weights or a length
  /// mismatch.
  DiscreteSignedMeasure(std::vector<Atom> atoms, std::vector<double> weights);

  /// Atoms named "0", "1", ... in order.
  static DiscreteSignedMeasure from_weights(std::vector<double> weights);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  std::optional<std::size_t> index_of(const std::string& id) const;
  double total_mass() const;
  double total_variation() const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> weights_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class Normalization { strict, renormalize };

/// Probability measure with strictly positive weights summing to one.
///
/// Atoms with weight exactly 0 are dropped. Negative weights and positive
/// weights below 1e-15 are rejected. The total must be 1 within 1e-12 unless
/// `Normalization::renormalize` is passed.
class ProbabilityMeasure {
 public:
  static constexpr double kMinWeight = 1e-15;
  static constexpr double kMassTolerance = 1e-12;

  ProbabilityMeasure(std::vector<Atom> atoms, std::vector<double> weights,
                     Normalization norm = Normalization::strict);

  static ProbabilityMeasure from_weights(std::vector<double> weights,
                                         Normalization norm = Normalization::strict);
  static ProbabilityMeasure uniform(std::size_t n);

  const DiscreteSignedMeasure& measure() const noexcept { return measure_; }
  const std::vector<Atom>& atoms() const noexcept { return measure_.atoms(); }
  const std::vector<double>& weights() const noexcept { return measure_.weights(); }
  std::size_t size() const noexcept { return measure_.size(); }
  std::optional<std::size_t> index_of(const std::string& id) const {
    return measure_.index_of(id);
  }

 private:
  DiscreteSignedMeasure measure_;
};

/// Lebesgue decomposition Q = q P + sigma with the Jordan split of sigma.
struct DensityDecomposition {
  std::vector<double> density;  ///< q_j = Q(x_j) / P(x_j), one per atom of P
  double singular_pos = 0.0;    ///< positive Q-mass outside supp P
  double singular_neg = 0.0;    ///< negative Q-mass outside supp P (as a magnitude)

  bool absolutely_continuous() const noexcept {
    return singular_pos == 0.0 && singular_neg == 0.0;
  }
};

DensityDecomposition density(const DiscreteSignedMeasure& Q, const ProbabilityMeasure& P);

/// sum_j p_j phi(q_j) in extended reals.
double weighted_divergence(const DivergenceFamily& family, std::span<const double> p,
                           std::span<const double> q);

/// phi(Q, P) = sum_j P(x_j) phi(q_j) when Q << P, +inf otherwise.
double divergence(const DivergenceFamily& family, const DiscreteSignedMeasure& Q,
                  const ProbabilityMeasure& P);

/// Signed-measure extension: the absolutely continuous part plus
/// b_conj * sigma^+ - a_conj * sigma^-. Identical to `divergence` whenever Q << P.
double divergence_extended(const DivergenceFamily& family, const DiscreteSignedMeasure& Q,
                           const ProbabilityMeasure& P);

/// Q = Q_plus - Q_minus; both returned over the atoms of Q with nonnegative
/// weights and disjoint supports.
std::pair<DiscreteSignedMeasure, DiscreteSignedMeasure> jordan_split(
    const DiscreteSignedMeasure& Q);

}  // namespace phiproj
