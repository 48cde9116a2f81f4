#include "phiproj/measures.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"

namespace phiproj {

namespace {

std::vector<Atom> numbered_atoms(std::size_t n) {
  std::vector<Atom> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i].id = std::to_string(i);
  return atoms;
}

}  // namespace

DiscreteSignedMeasure::DiscreteSignedMeasure(std::vector<Atom> atoms,
                                             std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() != weights_.size()) {
    throw InvalidMeasure("atom and weight counts differ");
  }
  index_.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(weights_[i])) {
      throw InvalidMeasure("non-finite weight on atom '" + atoms_[i].id + "'");
    }
    if (!index_.emplace(atoms_[i].id, i).second) {
      throw InvalidMeasure("duplicate atom '" + atoms_[i].id + "'");
    }
  }
}

DiscreteSignedMeasure DiscreteSignedMeasure::from_weights(std::vector<double> weights) {
  auto atoms = numbered_atoms(weights.size());
  return {std::move(atoms), std::move(weights)};
}

std::optional<std::size_t> DiscreteSignedMeasure::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double DiscreteSignedMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double DiscreteSignedMeasure::total_variation() const {
  double s = 0.0;
  for (double w : weights_) s += std::abs(w);
  return s;
}

ProbabilityMeasure::ProbabilityMeasure(std::vector<Atom> atoms, std::vector<double> weights,
                                       Normalization norm) {
  if (atoms.size() != weights.size()) {
    throw InvalidMeasure("atom and weight counts differ");
  }
  std::vector<Atom> kept_atoms;
  std::vector<double> kept;
  kept_atoms.reserve(atoms.size());
  kept.reserve(weights.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidMeasure("probability weight on atom '" + atoms[i].id +
                           "' must be finite and nonnegative");
    }
    if (w == 0.0) continue;
    if (w < kMinWeight) {
      std::ostringstream os;
      os << "probability weight " << w << " on atom '" << atoms[i].id
         << "' is below " << kMinWeight;
      throw InvalidMeasure(os.str());
    }
    kept_atoms.push_back(std::move(atoms[i]));
    kept.push_back(w);
  }
  if (kept.empty()) throw InvalidMeasure("probability measure has no atoms");
  const double total = std::accumulate(kept.begin(), kept.end(), 0.0);
  if (norm == Normalization::renormalize) {
    for (double& w : kept) w /= total;
  } else if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "probability weights sum to " << total << ", not 1";
    throw InvalidMeasure(os.str());
  }
  measure_ = DiscreteSignedMeasure(std::move(kept_atoms), std::move(kept));
}

ProbabilityMeasure ProbabilityMeasure::from_weights(std::vector<double> weights,
                                                    Normalization norm) {
  auto atoms = numbered_atoms(weights.size());
  return {std::move(atoms), std::move(weights), norm};
}

ProbabilityMeasure ProbabilityMeasure::uniform(std::size_t n) {
  return from_weights(std::vector<double>(n, 1.0 / static_cast<double>(n)),
                      Normalization::renormalize);
}

DensityDecomposition density(const DiscreteSignedMeasure& Q, const ProbabilityMeasure& P) {
  DensityDecomposition out;
  out.density.assign(P.size(), 0.0);
  const auto& pw = P.weights();
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const double w = Q.weights()[i];
    if (auto j = P.index_of(Q.atoms()[i].id)) {
      out.density[*j] = w / pw[*j];
    } else if (w > 0.0) {
      out.singular_pos += w;
    } else if (w < 0.0) {
      out.singular_neg -= w;
    }
  }
  return out;
}

double weighted_divergence(const DivergenceFamily& family, std::span<const double> p,
                           std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionMismatch("weight and density lengths differ");
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    total = ext_add(total, ext_mul(p[j], family.phi(q[j])));
  }
  return total;
}

double divergence(const DivergenceFamily& family, const DiscreteSignedMeasure& Q,
                  const ProbabilityMeasure& P) {
  const auto d = density(Q, P);
  if (!d.absolutely_continuous()) return kInf;
  return weighted_divergence(family, P.weights(), d.density);
}

double divergence_extended(const DivergenceFamily& family, const DiscreteSignedMeasure& Q,
                           const ProbabilityMeasure& P) {
  const auto d = density(Q, P);
  double total = weighted_divergence(family, P.weights(), d.density);
  if (d.singular_pos != 0.0) total = ext_add(total, ext_mul(d.singular_pos, family.b_conj()));
  if (d.singular_neg != 0.0) total = ext_add(total, -ext_mul(d.singular_neg, family.a_conj()));
  return total;
}

std::pair<DiscreteSignedMeasure, DiscreteSignedMeasure> jordan_split(
    const DiscreteSignedMeasure& Q) {
  std::vector<double> plus(Q.size(), 0.0);
  std::vector<double> minus(Q.size(), 0.0);
  for (std::size_t i = 0; i < Q.size(); ++i) {
    const double w = Q.weights()[i];
    if (w > 0.0) plus[i] = w;
    if (w < 0.0) minus[i] = -w;
  }
  return {DiscreteSignedMeasure(Q.atoms(), std::move(plus)),
          DiscreteSignedMeasure(Q.atoms(), std::move(minus))};
}

}  // namespace phiproj
