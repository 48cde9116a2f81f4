#include "phiproj/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <spdlog/spdlog.h>

#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"
#include "phiproj/measures.hpp"
#include "phiproj/primal_oracle.hpp"

namespace phiproj {

bool coercivity(const DivergenceFamily& family) {
  if (family.b_conj() != kInf) return false;
  if (family.a_phi() == -kInf && family.a_conj() != -kInf) return false;
  return true;
}

bool essential_smoothness(const DivergenceFamily& family) {
  if (std::isfinite(family.a_phi()) && family.phi_prime_at_lower() != -kInf) return false;
  if (std::isfinite(family.b_phi()) && family.phi_prime_at_upper() != kInf) return false;
  return true;
}

// phi_gamma'' = x^{gamma - 2} > 0 on the open domain for every gamma.
bool strict_convexity(const DivergenceFamily&) { return true; }

bool condition_c0(const DivergenceFamily&) { return true; }

std::string_view to_string(CqStatus status) {
  switch (status) {
    case CqStatus::holds: return "holds";
    case CqStatus::fails_provably: return "fails_provably";
    case CqStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

/// Orthogonal (in the P-weighted metric) projection onto the affine set of
/// feasible densities.
class AffineProjector {
 public:
  explicit AffineProjector(const MomentProblem& problem)
      : g_(problem.augmented()), p_(problem.weights()) {
    const Eigen::MatrixXd gram = g_.transpose() * p_.asDiagonal() * g_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
    cod.setThreshold(1e-12);
    gram_pinv_ = cod.pseudoInverse();
    e0_ = Eigen::VectorXd::Zero(g_.cols());
    e0_(0) = 1.0;
  }

  void project(Eigen::VectorXd& q) const {
    const Eigen::VectorXd r = g_.transpose() * p_.cwiseProduct(q) - e0_;
    q.noalias() -= g_ * (gram_pinv_ * r);
  }

  void project_direction(Eigen::VectorXd& d) const {
    const Eigen::VectorXd r = g_.transpose() * p_.cwiseProduct(d);
    d.noalias() -= g_ * (gram_pinv_ * r);
  }

  double residual(const Eigen::VectorXd& q) const {
    return (g_.transpose() * p_.cwiseProduct(q) - e0_).cwiseAbs().maxCoeff();
  }

 private:
  const Eigen::MatrixXd& g_;
  const Eigen::VectorXd& p_;
  Eigen::MatrixXd gram_pinv_;
  Eigen::VectorXd e0_;
};

bool strictly_inside(const Eigen::VectorXd& q, double lower, double upper, double margin) {
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    if (!(q(j) > lower + margin && q(j) < upper - margin)) return false;
  }
  return true;
}

constexpr double kWitnessResidual = 1e-10;

}  // namespace

CqResult interior_feasibility(const MomentProblem& problem, double lower, double upper,
                              std::mt19937_64& rng, const CqOptions& options) {
  CqResult out;
  Eigen::VectorXd q;
  try {
    q = minimum_norm_density(problem);
  } catch (const InfeasibleAffineSystem&) {
    out.status = CqStatus::fails_provably;
    return out;
  }

  const AffineProjector projector(problem);
  auto accept = [&](const Eigen::VectorXd& cand) {
    return strictly_inside(cand, lower, upper, options.margin) &&
           projector.residual(cand) <= kWitnessResidual;
  };

  if (accept(q)) {
    out.status = CqStatus::holds;
    out.witness = q;
    return out;
  }

  double clip = options.search_margin;
  if (std::isfinite(lower) && std::isfinite(upper)) {
    clip = std::min(clip, 0.25 * (upper - lower));
  }
  const double lo = lower + clip;
  const double hi = upper - clip;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_amp(-4.0, -1.0);
  Eigen::VectorXd noise(q.size());
  for (int draw = 0; draw < options.max_draws; ++draw) {
    out.draws = draw + 1;
    const double amplitude = std::pow(10.0, log_amp(rng));
    for (Eigen::Index j = 0; j < noise.size(); ++j) noise(j) = amplitude * normal(rng);
    projector.project_direction(noise);
    q += noise;
    q = q.cwiseMax(lo).cwiseMin(hi);
    projector.project(q);
    if (accept(q)) {
      out.status = CqStatus::holds;
      out.witness = q;
      return out;
    }
  }
  out.status = CqStatus::inconclusive;
  return out;
}

CqResult cq_check(const MomentProblem& problem, std::mt19937_64& rng,
                  const CqOptions& options) {
  const auto& fam = problem.family();
  return interior_feasibility(problem, fam.a_phi(), fam.b_phi(), rng, options);
}

double characterization_residual(const MomentProblem& problem, const Eigen::VectorXd& q_star) {
  const auto& fam = problem.family();
  const auto n = static_cast<Eigen::Index>(problem.atom_count());
  if (q_star.size() != n) throw DimensionMismatch("q* length differs from atom count");

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (fam.a_phi() < q_star(j) && q_star(j) < fam.b_phi()) kept.push_back(j);
  }
  if (kept.empty()) {
    throw BoundaryError("characterization residual: no atom with q* inside dom phi");
  }

  const auto k = static_cast<Eigen::Index>(kept.size());
  const auto m = problem.augmented().cols();
  Eigen::MatrixXd design(k, m);
  Eigen::VectorXd target(k);
  Eigen::VectorXd sqrt_w(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const Eigen::Index j = kept[static_cast<std::size_t>(r)];
    sqrt_w(r) = std::sqrt(problem.weights()(j));
    target(r) = fam.phi_prime(q_star(j));
    design.row(r) = problem.augmented().row(j);
  }
  const Eigen::MatrixXd wd = sqrt_w.asDiagonal() * design;
  const Eigen::VectorXd wt = sqrt_w.cwiseProduct(target);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(wd);
  const Eigen::VectorXd coef = cod.solve(wt);
  const double resid = (wt - wd * coef).norm();
  return resid / std::max(wt.norm(), 1.0);
}

SupportCheck support_check(const MomentProblem& problem, const Eigen::VectorXd& q_star,
                           const CqResult& cq) {
  const auto& fam = problem.family();
  SupportCheck out;
  out.full_support = q_star.size() > 0 && q_star.minCoeff() > 0.0;
  out.lemma_applies = condition_c0(fam) && fam.a_phi() == 0.0 &&
                      fam.phi_prime_at_lower() == -kInf && cq.status == CqStatus::holds;
  out.inconsistent = out.lemma_applies && !out.full_support;
  if (out.inconsistent) {
    spdlog::warn("computed projection has a zero atom although full support is predicted");
  }
  return out;
}

DiagnosticsReport existence_report(const MomentProblem& problem, std::mt19937_64& rng,
                                   const std::optional<Eigen::VectorXd>& q_star,
                                   const CqOptions& options) {
  const auto& fam = problem.family();
  DiagnosticsReport r;
  r.family = fam.name();
  r.coercive = coercivity(fam);
  r.essentially_smooth = essential_smoothness(fam);
  r.strictly_convex = strict_convexity(fam);
  r.condition_c0 = condition_c0(fam);
  r.cq = cq_check(problem, rng, options);
  if (fam.a_phi() == 0.0 && fam.b_phi() == kInf) {
    r.positive_witness = r.cq;
  } else {
    r.positive_witness = interior_feasibility(problem, 0.0, kInf, rng, options);
  }

  const bool cq_holds = r.cq.status == CqStatus::holds;
  bool finite_value = cq_holds;
  if (!finite_value && r.cq.status != CqStatus::fails_provably) {
    const Eigen::VectorXd base = minimum_norm_density(problem);
    finite_value = std::isfinite(weighted_divergence(
        fam, {problem.weights().data(), static_cast<std::size_t>(problem.weights().size())},
        {base.data(), static_cast<std::size_t>(base.size())}));
  }

  const double max_abs_g =
      problem.constraints().size() > 0 ? problem.constraints().cwiseAbs().maxCoeff() : 0.0;
  const bool c1 = finite_value;
  const bool c2 = r.coercive;
  // On a finite support every integral is a finite sum; what remains is
  // whether phi* is finite on [0, inf) (C.3) and whether phi grows like |x|^r
  // for some r > 1 (C.3.1).
  const bool c3 = fam.b_conj() == kInf;
  const bool c31 = fam.gamma() > 1.0;
  const bool c4 = std::isfinite(max_abs_g);
  const bool c5 = fam.phi(0.0) == kInf;
  const bool c6 = fam.a_phi() == 0.0 && fam.phi_prime_at_lower() == -kInf;
  const bool c7 = r.positive_witness.status == CqStatus::holds;

  r.conditions = {
      {"C.1", c1, c1 ? "a feasible density with finite divergence exists"
                     : "no feasible density with finite divergence found"},
      {"C.2", c2, "phi(x)/|x| -> inf"},
      {"C.3", c3, "finite sums; reduces to phi* finite on [0, inf)"},
      {"C.3.1", c31, "finite sums; reduces to phi(x) >= c |x|^r for some r > 1"},
      {"C.4", c4, "max |G| finite"},
      {"C.5", c5, "phi(0) = inf"},
      {"C.6", c6, "a_phi = 0 and phi'(0) = -inf"},
      {"C.7", c7, "feasible density strictly positive on supp P"},
  };

  const bool alt_support = c5 || (c6 && c7);
  const bool prop_any = (c1 && c2 && (c3 || c4) && alt_support) || (c1 && c31 && alt_support);

  r.predicts_dual_attainment = cq_holds;
  r.predicts_primal_existence = cq_holds || prop_any;
  r.predicts_primal_uniqueness = r.predicts_primal_existence && r.strictly_convex;
  r.predicts_dual_uniqueness = r.predicts_dual_attainment && r.essentially_smooth &&
                               problem.full_rank();

  r.notes.push_back(
      "integrability conditions are finite sums on a discrete reference measure and hold "
      "trivially wherever the summands are finite");
  if (!r.coercive) {
    std::ostringstream os;
    os << "phi is not coercive (b_conj = " << fam.b_conj()
       << "): growth alone does not guarantee a projection; existence relies on the "
          "constraint qualification";
    r.notes.push_back(os.str());
  }
  if (!r.essentially_smooth) {
    r.notes.push_back(
        "phi is not essentially smooth: the dual optimum may be non-unique and the "
        "projection may vanish on part of supp P");
  }
  if (r.cq.status == CqStatus::inconclusive) {
    r.notes.push_back("no interior feasible density found by the randomized search");
  }

  if (q_star) {
    try {
      r.characterization_residual = characterization_residual(problem, *q_star);
    } catch (const BoundaryError&) {
      r.characterization_residual = std::nullopt;
      r.notes.push_back("characterization residual undefined: q* outside dom phi everywhere");
    }
    r.support = support_check(problem, *q_star, r.cq);
  }
  return r;
}

}  // namespace phiproj
