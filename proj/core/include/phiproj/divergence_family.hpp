#pragma once

#include <cstddef>
#include <string>

namespace phiproj {

enum class DomainMode {
  /// phi_gamma on [0, inf), +inf on the negative half-line.
  nonnegative_extension,
  /// phi finite and convex on the whole line; only valid for gamma = 2.
  full_line,
};

/// Power divergence function
///
///   phi_gamma(x) = (x^gamma - gamma x + gamma - 1) / (gamma (gamma - 1)),
///
/// with phi_1(x) = x log x - x + 1 and phi_0(x) = -log x + x - 1. Notable
/// members: gamma = 1 (KL), 0 (modified KL), 2 (chi-square), -1 (modified
/// chi-square), 1/2 (Hellinger).
///
/// All evaluators use extended-real semantics: values outside the domain
/// are +inf, never an error. Derivatives are only defined on the open
/// domain and throw BoundaryError elsewhere.
///
/// Instances are immutable and cheap to copy.
class DivergenceFamily {
 public:
  double gamma() const noexcept { return gamma_; }
  DomainMode domain_mode() const noexcept { return mode_; }

  /// Endpoints of dom phi.
  double a_phi() const noexcept { return a_phi_; }
  double b_phi() const noexcept { return b_phi_; }
  /// Endpoints of dom phi*; a_conj < 0 < b_conj.
  double a_conj() const noexcept { return a_conj_; }
  double b_conj() const noexcept { return b_conj_; }

  /// phi'(a_phi) and phi'(b_phi) as one-sided limits.
  double phi_prime_at_lower() const noexcept { return phi_prime_lower_; }
  double phi_prime_at_upper() const noexcept { return phi_prime_upper_; }

  /// Short display name: "KL", "KL_m", "chi2", "chi2_+", "chi2_m",
  /// "hellinger" or "power(<gamma>)".
  std::string name() const;

  double phi(double x) const;
  double phi_prime(double x) const;
  double phi_prime_inv(double t) const;

  /// Closed-form Fenchel conjugate phi*(t) = sup_x {t x - phi(x)}.
  double conj(double t) const;
  /// (phi*)'(t); equals phi'^{-1}(t) on the interior of Im phi'. For the
  /// nonnegative extension with gamma > 1 it is 0 below phi'(0).
  double conj_prime(double t) const;
  double conj_second(double t) const;

  friend DivergenceFamily make_family(double gamma, DomainMode mode);

 private:
  DivergenceFamily() = default;

  bool in_open_domain(double x) const noexcept { return a_phi_ < x && x < b_phi_; }
  bool in_open_conj_domain(double t) const noexcept { return a_conj_ < t && t < b_conj_; }

  double gamma_ = 1.0;
  DomainMode mode_ = DomainMode::nonnegative_extension;
  double a_phi_ = 0.0;
  double b_phi_ = 0.0;
  double a_conj_ = 0.0;
  double b_conj_ = 0.0;
  double phi_prime_lower_ = 0.0;
  double phi_prime_upper_ = 0.0;
};

/// Throws InvalidOptions for a non-finite gamma or for full_line with
/// gamma != 2 (phi_gamma is then not finite or not convex on the negatives).
DivergenceFamily make_family(double gamma,
                             DomainMode mode = DomainMode::nonnegative_extension);

/// Bounded grid used by the brute-force Legendre transform. Points are
/// log-spaced on [lower, upper]; the full-line family also gets the mirrored
/// negatives, and 0 is added whenever phi(0) is finite.
struct LegendreGrid {
  double lower = 1e-9;
  double upper = 1e6;
  std::size_t points = 4001;
};

/// Brute-force conjugate: maximum of t x - phi(x) over the grid followed by
/// one golden-section refinement around the grid argmax. Returns +inf when
/// the argmax sits on an unbounded end of the grid, and -inf for an empty
/// grid. Independent of DivergenceFamily::conj.
double legendre_numeric(const DivergenceFamily& family, double t,
                        const LegendreGrid& grid = {});

/// sup_t {x t - phi*(t)} over a uniform t-grid on [t_lower, t_upper] with the
/// same refinement step. Recovers phi(x) whenever phi'(x) lies in the grid.
double biconjugate_numeric(const DivergenceFamily& family, double x,
                           double t_lower, double t_upper,
                           std::size_t points = 4001);

}  // namespace phiproj
