#include "phiproj/divergence_family.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "phiproj/detail/scalar_search.hpp"
#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"

namespace phiproj {

namespace {

bool is_kl(double g) { return g == 1.0; }
bool is_kl_m(double g) { return g == 0.0; }

std::string domain_message(const char* what, double v, double lo, double hi) {
  std::ostringstream os;
  os << what << " = " << v << " outside open interval (" << lo << ", " << hi << ")";
  return os.str();
}

}  // namespace

DivergenceFamily make_family(double gamma, DomainMode mode) {
  if (!std::isfinite(gamma)) throw InvalidOptions("gamma must be finite");
  if (mode == DomainMode::full_line && gamma != 2.0) {
    throw InvalidOptions("full_line domain is only valid for gamma = 2");
  }
  DivergenceFamily f;
  f.gamma_ = gamma;
  f.mode_ = mode;
  if (mode == DomainMode::full_line) {
    f.a_phi_ = -kInf;
    f.b_phi_ = kInf;
    f.a_conj_ = -kInf;
    f.b_conj_ = kInf;
    f.phi_prime_lower_ = -kInf;
    f.phi_prime_upper_ = kInf;
    return f;
  }
  f.a_phi_ = 0.0;
  f.b_phi_ = kInf;
  f.a_conj_ = -kInf;
  if (gamma >= 1.0) {
    f.b_conj_ = kInf;
    f.phi_prime_upper_ = kInf;
  } else {
    f.b_conj_ = 1.0 / (1.0 - gamma);
    f.phi_prime_upper_ = f.b_conj_;
  }
  f.phi_prime_lower_ = gamma > 1.0 ? -1.0 / (gamma - 1.0) : -kInf;
  return f;
}

std::string DivergenceFamily::name() const {
  if (mode_ == DomainMode::full_line) return "chi2";
  if (gamma_ == 1.0) return "KL";
  if (gamma_ == 0.0) return "KL_m";
  if (gamma_ == 2.0) return "chi2_+";
  if (gamma_ == -1.0) return "chi2_m";
  if (gamma_ == 0.5) return "hellinger";
  std::ostringstream os;
  os << "power(" << gamma_ << ")";
  return os.str();
}

double DivergenceFamily::phi(double x) const {
  if (std::isnan(x)) return x;
  if (mode_ == DomainMode::full_line) {
    if (std::isinf(x)) return kInf;
    return 0.5 * (x - 1.0) * (x - 1.0);
  }
  if (x < 0.0 || x == kInf) return kInf;
  const double g = gamma_;
  if (x == 0.0) {
    // Right limit at the origin: 1/gamma for gamma > 0 (1 for KL), +inf otherwise.
    if (g <= 0.0) return kInf;
    return is_kl(g) ? 1.0 : 1.0 / g;
  }
  if (is_kl(g)) return x * std::log(x) - x + 1.0;
  if (is_kl_m(g)) return -std::log(x) + x - 1.0;
  return (std::pow(x, g) - g * x + g - 1.0) / (g * (g - 1.0));
}

double DivergenceFamily::phi_prime(double x) const {
  if (!in_open_domain(x)) {
    throw BoundaryError(domain_message("phi' argument", x, a_phi_, b_phi_));
  }
  if (mode_ == DomainMode::full_line) return x - 1.0;
  const double g = gamma_;
  if (is_kl(g)) return std::log(x);
  if (is_kl_m(g)) return 1.0 - 1.0 / x;
  return std::expm1((g - 1.0) * std::log(x)) / (g - 1.0);
}

double DivergenceFamily::phi_prime_inv(double t) const {
  if (!(phi_prime_lower_ < t && t < phi_prime_upper_)) {
    throw BoundaryError(
        domain_message("phi'^{-1} argument", t, phi_prime_lower_, phi_prime_upper_));
  }
  if (mode_ == DomainMode::full_line) return 1.0 + t;
  const double g = gamma_;
  if (is_kl(g)) return std::exp(t);
  if (is_kl_m(g)) return 1.0 / (1.0 - t);
  return std::exp(std::log1p((g - 1.0) * t) / (g - 1.0));
}

double DivergenceFamily::conj(double t) const {
  if (std::isnan(t)) return t;
  if (mode_ == DomainMode::full_line) {
    if (std::isinf(t)) return kInf;
    return t + 0.5 * t * t;
  }
  const double g = gamma_;
  if (t > b_conj_) return kInf;
  if (is_kl(g)) return std::expm1(t);
  if (is_kl_m(g)) return t == 1.0 ? kInf : -std::log1p(-t);
  if (g > 1.0 && t <= phi_prime_lower_) {
    // sup over x >= 0 is attained at x = 0.
    return -1.0 / g;
  }
  // phi*(t) = ((1 + (g-1) t)^{g/(g-1)} - 1) / g on the image of phi'.
  const double base_log = std::log1p((g - 1.0) * t);
  return std::expm1(g / (g - 1.0) * base_log) / g;
}

double DivergenceFamily::conj_prime(double t) const {
  if (!in_open_conj_domain(t)) {
    throw BoundaryError(domain_message("phi*' argument", t, a_conj_, b_conj_));
  }
  if (mode_ == DomainMode::nonnegative_extension && gamma_ > 1.0 &&
      t <= phi_prime_lower_) {
    return 0.0;
  }
  return phi_prime_inv(t);
}

double DivergenceFamily::conj_second(double t) const {
  if (!in_open_conj_domain(t)) {
    throw BoundaryError(domain_message("phi*'' argument", t, a_conj_, b_conj_));
  }
  if (mode_ == DomainMode::full_line) return 1.0;
  const double g = gamma_;
  if (is_kl(g)) return std::exp(t);
  if (is_kl_m(g)) return 1.0 / ((1.0 - t) * (1.0 - t));
  if (g > 1.0 && t <= phi_prime_lower_) return 0.0;
  // (phi*)'' = x^{2-g} with x = phi'^{-1}(t).
  return std::exp((2.0 - g) / (g - 1.0) * std::log1p((g - 1.0) * t));
}

double legendre_numeric(const DivergenceFamily& family, double t,
                        const LegendreGrid& grid) {
  if (grid.points == 0) return -kInf;
  std::vector<double> xs;
  const bool full = family.domain_mode() == DomainMode::full_line;
  const std::size_t m = grid.points;
  const double llo = std::log(grid.lower);
  const double lhi = std::log(grid.upper);
  std::vector<double> pos(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    pos[i] = std::exp(llo + s * (lhi - llo));
  }
  if (full) {
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) xs.push_back(-*it);
  }
  if (std::isfinite(family.phi(0.0))) xs.push_back(0.0);
  xs.insert(xs.end(), pos.begin(), pos.end());

  auto objective = [&](double x) {
    const double p = family.phi(x);
    return std::isinf(p) ? -kInf : t * x - p;
  };

  std::size_t best = 0;
  double best_val = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = objective(xs[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best_val == -kInf) return -kInf;
  // Still increasing at an unbounded end of the grid: the supremum diverges.
  if (best + 1 == xs.size()) return kInf;
  if (full && best == 0) return kInf;

  const double lo = xs[best == 0 ? 0 : best - 1];
  const double hi = xs[best + 1];
  const auto refined = detail::golden_maximize(objective, lo, hi);
  return std::max(best_val, refined.second);
}

double biconjugate_numeric(const DivergenceFamily& family, double x,
                           double t_lower, double t_upper, std::size_t points) {
  if (points == 0) return -kInf;
  auto objective = [&](double t) {
    const double c = family.conj(t);
    return std::isinf(c) ? (c > 0 ? -kInf : kInf) : x * t - c;
  };
  std::vector<double> ts(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double s = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    ts[i] = t_lower + s * (t_upper - t_lower);
  }
  std::size_t best = 0;
  double best_val = -kInf;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = objective(ts[i]);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best_val == -kInf) return -kInf;
  const double lo = ts[best == 0 ? 0 : best - 1];
  const double hi = ts[best + 1 == points ? best : best + 1];
  const auto refined = detail::golden_maximize(objective, lo, hi);
  return std::max(best_val, refined.second);
}

}  // namespace phiproj
