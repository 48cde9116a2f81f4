#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "phiproj/divergence_family.hpp"
#include "phiproj/errors.hpp"
#include "phiproj/extended_real.hpp"
#include "support/oracles.hpp"

namespace phiproj {
namespace {

using testing::inverse_derivative_by_bisection;

const DivergenceFamily kKL = make_family(1.0);
const DivergenceFamily kKLm = make_family(0.0);
const DivergenceFamily kChi2 = make_family(2.0, DomainMode::full_line);
const DivergenceFamily kChi2Plus = make_family(2.0);
const DivergenceFamily kChi2m = make_family(-1.0);
const DivergenceFamily kHellinger = make_family(0.5);

std::vector<DivergenceFamily> all_families() {
  auto fams = testing::standard_families();
  fams.push_back(make_family(1.5));
  fams.push_back(make_family(0.3));
  fams.push_back(make_family(-2.0));
  fams.push_back(make_family(3.0));
  return fams;
}

/// Interior test range for t, keeping the argmax of t x - phi(x) well inside
/// the Legendre grid.
std::pair<double, double> conj_test_range(const DivergenceFamily& f) {
  const double hi = std::isfinite(f.b_conj()) ? f.b_conj() - 0.05 * f.b_conj() : 5.0;
  return {-5.0, std::min(hi, 5.0)};
}

TEST(MakeFamily, KullbackLeiblerHasUnboundedConjugateDomain) {
  EXPECT_EQ(kKL.b_conj(), kInf);
  EXPECT_EQ(kKL.a_conj(), -kInf);
  EXPECT_EQ(kKL.a_phi(), 0.0);
  EXPECT_EQ(kKL.b_phi(), kInf);
}

TEST(MakeFamily, ModifiedKullbackLeiblerConjugateEndsAtOne) {
  EXPECT_EQ(kKLm.b_conj(), 1.0);
  // Growth ratio (-ln y + y - 1) / y approaches 1 from below.
  const double y = 1e6;
  EXPECT_NEAR(kKLm.phi(y) / y, 1.0, 2e-5);
  // Brute-force conjugate is finite just below 1 and diverges just above.
  EXPECT_TRUE(std::isfinite(legendre_numeric(kKLm, 0.99)));
  EXPECT_EQ(legendre_numeric(kKLm, 1.01), kInf);
}

TEST(MakeFamily, FullLineChiSquare) {
  EXPECT_EQ(kChi2.a_conj(), -kInf);
  EXPECT_EQ(kChi2.b_conj(), kInf);
  EXPECT_EQ(kChi2.a_phi(), -kInf);
  EXPECT_EQ(kChi2.name(), "chi2");
  EXPECT_EQ(kChi2Plus.name(), "chi2_+");
}

TEST(MakeFamily, RejectsFullLineOtherThanChiSquare) {
  EXPECT_THROW(make_family(1.0, DomainMode::full_line), InvalidOptions);
  EXPECT_THROW(make_family(0.5, DomainMode::full_line), InvalidOptions);
  EXPECT_THROW(make_family(std::nan(""), DomainMode::nonnegative_extension), InvalidOptions);
  EXPECT_THROW(make_family(kInf), InvalidOptions);
}

TEST(MakeFamily, EndpointInvariants) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    EXPECT_EQ(f.phi(1.0), 0.0);
    EXPECT_LT(f.a_conj(), 0.0);
    EXPECT_GT(f.b_conj(), 0.0);
    EXPECT_EQ(f.conj(0.0), 0.0);
    EXPECT_EQ(f.b_phi(), kInf);
    if (f.domain_mode() == DomainMode::nonnegative_extension) {
      EXPECT_EQ(f.a_phi(), 0.0);
    } else {
      EXPECT_EQ(f.a_phi(), -kInf);
    }
  }
}

TEST(MakeFamily, ConjugateEndpointsMatchGrowthRatios) {
  const double y = 1e6;
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const double up = f.phi(y) / y;
    if (std::isfinite(f.b_conj())) {
      EXPECT_NEAR(up, f.b_conj(), 1e-2 * std::max(1.0, f.b_conj()));
    } else {
      EXPECT_GT(up, 10.0);
    }
    const double down = f.phi(-y) / -y;
    if (std::isfinite(f.a_conj())) {
      EXPECT_NEAR(down, f.a_conj(), 1e-2);
    } else {
      EXPECT_LT(down, -10.0);
    }
  }
}

TEST(Phi, Examples) {
  EXPECT_EQ(kKL.phi(1.0), 0.0);
  EXPECT_DOUBLE_EQ(kChi2.phi(0.5), 0.125);
  EXPECT_EQ(kKLm.phi(0.0), kInf);
  EXPECT_EQ(kKL.phi(-0.1), kInf);
  EXPECT_DOUBLE_EQ(kChi2.phi(-1.0), 2.0);
  EXPECT_EQ(kChi2Plus.phi(-1.0), kInf);
}

TEST(Phi, ValueAtZeroIsRightLimit) {
  EXPECT_DOUBLE_EQ(kKL.phi(0.0), 1.0);
  EXPECT_DOUBLE_EQ(kHellinger.phi(0.0), 2.0);
  EXPECT_DOUBLE_EQ(kChi2Plus.phi(0.0), 0.5);
  EXPECT_EQ(kChi2m.phi(0.0), kInf);
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const double lim = f.phi(1e-60);
    if (std::isfinite(f.phi(0.0))) {
      EXPECT_NEAR(f.phi(0.0), lim, 1e-5);
    } else {
      EXPECT_GT(lim, 20.0);
    }
  }
}

TEST(Phi, NamedMembersMatchTheirClassicalForms) {
  for (double x : {0.1, 0.5, 2.0, 7.0}) {
    EXPECT_NEAR(kHellinger.phi(x), 2.0 * std::pow(std::sqrt(x) - 1.0, 2), 1e-14);
    EXPECT_NEAR(kChi2m.phi(x), 0.5 * (x - 1.0) * (x - 1.0) / x, 1e-14);
    EXPECT_NEAR(kChi2Plus.phi(x), 0.5 * (x - 1.0) * (x - 1.0), 1e-14);
  }
}

TEST(PhiPrime, VanishesAtOne) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    EXPECT_EQ(f.phi_prime(1.0), 0.0);
  }
}

TEST(PhiPrimeInv, Examples) {
  EXPECT_NEAR(kKLm.phi_prime_inv(0.5), 2.0, 1e-15);
  EXPECT_NEAR(inverse_derivative_by_bisection(kKLm, 0.5), 2.0, 1e-7);
  EXPECT_DOUBLE_EQ(kChi2.phi_prime_inv(-3.0), -2.0);
}

TEST(PhiPrimeInv, AgreesWithBisectionOracle) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    for (double t = std::max(lo, f.phi_prime_at_lower() + 0.1); t < hi; t += 0.37) {
      const double x = f.phi_prime_inv(t);
      EXPECT_NEAR(x, inverse_derivative_by_bisection(f, t), 1e-6 * std::max(1.0, std::abs(x)));
    }
  }
}

TEST(PhiPrime, DomainViolationsAreBoundaryErrors) {
  EXPECT_THROW(kKL.phi_prime(0.0), BoundaryError);
  EXPECT_THROW(kKL.phi_prime(-1.0), BoundaryError);
  EXPECT_THROW(kKLm.phi_prime(kInf), BoundaryError);
  EXPECT_THROW(kKLm.phi_prime_inv(1.0), BoundaryError);
  EXPECT_THROW(kChi2Plus.phi_prime_inv(-1.0), BoundaryError);
  EXPECT_NO_THROW(kChi2.phi_prime(-5.0));
}

TEST(PhiPrime, RoundTripAndMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logx(std::log(0.05), std::log(20.0));
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    double prev_x = 0.0, prev_d = -kInf;
    for (int k = 0; k < 500; ++k) {
      const double x = std::exp(logx(rng));
      EXPECT_NEAR(f.phi_prime_inv(f.phi_prime(x)), x, 1e-12 * x);
    }
    for (double x = 0.05; x < 20.0; x *= 1.1) {
      const double d = f.phi_prime(x);
      if (prev_x > 0.0) EXPECT_GT(d, prev_d);
      prev_x = x;
      prev_d = d;
    }
  }
}

TEST(Conj, Examples) {
  for (const auto& f : all_families()) EXPECT_EQ(f.conj(0.0), 0.0);
  EXPECT_NEAR(kKLm.conj(0.5), 0.693147180559945, 1e-14);
  EXPECT_NEAR(legendre_numeric(kKLm, 0.5), 0.693147180559945, 1e-8);
  EXPECT_NEAR(kHellinger.conj(1.0), 2.0, 1e-14);
  EXPECT_NEAR(legendre_numeric(kHellinger, 1.0), 2.0, 1e-8);
  EXPECT_DOUBLE_EQ(kChi2.conj(1.0), 1.5);
  EXPECT_NEAR(legendre_numeric(kChi2, 1.0), 1.5, 1e-8);
}

TEST(Conj, ClosedFormsForNamedMembers) {
  for (double t : {-3.0, -0.5, 0.2, 0.45}) {
    EXPECT_NEAR(kKL.conj(t), std::exp(t) - 1.0, 1e-14);
    EXPECT_NEAR(kKLm.conj(t), -std::log(1.0 - t), 1e-14);
    EXPECT_NEAR(kChi2m.conj(t), 1.0 - std::sqrt(1.0 - 2.0 * t), 1e-14);
    EXPECT_NEAR(kHellinger.conj(t), 2.0 * t / (2.0 - t), 1e-14);
    EXPECT_NEAR(kChi2.conj(t), t + t * t / 2.0, 1e-14);
  }
  EXPECT_DOUBLE_EQ(kChi2Plus.conj(-3.0), -0.5);
  EXPECT_DOUBLE_EQ(kChi2Plus.conj(-1.0), -0.5);
  EXPECT_DOUBLE_EQ(kChi2Plus.conj(1.0), 1.5);
}

TEST(Conj, BeyondDomainIsInfiniteNotAnError) {
  EXPECT_EQ(kKLm.conj(1.0), kInf);
  EXPECT_EQ(kKLm.conj(1.5), kInf);
  EXPECT_EQ(kHellinger.conj(2.0), kInf);
  EXPECT_EQ(kChi2m.conj(0.6), kInf);
  // Closed conjugate: chi2_m stays finite at its endpoint b_conj = 1/2.
  EXPECT_DOUBLE_EQ(kChi2m.conj(0.5), 1.0);
  EXPECT_THROW(kKLm.conj_prime(1.0), BoundaryError);
  EXPECT_THROW(kKLm.conj_second(2.0), BoundaryError);
}

TEST(Conj, MatchesLegendreOracleForGenericGamma) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    for (int k = 0; k <= 40; ++k) {
      const double t = lo + (hi - lo) * k / 40.0;
      EXPECT_NEAR(f.conj(t), legendre_numeric(f, t), 1e-6);
    }
  }
}

TEST(LegendreNumeric, Examples) {
  EXPECT_NEAR(legendre_numeric(kKL, 0.0), 0.0, 1e-8);
  EXPECT_NEAR(legendre_numeric(kKLm, 0.9), -std::log(0.1), 1e-6);
  EXPECT_EQ(legendre_numeric(kKLm, 1.5), kInf);
  EXPECT_EQ(legendre_numeric(kKL, 0.0, LegendreGrid{1e-9, 1e6, 0}), -kInf);
}

TEST(LegendreNumeric, FlatRegionOfNonnegativeChiSquare) {
  EXPECT_NEAR(legendre_numeric(kChi2Plus, -4.0), -0.5, 1e-12);
}

TEST(Fenchel, InequalityAndEqualityOnRandomPairs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [tlo, thi] = conj_test_range(f);
    const double xlo = f.domain_mode() == DomainMode::full_line ? -5.0 : 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double x = xlo + (20.0 - xlo) * u(rng);
      const double t = tlo + (thi - tlo) * u(rng);
      const double px = f.phi(x);
      if (!std::isfinite(px)) continue;
      EXPECT_LE(x * t, px + f.conj(t) + 1e-10);
      if (x > f.a_phi() && x > 1e-3) {
        const double s = f.phi_prime(x);
        EXPECT_NEAR(x * s, px + f.conj(s), 1e-10 * std::max(1.0, std::abs(x * s)));
      }
    }
  }
}

TEST(Fenchel, BiconjugateRecoversPhi) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    // The t window must contain phi'(x) for every tested x.
    const double t_lo = f.phi_prime(0.1) - 1.0;
    const double t_hi = std::min(f.phi_prime(5.0) + 1.0,
                                 std::isfinite(f.b_conj()) ? f.b_conj() - 1e-3 : kInf);
    for (double x = 0.1; x <= 5.0; x += 0.35) {
      EXPECT_NEAR(biconjugate_numeric(f, x, t_lo, t_hi), f.phi(x), 1e-6);
    }
  }
}

TEST(Fenchel, ConjPrimeInvertsPhiPrime) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    for (double t = std::max(lo, f.phi_prime_at_lower() + 1e-3); t < hi; t += 0.13) {
      EXPECT_NEAR(f.conj_prime(t), f.phi_prime_inv(t), 1e-10);
    }
  }
}

TEST(Conj, DerivativesAgreeWithDifferenceQuotients) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    const double h = 1e-6;
    for (double t = lo + 0.01; t < hi - 0.01; t += 0.29) {
      if (f.gamma() > 1.0 && std::abs(t - f.phi_prime_at_lower()) < 0.01) continue;
      const double d1 = (f.conj(t + h) - f.conj(t - h)) / (2 * h);
      EXPECT_NEAR(f.conj_prime(t), d1, 1e-6 * std::max(1.0, std::abs(d1)));
      const double d2 = (f.conj_prime(t + h) - f.conj_prime(t - h)) / (2 * h);
      EXPECT_NEAR(f.conj_second(t), d2, 1e-5 * std::max(1.0, std::abs(d2)));
    }
  }
}

TEST(Conj, SecondDerivativePositiveExceptFlatRegion) {
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    for (double t = lo; t < hi; t += 0.1) {
      if (f.domain_mode() == DomainMode::nonnegative_extension && f.gamma() > 1.0 &&
          t <= f.phi_prime_at_lower()) {
        EXPECT_EQ(f.conj_second(t), 0.0);
      } else {
        EXPECT_GT(f.conj_second(t), 0.0);
      }
    }
  }
}

TEST(Conj, NondecreasingWhenDomainIsNonnegative) {
  for (const auto& f : all_families()) {
    if (f.a_phi() < 0.0) continue;
    SCOPED_TRACE(f.name());
    const auto [lo, hi] = conj_test_range(f);
    double prev = -kInf;
    for (double t = -50.0; t < hi; t += 0.05) {
      const double c = f.conj(t);
      EXPECT_GE(c, prev);
      prev = c;
    }
    (void)lo;
  }
}

TEST(Phi, MidpointConvexityOnRandomTriples) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 30.0);
  for (const auto& f : all_families()) {
    SCOPED_TRACE(f.name());
    for (int k = 0; k < 2000; ++k) {
      const double a = u(rng), b = u(rng), s = std::uniform_real_distribution<double>(0, 1)(rng);
      const double fa = f.phi(a), fb = f.phi(b);
      const double mid = f.phi(s * a + (1 - s) * b);
      if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
      EXPECT_LE(mid, s * fa + (1 - s) * fb + 1e-12 * (1.0 + std::abs(fa) + std::abs(fb)));
    }
  }
}

TEST(ExtendedReal, InfMinusInfIsAnError) {
  EXPECT_THROW(ext_add(kInf, -kInf), IndeterminateForm);
  EXPECT_EQ(ext_add(kInf, 3.0), kInf);
  EXPECT_EQ(ext_add(kInf, kInf), kInf);
  EXPECT_EQ(ext_mul(0.0, kInf), 0.0);
  EXPECT_EQ(ext_mul(2.0, -kInf), -kInf);
}

}  // namespace
}  // namespace phiproj
