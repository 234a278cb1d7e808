#include "ehrcat/error.hpp"
#include "ehrcat/quadrature.hpp"
#include "ehrcat/specfun.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ehrcat;
using namespace ehrcat::specfun;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Brute-force F1 double sum in long double.
long double f1_brute(double a, int b, int c, double d, double x, double y) {
  long double total = 0.0L;
  for (int m = 0; m <= -b; ++m)
    for (int n = 0; n <= -c; ++n) {
      long double t = 1.0L;
      for (int k = 0; k < m + n; ++k) t *= (a + k) / (d + k);
      for (int k = 0; k < m; ++k) t *= (b + k) * (long double)x / (k + 1);
      for (int k = 0; k < n; ++k) t *= (c + k) * (long double)y / (k + 1);
      total += t;
    }
  return total;
}

} // namespace

TEST_CASE("ln_gamma") {
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rel(ln_gamma(5.0), std::log(24.0)) < 1e-14);
  CHECK(rel(ln_gamma(0.5), oracle::ln_gamma_half) < 1e-13);
  CHECK(rel(ln_gamma(1e3), oracle::ln_gamma_1e3) < 1e-13);
  CHECK(rel(ln_gamma(1e-3), oracle::ln_gamma_1em3) < 1e-13);
  CHECK_THROWS_AS(ln_gamma(0.0), DomainError);
  CHECK_THROWS_AS(ln_gamma(-1.5), DomainError);
  for (double x = 0.1; x <= 100.0; x *= 1.37)
    CHECK(std::abs(ln_gamma(x + 1) - ln_gamma(x) - std::log(x)) < 1e-12);
}

TEST_CASE("complex ln_gamma agrees with the real one on the axis") {
  for (double x : {0.3, 1.7, 12.5})
    CHECK(std::abs(ln_gamma(std::complex<double>(x, 0.0)) - ln_gamma(x)) < 1e-13);
  // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
  const double y = 2.3;
  const double lhs = 2.0 * ln_gamma(std::complex<double>(0.5, y)).real();
  CHECK(std::abs(lhs - std::log(std::numbers::pi / std::cosh(std::numbers::pi * y))) < 1e-12);
}

TEST_CASE("beta function") {
  CHECK(beta_fn(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(beta_fn(2, 3), 1.0 / 12.0) < 1e-14);
  CHECK(rel(beta_fn(21, 0.4167), oracle::beta_21_04167) < 1e-12);
  const double q = quad::tanh_sinh(
      [](double t, double, double right) { return std::pow(t, 20) * std::pow(right, -0.5833); }, 0.0, 1.0).value;
  CHECK(rel(beta_fn(21, 0.4167), q) < 1e-10);
  CHECK_THROWS_AS(beta_fn(0.0, 1.0), DomainError);
}

TEST_CASE("rising factorial") {
  CHECK(rising_factorial(7.3, 0) == 1.0);
  CHECK(rising_factorial(3, 2) == 12.0);
  CHECK(rising_factorial(-2, 3) == 0.0);
}

TEST_CASE("terminating 2F1") {
  CHECK(gauss_2f1_terminating(0.3, 0, 1.2, 5.0) == 1.0);
  CHECK(gauss_2f1_terminating(1, -1, 1, 0.37) == doctest::Approx(1 - 0.37).epsilon(1e-15));
  for (std::size_t i = 0; i < std::size(oracle::f21_values); ++i) {
    const auto* a = oracle::f21_args[i];
    CHECK(rel(gauss_2f1_terminating(a[0], a[1], a[2], a[3]), oracle::f21_values[i]) < 1e-11);
  }
  CHECK_THROWS_AS(gauss_2f1_terminating(0.3, -1.5, 1.2, 0.5), DomainError);
}

TEST_CASE("terminating 2F1 equals the alternating finite sum") {
  // sum_l (-1)^l C(m,l) e^{-d l t} / (c + d l) = F(c/d, -m; 1 + c/d; e^{-d t}) / c
  for (int m : {3, 10, 20})
    for (double t : {0.1, 1.0, 3.0}) {
      const double c = 0.5, d = 1.2;
      long double s = 0.0L, binom = 1.0L;
      for (int l = 0; l <= m; ++l) {
        s += (l % 2 ? -1.0L : 1.0L) * binom * std::exp(-(long double)d * l * t) / (c + d * l);
        binom = binom * (m - l) / (l + 1);
      }
      const double f = gauss_2f1_terminating(c / d, -m, 1 + c / d, std::exp(-d * t)) / c;
      CHECK(std::abs(f - (double)s) <= 1e-11 * std::abs((double)s) + 1e-15);
    }
}

TEST_CASE("terminating Appell F1") {
  CHECK(appell_f1_terminating(0.4, 0, 0, 1.3, 2.0, -5.0) == 1.0);
  CHECK(appell_f1_terminating(0.4, -1, 0, 1.3, 2.0, -5.0) == doctest::Approx(1 - 0.4 / 1.3 * 2.0).epsilon(1e-15));
  CHECK(rel(appell_f1_terminating(0.4167, -3, -2, 6.4167, 1.0 / 3.0, 3.0), oracle::appell_f1_ref) < 1e-11);
  for (double a : {0.05, 0.4167, 1.25})
    for (int b : {-1, -4, -9})
      for (int c : {0, -3, -10})
        for (double x : {-3.0, -1.0 / 3.0, 0.7}) {
          const double d = a + 21 - 2 * 3;
          const double y = -1.0 / x;
          const double ref = (double)f1_brute(a, b, c, d, x, y);
          CHECK(std::abs(appell_f1_terminating(a, b, c, d, x, y) - ref) <= 1e-11 * std::abs(ref) + 1e-14);
        }
  CHECK_THROWS_AS(appell_f1_terminating(0.4, -1.5, 0, 1.3, 2.0, -5.0), DomainError);
}

TEST_CASE("Kummer Phi") {
  CHECK(kummer_phi(0.3, 1.7, 0.0) == 1.0);
  CHECK(rel(kummer_phi(1, 1, 2.5), std::exp(2.5)) < 1e-12);
  for (double z : {0.3, 1.0, 2.2}) {
    const double ref = std::sqrt(std::numbers::pi) / (2 * z) * specfun::erf(z);
    CHECK(rel(kummer_phi(0.5, 1.5, -z * z), ref) < 1e-12);
  }
  CHECK(rel(kummer_phi(-0.5, 1.5, 2.0), oracle::kummer_phi_m05_15_2) < 1e-12);
  CHECK(rel(kummer_phi(1, 0.5, 40.0), oracle::kummer_phi_1_05_40) < 1e-12);
  CHECK_THROWS_AS(kummer_phi(1, 0.5, 40.0, {1e-12, 5}), ConvergenceError);
}

TEST_CASE("Kummer Psi") {
  for (std::size_t i = 0; i < std::size(oracle::psi_values); ++i) {
    const auto* a = oracle::psi_args[i];
    CHECK(rel(kummer_psi(1.0, a[0], a[1]), oracle::psi_values[i]) < 1e-11);
  }
  CHECK(std::abs(kummer_psi(1, 0.5, 100.0) * 100.0 - 1.0) < 0.02);
  // Laplace-integral oracle, a = 1
  const double q = quad::tanh_sinh([](double t) { return std::exp(-2 * t) * std::pow(1 + t, -2.5); }, 0.0, 40.0).value;
  CHECK(rel(kummer_psi(1, -0.5, 2.0), q) < 1e-12);
  CHECK(rel(kummer_psi(1, 0.5, 1.0), kummer_psi_two_phi(1, 0.5, 1.0)) < 1e-14);
  // the two branches meet at the switch point
  for (double b : {0.5, -3.5, -12.5})
    for (double a : {0.5, 1.0})
      CHECK(rel(kummer_psi_two_phi(a, b, kPsiSwitch + 0.5), kummer_psi(a, b, kPsiSwitch + 0.5)) < 1e-12);
  CHECK_THROWS_AS(kummer_psi(1, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(kummer_psi(1, 0.5, 0.0), DomainError);
}

TEST_CASE("parabolic cylinder D") {
  for (std::size_t i = 0; i < std::size(oracle::pcfd_values); ++i) {
    const auto* a = oracle::pcfd_args[i];
    CHECK(rel(parabolic_cylinder_D(a[0], a[1]), oracle::pcfd_values[i]) < 1e-11);
  }
  for (double z : {-4.0, 0.0, 1.5, 9.0}) CHECK(rel(parabolic_cylinder_D(0.0, z), std::exp(-z * z / 4)) < 1e-13);
  for (double p : {-0.2, -1.0, -2.7}) {
    const double ref = std::sqrt(std::numbers::pi) * std::pow(2.0, p / 2) / std::tgamma((1 - p) / 2);
    CHECK(rel(parabolic_cylinder_D(p, 0.0), ref) < 1e-13);
  }
  for (double z : {-2.0, 0.5, 3.0, 10.0}) {
    const double ref = std::exp(z * z / 4) * std::sqrt(std::numbers::pi / 2) * specfun::erfc(z / std::sqrt(2.0));
    CHECK(rel(parabolic_cylinder_D(-1.0, z), ref) < 1e-11);
  }
  CHECK_THROWS_AS(parabolic_cylinder_D(0.5, 1.0), DomainError);
}

TEST_CASE("parabolic cylinder branch agreement at the switch") {
  for (double p : {-0.1, -0.5, -1.5, -3.0})
    for (double z : {kParabolicSwitch, -kParabolicSwitch})
      CHECK(rel(parabolic_cylinder_D_series(p, z), parabolic_cylinder_D_integral(p, z)) < 1e-9);
}

TEST_CASE("parabolic cylinder recurrence") {
  for (double p = -2.9; p < -1.0; p += 0.3)
    for (double z = -5.0; z <= 5.0; z += 1.25) {
      const double a = parabolic_cylinder_D(p + 1, z), b = z * parabolic_cylinder_D(p, z), c = p * parabolic_cylinder_D(p - 1, z);
      CHECK(std::abs(a - b + c) <= 1e-9 * std::max({std::abs(a), std::abs(b), std::abs(c)}));
    }
}

TEST_CASE("complex-order D matches the real one") {
  for (double p : {-0.3, -1.7})
    for (double z : {-3.0, 0.4, 5.0}) {
      const auto v = parabolic_cylinder_D(std::complex<double>(p, 0.0), z);
      CHECK(rel(v.real(), parabolic_cylinder_D(p, z)) < 1e-12);
      CHECK(std::abs(v.imag()) < 1e-14 * std::abs(v.real()));
    }
  // conjugate symmetry in the order
  const auto a = parabolic_cylinder_D(std::complex<double>(-0.8, 3.0), 1.2);
  const auto b = parabolic_cylinder_D(std::complex<double>(-0.8, -3.0), 1.2);
  CHECK(std::abs(a - std::conj(b)) < 1e-13 * std::abs(a));
}

TEST_CASE("erf") {
  CHECK(specfun::erf(0.0) == 0.0);
  for (double x : {0.1, 0.9, 2.5}) CHECK(specfun::erf(-x) == -specfun::erf(x));
  const double q = quad::gauss_kronrod([](double t) { return 2 / std::sqrt(std::numbers::pi) * std::exp(-t * t); }, 0, 1).value;
  CHECK(std::abs(specfun::erf(1.0) - q) < 1e-12);
  CHECK(std::abs(specfun::erfc(3.0) - (1 - specfun::erf(3.0))) < 1e-15);
}
