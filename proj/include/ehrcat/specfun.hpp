#ifndef EHRCAT_SPECFUN_HPP
#define EHRCAT_SPECFUN_HPP

// Special functions behind the closed-form laws: gamma/beta, terminating
// Gauss and Appell hypergeometric sums, Kummer functions, parabolic cylinder
// functions and erf.

#include "ehrcat/numeric.hpp"
#include "ehrcat/types.hpp"

#include <complex>

namespace ehrcat::specfun {

/// |z| above which D_p switches from the Kummer-series form to the integral
/// representation.
inline constexpr double kParabolicSwitch = 8.0;

/// x above which Psi(a, b; x), a > 0, switches from the two-Phi form to its
/// Laplace integral representation. The two-Phi form cancels roughly like
/// e^x x^{-b}, which even quad precision cannot absorb for large x and very
/// negative b.
inline constexpr double kPsiSwitch = 2.0;

double ln_gamma(double x);

/// Principal branch of log Gamma(z) (Lanczos, with reflection for Re z < 1/2).
std::complex<double> ln_gamma(std::complex<double> z);

/// 1/Gamma(x); exactly zero at the poles x = 0, -1, -2, ...
double rgamma(double x);
std::complex<double> rgamma(std::complex<double> z);

double beta_fn(double x, double y);
double ln_beta(double x, double y);

/// Pochhammer symbol (a)_n.
double rising_factorial(double a, unsigned n);

/// Gauss 2F1(a, b; c; z) for b a non-positive integer, where the series is a
/// polynomial in z and valid for every real z. For 0 < z <= 1 with c > 0 and
/// c - a > 0 the Pfaff-transformed sum is used, whose terms are all positive.
double gauss_2f1_terminating(double a, double b, double c, double z);
numeric::SignedLog gauss_2f1_terminating_log(double a, double b, double c, double z);

/// Appell F1(a, b, c, d; x, y) for b and c non-positive integers (finite
/// double sum, valid for all real x, y).
double appell_f1_terminating(double a, double b, double c, double d, double x, double y);
numeric::SignedLog appell_f1_terminating_log(double a, double b, double c, double d, double x,
                                             double y);

/// Confluent hypergeometric Phi(a, c; x) = 1F1(a; c; x) by its power series.
double kummer_phi(double a, double c, double x, const SeriesControl& ctl = {});
std::complex<double> kummer_phi(std::complex<double> a, double c, std::complex<double> x,
                                const SeriesControl& ctl = {});

/// Kummer (Tricomi) function of the second kind, non-integer b, x > 0.
double kummer_psi(double a, double b, double x);

/// The two-Phi defining combination, evaluated in quad precision for any x.
double kummer_psi_two_phi(double a, double b, double x);

/// Parabolic cylinder function D_p(z) for p <= 0.
double parabolic_cylinder_D(double p, double z);

/// Kummer-series form of D_p, quad precision (any z; slow for large |z|).
double parabolic_cylinder_D_series(double p, double z);

/// Integral representation of D_p, p < 0.
double parabolic_cylinder_D_integral(double p, double z);

/// D_p(z) for complex order and real argument through the Kummer-series
/// form, summed in complex quad precision. Intended for |z| within the
/// series branch.
std::complex<double> parabolic_cylinder_D(std::complex<double> p, double z);

/// log D_p(z) (some branch), for orders where D_p itself leaves double range.
std::complex<double> log_parabolic_cylinder_D(std::complex<double> p, double z);

double erf(double x);
double erfc(double x);

} // namespace ehrcat::specfun

#endif // EHRCAT_SPECFUN_HPP
