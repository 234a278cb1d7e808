#include "ehrcat/specfun.hpp"

#include "ehrcat/error.hpp"
#include "ehrcat/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace ehrcat::specfun {

namespace {

using quad_t = boost::multiprecision::float128;
using cquad_t = boost::multiprecision::complex128;
using cplx = std::complex<double>;
using numeric::SignedLog;
using numeric::SignedLogSum;

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Power series of Phi(a, c; x). T is the accumulation type; the stopping
// rule requires both a negligible term and a contracting term ratio.
template <class T, class A, class C, class X>
T phi_series(const A& a, const C& c, const X& x, double rel_tol, int max_terms) {
  using std::abs;
  using R = decltype(abs(T(1)));
  T term = T(1);
  T sum = T(1);
  for (int n = 0; n < max_terms; ++n) {
    const T an = T(a) + T(n);
    const T cn = T(c) + T(n);
    if (an == T(0)) return sum;
    const T ratio = an * T(x) / (cn * T(n + 1));
    term *= ratio;
    sum += term;
    if (abs(term) <= R(rel_tol) * abs(sum) && abs(ratio) < R(0.5)) return sum;
  }
  throw ConvergenceError("kummer_phi: series did not converge within max_terms",
                         static_cast<double>(abs(term) / abs(sum)));
}

quad_t rgamma_q(const quad_t& x) {
  if (x <= 0 && x == boost::multiprecision::floor(x)) return quad_t(0);
  return quad_t(1) / boost::math::tgamma(x);
}

// log Gamma in complex quad precision: shift to Re z >= 25, Stirling series,
// reflection below Re z = 1/2. The branch is irrelevant to callers, which
// only exponentiate.
cquad_t ln_gamma_cq(cquad_t z) {
  const quad_t pi = boost::math::constants::pi<quad_t>();
  if (real(z) < quad_t(0.5)) {
    const cquad_t one(quad_t(1));
    return log(cquad_t(pi)) - log(sin(pi * z)) - ln_gamma_cq(one - z);
  }
  cquad_t shift(quad_t(0));
  while (real(z) < quad_t(25)) {
    shift += log(z);
    z += quad_t(1);
  }
  // B_{2k} / (2k (2k-1)), k = 1..15
  static const std::array<quad_t, 15> coef = [] {
    const std::array<std::pair<double, double>, 15> b = {{{1, 6},
                                                          {-1, 30},
                                                          {1, 42},
                                                          {-1, 30},
                                                          {5, 66},
                                                          {-691, 2730},
                                                          {7, 6},
                                                          {-3617, 510},
                                                          {43867, 798},
                                                          {-174611, 330},
                                                          {854513, 138},
                                                          {-236364091, 2730},
                                                          {8553103, 6},
                                                          {-23749461029.0, 870},
                                                          {8615841276005.0, 14322}}};
    std::array<quad_t, 15> c{};
    for (int k = 1; k <= 15; ++k)
      c[k - 1] = quad_t(b[k - 1].first) / quad_t(b[k - 1].second) / quad_t(2 * k * (2 * k - 1));
    return c;
  }();
  const cquad_t inv = cquad_t(quad_t(1)) / z;
  const cquad_t inv2 = inv * inv;
  cquad_t series(quad_t(0));
  cquad_t pw = inv;
  for (const auto& c : coef) {
    series += c * pw;
    pw *= inv2;
  }
  return (z - quad_t(0.5)) * log(z) - z + log(2 * pi) / 2 + series - shift;
}

cquad_t rgamma_cq(const cquad_t& z) {
  if (imag(z) == 0 && real(z) <= 0 && real(z) == boost::multiprecision::floor(real(z)))
    return cquad_t(quad_t(0));
  return exp(-ln_gamma_cq(z));
}

// Lanczos coefficients, g = 7, n = 9.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx ln_gamma_lanczos(cplx z) {
  z -= 1.0;
  cplx x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z), stable for large |Im z|.
cplx log_sin_pi(cplx z) {
  if (std::abs(z.imag()) < 1.0) return std::log(std::sin(kPi * z));
  if (z.imag() > 0.0) {
    const cplx i(0.0, 1.0);
    return std::log(cplx(0.0, 0.5)) - i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z));
  }
  return std::conj(log_sin_pi(std::conj(z)));
}

} // namespace

// ---------------------------------------------------------------- gamma/beta

double ln_gamma(double x) {
  require(x > 0.0 && std::isfinite(x), "ln_gamma: argument must be positive");
  return boost::math::lgamma(x);
}

cplx ln_gamma(cplx z) {
  if (z.real() < 0.5) {
    require(!(z.imag() == 0.0 && is_nonpositive_integer(z.real())), "ln_gamma: pole");
    return std::log(kPi) - log_sin_pi(z) - ln_gamma_lanczos(1.0 - z);
  }
  return ln_gamma_lanczos(z);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / boost::math::tgamma(x);
}

cplx rgamma(cplx z) {
  if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) return 0.0;
  return std::exp(-ln_gamma(z));
}

double ln_beta(double x, double y) {
  require(x > 0.0 && y > 0.0, "beta_fn: arguments must be positive");
  return boost::math::lgamma(x) + boost::math::lgamma(y) - boost::math::lgamma(x + y);
}

double beta_fn(double x, double y) { return std::exp(ln_beta(x, y)); }

double rising_factorial(double a, unsigned n) {
  double r = 1.0;
  for (unsigned k = 0; k < n; ++k) r *= a + static_cast<double>(k);
  return r;
}

// ------------------------------------------------------ terminating 2F1, F1

SignedLog gauss_2f1_terminating_log(double a, double b, double c, double z) {
  require(is_nonpositive_integer(b), "gauss_2f1_terminating: b must be a non-positive integer");
  const long m = static_cast<long>(-b);
  for (long k = 0; k < m; ++k)
    require(c + static_cast<double>(k) != 0.0,
            "gauss_2f1_terminating: c hits a non-positive integer before termination");

  SignedLogSum sum;
  if (z > 0.0 && z <= 1.0 && c > 0.0 && c - a > 0.0) {
    // Pfaff form (1-z)^m 2F1(c-a, -m; c; z/(z-1)): every term is positive.
    // Written as sum_k (c-a)_k/(c)_k C(m,k) z^k (1-z)^(m-k) so z = 1 is exact.
    const double log_1mz = std::log1p(-z);
    double log_r = 0.0;
    for (long k = 0; k <= m; ++k) {
      if (k > 0) log_r += std::log(c - a + static_cast<double>(k - 1)) - std::log(c + static_cast<double>(k - 1));
      if (k < m && z == 1.0) continue;
      sum.add(log_r + numeric::log_binomial(m, k) + numeric::log_pow(z, k) +
                  (k < m ? static_cast<double>(m - k) * log_1mz : 0.0),
              1);
    }
    return sum.result();
  }
  double log_t = 0.0;
  int sign = 1;
  sum.add(log_t, sign);
  if (z == 0.0) return sum.result();
  const double log_z = std::log(std::abs(z));
  const int sign_z = sign_of(z);
  for (long k = 0; k < m; ++k) {
    const double kd = static_cast<double>(k);
    const double ak = a + kd;
    if (ak == 0.0) break;
    const double bk = b + kd;
    const double ck = c + kd;
    log_t += std::log(std::abs(ak)) + std::log(std::abs(bk)) - std::log(std::abs(ck)) -
             std::log(kd + 1.0) + log_z;
    sign *= sign_of(ak) * sign_of(bk) * sign_of(ck) * sign_z;
    sum.add(log_t, sign);
  }
  return sum.result();
}

double gauss_2f1_terminating(double a, double b, double c, double z) {
  return gauss_2f1_terminating_log(a, b, c, z).value();
}

SignedLog appell_f1_terminating_log(double a, double b, double c, double d, double x, double y) {
  require(is_nonpositive_integer(b) && is_nonpositive_integer(c),
          "appell_f1_terminating: b and c must be non-positive integers");
  const long mb = static_cast<long>(-b);
  const long mc = static_cast<long>(-c);
  const long ms = mb + mc;
  for (long s = 0; s < ms; ++s)
    require(d + static_cast<double>(s) != 0.0,
            "appell_f1_terminating: d hits a non-positive integer before termination");

  // (a)_s / (d)_s for s = 0..mb+mc.
  std::vector<SignedLog> ratio(static_cast<std::size_t>(ms + 1));
  ratio[0] = {0.0, 1};
  for (long s = 1; s <= ms; ++s) {
    const double as = a + static_cast<double>(s - 1);
    const double ds = d + static_cast<double>(s - 1);
    const SignedLog& prev = ratio[static_cast<std::size_t>(s - 1)];
    if (prev.sign == 0 || as == 0.0) {
      ratio[static_cast<std::size_t>(s)] = {};
      continue;
    }
    ratio[static_cast<std::size_t>(s)] = {
        prev.log_abs + std::log(std::abs(as)) - std::log(std::abs(ds)),
        prev.sign * sign_of(as) * sign_of(ds)};
  }

  // (b)_m x^m / m! and (c)_n y^n / n!
  auto one_variable = [](double p, long count, double v) {
    std::vector<SignedLog> out(static_cast<std::size_t>(count + 1));
    out[0] = {0.0, 1};
    for (long k = 1; k <= count; ++k) {
      const SignedLog& prev = out[static_cast<std::size_t>(k - 1)];
      const double pk = p + static_cast<double>(k - 1);
      if (prev.sign == 0 || v == 0.0) {
        out[static_cast<std::size_t>(k)] = {};
        continue;
      }
      out[static_cast<std::size_t>(k)] = {
          prev.log_abs + std::log(std::abs(pk)) + std::log(std::abs(v)) -
              std::log(static_cast<double>(k)),
          prev.sign * sign_of(pk) * sign_of(v)};
    }
    return out;
  };
  const auto bx = one_variable(b, mb, x);
  const auto cy = one_variable(c, mc, y);

  SignedLogSum sum;
  for (long m = 0; m <= mb; ++m) {
    const SignedLog& tm = bx[static_cast<std::size_t>(m)];
    if (tm.sign == 0) continue;
    for (long n = 0; n <= mc; ++n) {
      const SignedLog& tn = cy[static_cast<std::size_t>(n)];
      const SignedLog& r = ratio[static_cast<std::size_t>(m + n)];
      if (tn.sign == 0 || r.sign == 0) continue;
      sum.add(tm.log_abs + tn.log_abs + r.log_abs, tm.sign * tn.sign * r.sign);
    }
  }
  return sum.result();
}

double appell_f1_terminating(double a, double b, double c, double d, double x, double y) {
  return appell_f1_terminating_log(a, b, c, d, x, y).value();
}

// ------------------------------------------------------------------- Kummer

double kummer_phi(double a, double c, double x, const SeriesControl& ctl) {
  ctl.validate();
  require(!is_nonpositive_integer(c), "kummer_phi: c must not be a non-positive integer");
  return phi_series<double>(a, c, x, ctl.rel_tol, ctl.max_terms);
}

cplx kummer_phi(cplx a, double c, cplx x, const SeriesControl& ctl) {
  ctl.validate();
  require(!is_nonpositive_integer(c), "kummer_phi: c must not be a non-positive integer");
  return phi_series<cplx>(a, c, x, ctl.rel_tol, ctl.max_terms);
}

double kummer_psi_two_phi(double a, double b, double x) {
  require(x > 0.0, "kummer_psi: x must be positive");
  require(b != std::floor(b), "kummer_psi: integer b (logarithmic case) is not supported");
  const quad_t qa(a), qb(b), qx(x);
  constexpr double tol = 1e-33;
  constexpr int max_terms = 20000;
  const quad_t g1 = boost::math::tgamma(quad_t(1) - qb) * rgamma_q(qa - qb + 1);
  const quad_t g2 = boost::math::tgamma(qb - 1) * rgamma_q(qa);
  quad_t result = g1 * phi_series<quad_t>(qa, qb, qx, tol, max_terms);
  if (g2 != 0)
    result += g2 * boost::multiprecision::pow(qx, quad_t(1) - qb) *
              phi_series<quad_t>(qa - qb + 1, quad_t(2) - qb, qx, tol, max_terms);
  return static_cast<double>(result);
}

double kummer_psi(double a, double b, double x) {
  require(x > 0.0, "kummer_psi: x must be positive");
  require(b != std::floor(b), "kummer_psi: integer b (logarithmic case) is not supported");
  if (x <= kPsiSwitch || a <= 0.0) return kummer_psi_two_phi(a, b, x);
  // Psi(a,b;x) = 1/Gamma(a) * int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt
  const double log_norm = -boost::math::lgamma(a);
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return std::exp(log_norm - x * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t));
  };
  return quad::tanh_sinh(integrand, 0.0, 60.0 / x, {0.0, 1e-14, 15}).value;
}

// ------------------------------------------------------ parabolic cylinder

double parabolic_cylinder_D_series(double p, double z) {
  require(p <= 0.0, "parabolic_cylinder_D: order must be <= 0");
  const quad_t qp(p), qz(z);
  const quad_t x = qz * qz / 2;
  constexpr double tol = 1e-34;
  constexpr int max_terms = 20000;
  const quad_t half(0.5);
  const quad_t sqrt_pi = boost::multiprecision::sqrt(boost::math::constants::pi<quad_t>());
  const quad_t first = sqrt_pi * rgamma_q((quad_t(1) - qp) / 2) *
                       phi_series<quad_t>(-qp / 2, half, x, tol, max_terms);
  quad_t second = 0;
  const quad_t rg = rgamma_q(-qp / 2);
  if (rg != 0 && z != 0.0)
    second = boost::multiprecision::sqrt(quad_t(2)) * sqrt_pi * qz * rg *
             phi_series<quad_t>((quad_t(1) - qp) / 2, quad_t(1.5), x, tol, max_terms);
  const quad_t pref = boost::multiprecision::pow(quad_t(2), qp / 2) * boost::multiprecision::exp(-x / 2);
  return static_cast<double>(pref * (first - second));
}

double parabolic_cylinder_D_integral(double p, double z) {
  require(p < 0.0, "parabolic_cylinder_D_integral: order must be negative");
  // D_p(z) = e^{-z^2/4}/Gamma(-p) int_0^inf t^{-p-1} e^{-t^2/2 - z t} dt,
  // written with the exponent completed around t = -z.
  const double log_norm = -boost::math::lgamma(-p) + z * z / 4.0;
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double u = t + z;
    return std::exp(log_norm + (-p - 1.0) * std::log(t) - 0.5 * u * u);
  };
  const double upper = std::max(0.0, -z) + 40.0;
  if (z < -2.0) {
    // Split at the Gaussian peak so both pieces are single-humped.
    const double peak = -z;
    return quad::tanh_sinh(integrand, 0.0, peak, {0.0, 1e-14, 15}).value +
           quad::tanh_sinh(integrand, peak, upper, {0.0, 1e-14, 15}).value;
  }
  return quad::tanh_sinh(integrand, 0.0, upper, {0.0, 1e-14, 15}).value;
}

double parabolic_cylinder_D(double p, double z) {
  require(p <= 0.0, "parabolic_cylinder_D: order must be <= 0");
  if (p == 0.0) return std::exp(-z * z / 4.0);
  if (std::abs(z) <= kParabolicSwitch) return parabolic_cylinder_D_series(p, z);
  return parabolic_cylinder_D_integral(p, z);
}

cplx log_parabolic_cylinder_D(cplx p, double z) {
  // Quad precision: the two Phi terms cancel by many digits once |p| grows.
  constexpr double tol = 1e-34;
  constexpr int max_terms = 100000;
  const cquad_t qp(quad_t(p.real()), quad_t(p.imag()));
  const quad_t qz(z);
  const quad_t x = qz * qz / 2;
  const quad_t pi = boost::math::constants::pi<quad_t>();
  const cquad_t half(quad_t(0.5));
  const cquad_t a1 = -qp / 2;
  const cquad_t a2 = (cquad_t(quad_t(1)) - qp) / 2;
  const cquad_t first = boost::multiprecision::sqrt(pi) * rgamma_cq(a2) *
                        phi_series<cquad_t>(a1, half, cquad_t(x), tol, max_terms);
  cquad_t second(quad_t(0));
  if (z != 0.0) {
    const cquad_t rg = rgamma_cq(a1);
    if (rg != cquad_t(quad_t(0)))
      second = boost::multiprecision::sqrt(2 * pi) * qz * rg *
               phi_series<cquad_t>(a2, cquad_t(quad_t(1.5)), cquad_t(x), tol, max_terms);
  }
  const cquad_t v = qp / 2 * log(quad_t(2)) - x / 2 + log(first - second);
  return {static_cast<double>(real(v)), static_cast<double>(imag(v))};
}

cplx parabolic_cylinder_D(cplx p, double z) { return std::exp(log_parabolic_cylinder_D(p, z)); }

// --------------------------------------------------------------------- erf

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

} // namespace ehrcat::specfun
