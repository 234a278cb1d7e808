#include "ehrcat/oujump.hpp"

#include "ehrcat/error.hpp"
#include "ehrcat/numeric.hpp"
#include "ehrcat/quadrature.hpp"
#include "ehrcat/specfun.hpp"
#include "ehrcat/talbot.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ehrcat::oujump {

using cplx = std::complex<double>;
using numeric::CompensatedSum;

namespace {

constexpr double kPi = std::numbers::pi;

void check_time_positive(double t, const char* what) {
  if (!(t > 0.0 && std::isfinite(t))) throw DomainError(std::string(what) + ": t must be > 0");
}

void require_beta_zero(const DiffusionParams& d, const char* what) {
  if (std::abs(d.beta) > 1e-12 * std::sqrt(d.nu))
    throw DomainError(std::string(what) + ": requires beta == 0");
}

double log_D(double p, double z) {
  const double v = specfun::parabolic_cylinder_D(p, z);
  if (!(v > 0.0)) throw ConvergenceError("parabolic cylinder value underflowed", v);
  return std::log(v);
}

double gaussian(double x, double mean, double var) {
  const double u = x - mean;
  return std::exp(-0.5 * u * u / var) / std::sqrt(2.0 * kPi * var);
}

double sgn_nonzero(double v) { return v < 0.0 ? -1.0 : 1.0; }

} // namespace

void DiffusionParams::validate() const {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
  require(std::isfinite(beta), "beta must be finite");
  require(nu > 0.0 && std::isfinite(nu), "nu must be > 0");
  require(xi >= 0.0 && std::isfinite(xi), "xi must be >= 0");
}

void ScalingMap::validate() const {
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be > 0");
  chain.validate();
}

DiffusionParams scale_params(const ScalingMap& m) {
  m.validate();
  DiffusionParams d;
  d.alpha = m.chain.lambda + m.chain.mu;
  d.nu = m.chain.N * m.epsilon * m.epsilon;
  d.beta = m.gamma() * d.nu / d.alpha;
  d.xi = m.chain.xi;
  return d;
}

// ------------------------------------------------------------ free process

double free_mean(const DiffusionParams& d, double y, double t) {
  return d.beta * -std::expm1(-d.alpha * t) + y * std::exp(-d.alpha * t);
}

double free_variance(const DiffusionParams& d, double t) {
  return 0.5 * d.nu * -std::expm1(-2.0 * d.alpha * t);
}

double f_free(const DiffusionParams& d, double x, double y, double t) {
  d.validate();
  check_time_positive(t, "f_free");
  return gaussian(x, free_mean(d, y, t), free_variance(d, t));
}

double W_free(const DiffusionParams& d, double x) {
  d.validate();
  const double u = x - d.beta;
  return std::exp(-u * u / d.nu) / std::sqrt(kPi * d.nu);
}

double f_free_laplace(const DiffusionParams& d, double x, double y, double s) {
  d.validate();
  require(s > 0.0, "f_free_laplace: s must be > 0");
  const double k = std::sqrt(2.0 / d.nu);
  const double p = -s / d.alpha;
  const double lo = std::min(x, y), hi = std::max(x, y);
  const double log_v = (s / d.alpha - 1.0) * std::log(2.0) - std::log(kPi * d.alpha * std::sqrt(d.nu)) +
                       specfun::ln_gamma(s / (2.0 * d.alpha)) +
                       specfun::ln_gamma(0.5 + s / (2.0 * d.alpha)) -
                       (x - y) * (x + y - 2.0 * d.beta) / (2.0 * d.nu) + log_D(p, -k * (lo - d.beta)) +
                       log_D(p, k * (hi - d.beta));
  return std::exp(log_v);
}

cplx f_free_laplace(const DiffusionParams& d, double x, double y, cplx s) {
  d.validate();
  const double k = std::sqrt(2.0 / d.nu);
  const cplx p = -s / d.alpha;
  const double lo = std::min(x, y), hi = std::max(x, y);
  const cplx log_pref = (s / d.alpha - 1.0) * std::log(2.0) - std::log(kPi * d.alpha * std::sqrt(d.nu)) +
                        specfun::ln_gamma(s / (2.0 * d.alpha)) +
                        specfun::ln_gamma(0.5 + s / (2.0 * d.alpha)) -
                        (x - y) * (x + y - 2.0 * d.beta) / (2.0 * d.nu);
  return std::exp(log_pref + specfun::log_parabolic_cylinder_D(p, -k * (lo - d.beta)) +
                  specfun::log_parabolic_cylinder_D(p, k * (hi - d.beta)));
}

// ------------------------------------------------------------ with resets

double W_cat(const DiffusionParams& d, double x) {
  d.validate();
  require(d.xi > 0.0, "W_cat: xi must be > 0 (use W_free)");
  const double k = std::sqrt(2.0 / d.nu);
  const double c = d.xi / (2.0 * d.alpha);
  const double p = -d.xi / d.alpha;
  const double sg = sgn_nonzero(x);
  const double log_v = (d.xi / d.alpha) * std::log(2.0) - std::log(kPi * std::sqrt(d.nu)) +
                       specfun::ln_gamma(1.0 + c) + specfun::ln_gamma(0.5 + c) -
                       x * (x - 2.0 * d.beta) / (2.0 * d.nu) + log_D(p, sg * d.beta * k) +
                       log_D(p, sg * (x - d.beta) * k);
  return std::exp(log_v);
}

double f_cat(const DiffusionParams& d, double x, double y, double t) {
  d.validate();
  check_time_positive(t, "f_cat");
  const double head = std::exp(-d.xi * t) * f_free(d, x, y, t);
  if (d.xi == 0.0) return head;
  // With w = e^{-xi tau} the renewal integral becomes
  // int_{e^{-xi t}}^1 f_free(x, tau(w) | 0) dw.
  auto integrand = [&](double w, double, double gap_right) {
    const double log_w = w > 0.5 ? std::log1p(-gap_right) : std::log(w);
    const double tau = -log_w / d.xi;
    if (tau <= 0.0) return 0.0;
    const double var = 0.5 * d.nu * -std::expm1(-2.0 * d.alpha * tau);
    if (var <= 0.0) return 0.0;
    return gaussian(x, d.beta * -std::expm1(-d.alpha * tau), var);
  };
  const auto r = quad::tanh_sinh(integrand, std::exp(-d.xi * t), 1.0, {1e-12, 1e-10, 15});
  return head + r.value;
}

double f_cat_sym(const DiffusionParams& d, double x, double y, double t, const SeriesControl& ctl) {
  d.validate();
  ctl.validate();
  require_beta_zero(d, "f_cat_sym");
  check_time_positive(t, "f_cat_sym");
  require(x != 0.0, "f_cat_sym: x must be nonzero");
  const double head = std::exp(-d.xi * t) * f_free(d, x, y, t);
  if (d.xi == 0.0) return head;

  // The stationary D-term equals the k-sum of the e^{-X} Psi(1, 1/2-k; X)
  // parts, so only the time-dependent parts remain:
  // K sum_k (1-c)_k/k! U^{k+1/2} e^{-Z} Psi(1, 1/2-k; Z), Z = X/U.
  const double c = d.xi / (2.0 * d.alpha);
  const double U = -std::expm1(-2.0 * d.alpha * t);
  const double Z = x * x / (d.nu * U);
  if (Z > 700.0) return head;
  const double K = d.xi / (2.0 * d.alpha * std::sqrt(kPi * d.nu));

  // forward recurrence is stable once k + 1/2 > Z
  const int direct = static_cast<int>(std::ceil(Z));
  double psi = 0.0;
  double coef = 1.0; // (1-c)_k / k!
  double upow = 1.0;
  CompensatedSum sum;
  int quiet = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    if (k > 0) {
      coef *= (k - c) / k;
      upow *= U;
    }
    if (k <= direct)
      psi = specfun::kummer_psi(1.0, 0.5 - k, Z);
    else
      psi = (1.0 - Z * psi) / (k + 0.5);
    const double term = coef * upow * psi;
    sum.add(term);
    if (std::abs(term) < ctl.rel_tol * std::abs(sum.value())) {
      if (++quiet == 3) return head + K * std::sqrt(U) * std::exp(-Z) * sum.value();
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("f_cat_sym: series did not converge within max_terms",
                         std::abs(coef * upow * psi / sum.value()));
}

double mean_cat_x(const DiffusionParams& d, double y, double t) {
  d.validate();
  require(t >= 0.0, "mean_cat_x: t must be >= 0");
  const double A = d.alpha + d.xi;
  return y * std::exp(-A * t) + d.alpha * d.beta / A * -std::expm1(-A * t);
}

double m2_cat_x(const DiffusionParams& d, double y, double t) {
  d.validate();
  require(t >= 0.0, "m2_cat_x: t must be >= 0");
  const double a = d.alpha, b = d.beta, v = d.nu, x = d.xi;
  const double A = x + a, B = x + 2.0 * a;
  CompensatedSum r;
  r.add(a * v / B);
  r.add(2.0 * a * a * b * b / (A * B));
  r.add(2.0 * b * (y - a * b / A) * std::exp(-A * t));
  r.add((y * y - 2.0 * b * y + 2.0 * a * b * b / B - a * v / B) * std::exp(-B * t));
  return r.value();
}

double var_cat_x(const DiffusionParams& d, double y, double t) {
  const double m = mean_cat_x(d, y, t);
  return m2_cat_x(d, y, t) - m * m;
}

// ------------------------------------------------------------ first passage

double fpt_laplace_free(const DiffusionParams& d, double y, double s) {
  d.validate();
  require(y != 0.0, "fpt_laplace_free: y must be nonzero");
  require(s > 0.0, "fpt_laplace_free: s must be > 0");
  const double k = std::sqrt(2.0 / d.nu);
  const double sg = sgn_nonzero(y);
  const double p = -s / d.alpha;
  return std::exp(y * (y - 2.0 * d.beta) / (2.0 * d.nu) + log_D(p, sg * (y - d.beta) * k) -
                  log_D(p, -sg * d.beta * k));
}

cplx fpt_laplace_free(const DiffusionParams& d, double y, cplx s) {
  d.validate();
  require(y != 0.0, "fpt_laplace_free: y must be nonzero");
  const double k = std::sqrt(2.0 / d.nu);
  const double sg = sgn_nonzero(y);
  const cplx p = -s / d.alpha;
  return std::exp(y * (y - 2.0 * d.beta) / (2.0 * d.nu) +
                  specfun::log_parabolic_cylinder_D(p, sg * (y - d.beta) * k) -
                  specfun::log_parabolic_cylinder_D(p, -sg * d.beta * k));
}

double fpt_laplace_free_sym(const DiffusionParams& d, double y, double s) {
  d.validate();
  require_beta_zero(d, "fpt_laplace_free_sym");
  require(y != 0.0, "fpt_laplace_free_sym: y must be nonzero");
  require(s > 0.0, "fpt_laplace_free_sym: s must be > 0");
  const double k = std::sqrt(2.0 / d.nu);
  const double h = s / (2.0 * d.alpha);
  return std::exp(h * std::log(2.0) - 0.5 * std::log(kPi) + specfun::ln_gamma(0.5 + h) +
                  y * y / (2.0 * d.nu) + log_D(-s / d.alpha, k * std::abs(y)));
}

double fpt_density_free_sym_x(const DiffusionParams& d, double y, double t) {
  d.validate();
  require_beta_zero(d, "fpt_density_free_sym_x");
  require(y != 0.0, "fpt_density_free_sym_x: y must be nonzero");
  require(t >= 0.0, "fpt_density_free_sym_x: t must be >= 0");
  if (t == 0.0) return 0.0;
  const double U = -std::expm1(-2.0 * d.alpha * t);
  const double e2 = std::exp(-2.0 * d.alpha * t);
  return 2.0 * d.alpha * std::abs(y) * std::exp(-d.alpha * t) /
         (std::sqrt(kPi * d.nu) * U * std::sqrt(U)) * std::exp(-y * y * e2 / (d.nu * U));
}

double fpt_density_cat_sym(const DiffusionParams& d, double y, double t) {
  const double g = fpt_density_free_sym_x(d, y, t);
  if (t == 0.0) return d.xi;
  if (d.xi == 0.0) return g;
  const double U = -std::expm1(-2.0 * d.alpha * t);
  const double arg = std::abs(y) * std::exp(-d.alpha * t) / std::sqrt(d.nu * U);
  return std::exp(-d.xi * t) * (g + d.xi * specfun::erf(arg));
}

double fpt_laplace_cat(const DiffusionParams& d, double y, double s) {
  require(s > 0.0, "fpt_laplace_cat: s must be > 0");
  if (d.xi == 0.0) return fpt_laplace_free(d, y, s);
  return (s * fpt_laplace_free(d, y, s + d.xi) + d.xi) / (s + d.xi);
}

cplx fpt_laplace_cat(const DiffusionParams& d, double y, cplx s) {
  if (d.xi == 0.0) return fpt_laplace_free(d, y, s);
  return (s * fpt_laplace_free(d, y, s + d.xi) + d.xi) / (s + d.xi);
}

double fpt_density_cat_talbot(const DiffusionParams& d, double y, double t, int n_nodes) {
  d.validate();
  require(y != 0.0, "fpt_density_cat_talbot: y must be nonzero");
  return talbot::invert([&](cplx s) { return fpt_laplace_cat(d, y, s); }, t, n_nodes);
}

double mean_fpt_cat(const DiffusionParams& d, double y) {
  d.validate();
  require(d.xi > 0.0, "mean_fpt_cat: xi must be > 0");
  return (1.0 - fpt_laplace_free(d, y, d.xi)) / d.xi;
}

double mean_fpt_cat_sym(const DiffusionParams& d, double y) {
  d.validate();
  require_beta_zero(d, "mean_fpt_cat_sym");
  require(d.xi > 0.0, "mean_fpt_cat_sym: xi must be > 0");
  require(y != 0.0, "mean_fpt_cat_sym: y must be nonzero");
  const double h = d.xi / (2.0 * d.alpha);
  const double k = std::sqrt(2.0 / d.nu);
  const double g = std::pow(2.0, h) / std::sqrt(kPi) * std::exp(specfun::ln_gamma(0.5 + h)) *
                   std::exp(y * y / (2.0 * d.nu)) *
                   specfun::parabolic_cylinder_D(-d.xi / d.alpha, k * std::abs(y));
  return (1.0 - g) / d.xi;
}

double m2_fpt_cat(const DiffusionParams& d, double y) {
  d.validate();
  require(d.xi > 0.0, "m2_fpt_cat: xi must be > 0");
  auto G = [&](double s) { return fpt_laplace_free(d, y, s); };
  auto central = [&](double h) { return (G(d.xi + h) - G(d.xi - h)) / (2.0 * h); };
  const double h = d.xi * 1e-5;
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  const double deriv = (4.0 * d2 - d1) / 3.0;
  const double gap = std::abs(deriv - d2);
  if (gap > 1e-5 * std::abs(deriv))
    throw ConvergenceError("m2_fpt_cat: derivative step failure", gap / std::abs(deriv));
  const double g = G(d.xi);
  return 2.0 / (d.xi * d.xi) * (1.0 - g + d.xi * deriv);
}

} // namespace ehrcat::oujump
