#include "ehrcat/chain.hpp"
#include "ehrcat/cli.hpp"
#include "ehrcat/error.hpp"
#include "ehrcat/mc.hpp"
#include "ehrcat/oujump.hpp"
#include "ehrcat/quadrature.hpp"
#include "ehrcat/specfun.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace ehrcat::cli {

namespace {

using chain::ChainParams;
using oujump::DiffusionParams;

struct Suite {
  std::vector<CheckResult> out;

  // Runs f, which returns the observed discrepancy, and compares it to bound.
  void check(const std::string& name, double bound, const std::function<double()>& f) {
    CheckResult r{name, false, ""};
    try {
      const double err = f();
      r.passed = err <= bound;
      r.detail = "error " + format_number(err) + " bound " + format_number(bound);
    } catch (const std::exception& e) {
      r.detail = std::string("threw: ") + e.what();
    }
    out.push_back(std::move(r));
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void specfun_suite(Suite& s, double tol) {
  s.check("ln_gamma(5) = ln 24", tol, [] { return std::abs(specfun::ln_gamma(5.0) - std::log(24.0)); });
  s.check("ln_gamma(0.5) = ln sqrt(pi)", tol,
          [] { return std::abs(specfun::ln_gamma(0.5) - 0.5 * std::log(std::numbers::pi)); });
  s.check("beta_fn(2, 3) = 1/12", tol, [] { return rel(specfun::beta_fn(2.0, 3.0), 1.0 / 12.0); });
  s.check("D_0(z) = exp(-z^2/4)", tol, [] {
    double e = 0.0;
    for (double z : {-3.0, 0.0, 0.7, 5.0}) e = std::max(e, rel(specfun::parabolic_cylinder_D(0.0, z), std::exp(-z * z / 4)));
    return e;
  });
  s.check("D_p series and integral branches agree", tol, [] {
    double e = 0.0;
    for (double p : {-0.4167, -1.5, -3.0})
      for (double z : {-2.0, 1.0, 6.0})
        e = std::max(e, rel(specfun::parabolic_cylinder_D_series(p, z), specfun::parabolic_cylinder_D_integral(p, z)));
    return e;
  });
  s.check("D recurrence z D_p = D_{p+1} + p D_{p-1}", tol, [] {
    const double p = -1.7, z = 1.3;
    const double lhs = z * specfun::parabolic_cylinder_D(p, z);
    return rel(lhs, specfun::parabolic_cylinder_D(p + 1, z) + p * specfun::parabolic_cylinder_D(p - 1, z));
  });
  s.check("Psi two-Phi and integral forms agree", tol, [] {
    double e = 0.0;
    for (double b : {0.5, -1.5, -4.5})
      for (double x : {2.0, 12.0})
        e = std::max(e, rel(specfun::kummer_psi_two_phi(1.0, b, x), specfun::kummer_psi(1.0, b, x)));
    return e;
  });
  s.check("terminating 2F1 at z = 1 equals Chu-Vandermonde", tol, [] {
    const double a = 0.4167, c = 1.4167;
    const int m = 12;
    // (c-a)_m / (c)_m
    return rel(specfun::gauss_2f1_terminating(a, -m, c, 1.0),
               specfun::rising_factorial(c - a, m) / specfun::rising_factorial(c, m));
  });
}

void chain_suite(Suite& s, double tol) {
  const ChainParams p{10, 0.6, 0.6, 0.5};
  const ChainParams a{10, 0.2, 0.6, 0.5};
  s.check("q_cat closed form vs quadrature", tol, [&] {
    double e = 0.0;
    for (const auto& c : {p, a})
      for (int n = -10; n <= 10; ++n) e = std::max(e, std::abs(chain::q_cat(c, n) - chain::q_cat_quadrature(c, n)));
    return e;
  });
  s.check("q_cat sums to 1", tol, [&] { return std::abs(chain::q_cat_law(a).sum() - 1.0); });
  s.check("p_cat closed form vs ODE", tol, [&] {
    double e = 0.0;
    for (const auto& c : {p, a}) {
      const std::vector<double> grid = {0.1, 1.0, 5.0};
      const auto ode = chain::ode_transient(c, 6, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto row = chain::p_cat_closed_row(c, 6, grid[i]);
        for (int n = -10; n <= 10; ++n) e = std::max(e, std::abs(row[n] - ode[i][n]));
      }
    }
    return e;
  });
  s.check("p_cat closed form vs quadrature", tol, [&] {
    double e = 0.0;
    const auto row = chain::p_cat_closed_row(a, 6, 1.0);
    const auto quad = chain::p_cat_quadrature_row(a, 6, 1.0);
    for (int n = -10; n <= 10; ++n) e = std::max(e, std::abs(row[n] - quad[n]));
    return e;
  });
  s.check("mean_cat vs summed law", tol, [&] {
    return std::abs(chain::mean_cat(a, 6, 1.0) - chain::p_cat_closed_row(a, 6, 1.0).moment(1));
  });
  s.check("g_{j,0}(0) = xi", tol, [&] { return std::abs(chain::fpt_density_cat(p, 3, 0.0) - p.xi); });
  s.check("FPT mean: linear solve vs survival integral", tol, [&] {
    // E[T] = int_0^inf P(T > t) dt with P(T > t) = e^{-xi t} P(T~ > t)
    auto surv = [&](double t) {
      const double free_mass = quad::gauss_kronrod(
          [&](double u) { return chain::fpt_density_free_sym(p, 3, u); }, 0.0, t, {1e-14, 1e-12, 18}).value;
      return std::exp(-p.xi * t) * (1.0 - free_mass);
    };
    const double integral = quad::gauss_kronrod(surv, 0.0, 80.0, {1e-12, 1e-11, 14}).value;
    return std::abs(integral - chain::fpt_moments_linear(p, 3).mean);
  });
}

void diffusion_suite(Suite& s, double tol) {
  const DiffusionParams d{1.2, 0.0, 0.001, 0.5};
  s.check("f_cat series vs renewal quadrature", tol, [&] {
    double e = 0.0;
    for (double x : {-0.05, -0.02, 0.02, 0.05})
      for (double t : {0.5, 2.0}) e = std::max(e, std::abs(oujump::f_cat_sym(d, x, 0.06, t) - oujump::f_cat(d, x, 0.06, t)));
    return e;
  });
  s.check("W integrates to 1", tol, [] {
    const DiffusionParams b{0.5, 0.02, 0.001, 0.5};
    const double w = 0.6;
    const double lo = quad::gauss_kronrod([&](double x) { return oujump::W_cat(b, x); }, -w, 0.0).value;
    const double hi = quad::gauss_kronrod([&](double x) { return oujump::W_cat(b, x); }, 0.0, w).value;
    return std::abs(lo + hi - 1.0);
  });
  s.check("W symmetric for beta = 0", tol, [&] { return std::abs(oujump::W_cat(d, 0.03) - oujump::W_cat(d, -0.03)); });
  s.check("E[T_y] closed form vs integral of t g", tol, [&] {
    const double y = 0.03;
    const double integral = quad::gauss_kronrod(
        [&](double t) { return t * oujump::fpt_density_cat_sym(d, y, t); }, 0.0, 80.0, {1e-12, 1e-11, 16}).value;
    return std::abs(integral - oujump::mean_fpt_cat_sym(d, y));
  });
  s.check("E[T_y] symmetric form vs Laplace form", tol,
          [&] { return rel(oujump::mean_fpt_cat_sym(d, 0.03), oujump::mean_fpt_cat(d, 0.03)); });
  s.check("g(0 | y) at t = 0 equals xi", tol, [&] { return std::abs(oujump::fpt_density_cat_sym(d, 0.03, 0.0) - d.xi); });
  s.check("Talbot inversion vs closed FPT density", tol, [&] {
    double e = 0.0;
    for (double t : {0.5, 1.0, 2.0})
      e = std::max(e, std::abs(oujump::fpt_density_cat_talbot(d, 0.03, t) - oujump::fpt_density_cat_sym(d, 0.03, t)));
    return e;
  });
}

// |estimate - exact| in standard errors.
double zscore(double est, double se, double exact) {
  return se > 0.0 ? std::abs(est - exact) / se : (est == exact ? 0.0 : INFINITY);
}

void mc_suite(Suite& s) {
  const ChainParams p{10, 0.6, 0.6, 0.5};
  mc::SimConfig cfg;
  cfg.n_paths = 20000;
  s.check("MC chain law within 4 SE of closed form", 4.0, [&] {
    const auto est = mc::estimate_chain_law(p, 6, 1.0, cfg);
    const auto exact = chain::p_cat_closed_row(p, 6, 1.0);
    double z = 0.0;
    for (int n = -10; n <= 10; ++n)
      if (est.std_error[n + 10] > 0.0) z = std::max(z, zscore(est.law[n], est.std_error[n + 10], exact[n]));
    return z;
  });
  s.check("MC chain FPT mean within 4 SE", 4.0, [&] {
    const auto est = mc::estimate_fpt(p, 3, cfg);
    return zscore(est.mean.value, est.mean.std_error, chain::fpt_moments_linear(p, 3).mean);
  });
  s.check("MC diffusion moments within 4 SE", 4.0, [&] {
    const DiffusionParams d{0.5, 0.02, 0.001, 0.5};
    const auto est = mc::estimate_ou_moments(d, 0.06, 1.0, 0.1, cfg);
    return std::max(zscore(est.mean.value, est.mean.std_error, oujump::mean_cat_x(d, 0.06, 1.0)),
                    zscore(est.second_moment.value, est.second_moment.std_error, oujump::m2_cat_x(d, 0.06, 1.0)));
  });
}

} // namespace

std::vector<CheckResult> validate(const std::string& suite, double tol) {
  require(tol > 0.0, "validate: tol must be > 0");
  const bool all = suite == "all";
  if (!all && suite != "specfun" && suite != "chain" && suite != "diffusion" && suite != "mc")
    throw DomainError("unknown suite '" + suite + "'");
  Suite s;
  if (all || suite == "specfun") specfun_suite(s, tol);
  if (all || suite == "chain") chain_suite(s, tol);
  if (all || suite == "diffusion") diffusion_suite(s, tol);
  if (all || suite == "mc") mc_suite(s);
  return s.out;
}

} // namespace ehrcat::cli
