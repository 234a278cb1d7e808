#ifndef EHRCAT_OUJUMP_HPP
#define EHRCAT_OUJUMP_HPP

// Ornstein-Uhlenbeck process with resets to 0 at rate xi: the scaling map
// from the chain, transition and stationary densities, moments, and
// first-passage quantities in time and Laplace domains.

#include "ehrcat/chain.hpp"
#include "ehrcat/types.hpp"

#include <complex>

namespace ehrcat::oujump {

/// Drift -alpha (x - beta), infinitesimal variance alpha * nu, reset rate xi.
struct DiffusionParams {
  double alpha = 1.0;
  double beta = 0.0;
  double nu = 1.0;
  double xi = 0.0;

  void validate() const;
  DiffusionParams free() const noexcept { return {alpha, beta, nu, 0.0}; }
};

/// Lattice spacing epsilon together with the chain it rescales.
struct ScalingMap {
  double epsilon = 0.01;
  chain::ChainParams chain;

  void validate() const;
  double gamma() const noexcept { return (chain.lambda - chain.mu) / epsilon; }
};

/// alpha = lambda + mu, nu = N eps^2, beta = gamma nu / alpha; xi unchanged.
DiffusionParams scale_params(const ScalingMap& m);

// ------------------------------------------------------------ free process

double free_mean(const DiffusionParams& d, double y, double t);
double free_variance(const DiffusionParams& d, double t);

/// Gaussian transition density, t > 0.
double f_free(const DiffusionParams& d, double x, double y, double t);

/// Stationary density of the free process.
double W_free(const DiffusionParams& d, double x);

/// Laplace transform in t of f_free, s > 0.
double f_free_laplace(const DiffusionParams& d, double x, double y, double s);
std::complex<double> f_free_laplace(const DiffusionParams& d, double x, double y,
                                    std::complex<double> s);

// ------------------------------------------------------------ with resets

/// Stationary density xi * f_free_laplace(x | 0) at s = xi; W(0) is the
/// x -> 0+ limit.
double W_cat(const DiffusionParams& d, double x);

/// Renewal form, integral by tanh-sinh quadrature (any beta).
double f_cat(const DiffusionParams& d, double x, double y, double t);

/// Series form for beta = 0, x != 0.
double f_cat_sym(const DiffusionParams& d, double x, double y, double t,
                 const SeriesControl& ctl = {});

double mean_cat_x(const DiffusionParams& d, double y, double t);
double m2_cat_x(const DiffusionParams& d, double y, double t);
double var_cat_x(const DiffusionParams& d, double y, double t);

// ------------------------------------------------------------ first passage

/// Laplace transform of the free first-passage density from y to 0.
double fpt_laplace_free(const DiffusionParams& d, double y, double s);
std::complex<double> fpt_laplace_free(const DiffusionParams& d, double y, std::complex<double> s);

/// The beta = 0 specialisation written through D_p(0).
double fpt_laplace_free_sym(const DiffusionParams& d, double y, double s);

/// Free first-passage density, beta = 0.
double fpt_density_free_sym_x(const DiffusionParams& d, double y, double t);

/// First-passage density with resets, beta = 0. Equals xi at t = 0.
double fpt_density_cat_sym(const DiffusionParams& d, double y, double t);

double fpt_laplace_cat(const DiffusionParams& d, double y, double s);
std::complex<double> fpt_laplace_cat(const DiffusionParams& d, double y, std::complex<double> s);

/// First-passage density with resets for any beta, by Talbot inversion.
double fpt_density_cat_talbot(const DiffusionParams& d, double y, double t, int n_nodes = 32);

/// E[T_y] = (1 - g~_xi) / xi.
double mean_fpt_cat(const DiffusionParams& d, double y);

/// E[T_y] for beta = 0 through Gamma and D_p(|y| sqrt(2/nu)).
double mean_fpt_cat_sym(const DiffusionParams& d, double y);

/// E[T_y^2]; the s-derivative of g~_s is a Richardson-extrapolated central
/// difference with step xi * 1e-5.
double m2_fpt_cat(const DiffusionParams& d, double y);

} // namespace ehrcat::oujump

#endif // EHRCAT_OUJUMP_HPP
