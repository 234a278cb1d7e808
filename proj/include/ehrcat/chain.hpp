#ifndef EHRCAT_CHAIN_HPP
#define EHRCAT_CHAIN_HPP

// The Ehrenfest chain on {-N..N} with catastrophes to state 0: rates, the
// free process, closed-form laws with catastrophes, moments, first-passage
// quantities and the ODE/quadrature oracles.

#include "ehrcat/types.hpp"

#include <vector>

namespace ehrcat::chain {

struct ChainParams {
  int N = 1;
  double lambda = 1.0;
  double mu = 1.0;
  double xi = 0.0;

  void validate() const;
  double rho() const noexcept { return lambda / mu; }
  /// lambda == mu within 1e-12 relative.
  bool symmetric() const noexcept;
  /// The same chain with lambda and mu exchanged.
  ChainParams swapped() const noexcept { return {N, mu, lambda, xi}; }
  ChainParams free() const noexcept { return {N, lambda, mu, 0.0}; }
  int states() const noexcept { return 2 * N + 1; }
};

/// Throws DomainError unless -N <= k <= N.
void check_state(const ChainParams& p, int k);

/// A distribution over -N..N, indexed by state.
class ProbVector {
public:
  ProbVector() = default;
  explicit ProbVector(int N);
  ProbVector(int N, std::vector<double> values);

  int N() const noexcept { return N_; }
  double& operator[](int n) { return values_[static_cast<std::size_t>(n + N_)]; }
  double operator[](int n) const { return values_[static_cast<std::size_t>(n + N_)]; }
  const std::vector<double>& values() const noexcept { return values_; }

  double sum() const;
  double moment(int k) const;
  /// Entries in [-tol, 1+tol] and sum within tol of 1; throws DomainError.
  void validate(double tol = 1e-10) const;

private:
  int N_ = 0;
  std::vector<double> values_;
};

struct Transition {
  int target;
  double rate;
};

/// Nonzero off-diagonal rates out of k. Drift and catastrophe into 0 from
/// k = +-1 are merged into one entry.
std::vector<Transition> rates(const ChainParams& p, int k);
double total_rate(const ChainParams& p, int k);

double b1(const ChainParams& p, double t);
double b2(const ChainParams& p, double t);

// ---------------------------------------------------------------- free chain

double p_free(const ChainParams& p, int j, int n, double t);
ProbVector p_free_row(const ChainParams& p, int j, double t);

/// p_free written in the decay factor y = exp(-(lambda+mu) t); one_minus_y is
/// passed separately so it keeps full precision for small t.
double p_free_decay(const ChainParams& p, int j, int n, double y, double one_minus_y);

double q_free(const ChainParams& p, int n);
ProbVector q_free_law(const ChainParams& p);
double q_free_mean(const ChainParams& p);
double q_free_variance(const ChainParams& p);

double mean_free(const ChainParams& p, int j, double t);
double var_free(const ChainParams& p, int j, double t);

// ------------------------------------------------------- with catastrophes

/// Closed stationary law (xi > 0).
double q_cat(const ChainParams& p, int n);
/// xi * int_0^inf e^{-xi tau} p_free(0, n, tau) d tau on a finite interval.
double q_cat_quadrature(const ChainParams& p, int n);
ProbVector q_cat_law(const ChainParams& p);

/// Closed transient law. xi = 0 routes to p_free.
double p_cat_closed(const ChainParams& p, int j, int n, double t);
ProbVector p_cat_closed_row(const ChainParams& p, int j, double t);

/// Renewal form evaluated by adaptive quadrature.
double p_cat_quadrature(const ChainParams& p, int j, int n, double t);
ProbVector p_cat_quadrature_row(const ChainParams& p, int j, double t);

/// Forward equations integrated by Dormand-Prince 5(4), started at the unit
/// vector on j. One ProbVector per grid point.
std::vector<ProbVector> ode_transient(const ChainParams& p, int j, const std::vector<double>& grid,
                                      double abs_tol = 1e-12, double rel_tol = 1e-10);

double mean_cat(const ChainParams& p, int j, double t);
double m2_cat(const ChainParams& p, int j, double t);
double var_cat(const ChainParams& p, int j, double t);
double mean_cat_limit(const ChainParams& p);
double m2_cat_limit(const ChainParams& p);

// ------------------------------------------------------------ first passage

/// First-passage density through 0 of the free chain, lambda == mu only.
double fpt_density_free_sym(const ChainParams& p, int j, double t);

/// First-passage density through 0 with catastrophes, lambda == mu only.
double fpt_density_cat(const ChainParams& p, int j, double t);

/// fpt_density_cat on an increasing grid, accumulating the survival integral
/// interval by interval.
Curve fpt_density_cat_curve(const ChainParams& p, int j, const std::vector<double>& grid);

struct FptMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance() const noexcept { return second_moment - mean * mean; }
};

/// Hitting-time moments of 0 from the absorbed sub-generator (any lambda, mu).
FptMoments fpt_moments_linear(const ChainParams& p, int j);

} // namespace ehrcat::chain

#endif // EHRCAT_CHAIN_HPP
