#ifndef EHRCAT_MC_HPP
#define EHRCAT_MC_HPP

// Monte Carlo oracles for the chain and the jump-diffusion. Every path draws
// from its own stream keyed by (seed, path_index), and paths are merged in
// fixed-size chunks in index order, so estimates do not depend on the
// number of worker threads.

#include "ehrcat/chain.hpp"
#include "ehrcat/oujump.hpp"
#include "ehrcat/types.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <cstdint>
#include <vector>

namespace ehrcat::mc {

struct SimConfig {
  std::uint64_t seed = 20240601;
  long n_paths = 100000;
  double horizon = 100.0;
  /// Diffusion first-passage detection step; 0 selects sqrt(nu) / (50 max(alpha, 1)).
  double fpt_grid_dt = 0.0;
  /// Worker threads; 0 uses the hardware concurrency.
  int workers = 0;

  void validate() const;
};

/// 50 / min(lambda + mu, xi), with xi ignored when it is 0.
double default_horizon(const chain::ChainParams& p);
double default_horizon(const oujump::DiffusionParams& d);
double default_fpt_dt(const oujump::DiffusionParams& d);

struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  long n = 0;
};

/// Independent stream for one path.
class PathRng {
public:
  PathRng(std::uint64_t seed, std::uint64_t path_index);

  double uniform() { return uniform_(engine_); }
  double exponential(double rate) { return exp_(engine_) / rate; }
  double normal() { return normal_(engine_); }

private:
  boost::random::mt19937_64 engine_;
  boost::random::uniform_01<double> uniform_;
  boost::random::exponential_distribution<double> exp_;
  boost::random::normal_distribution<double> normal_;
};

// ------------------------------------------------------------------- chain

/// Jump times and the state entered at each; times[0] = 0, states[0] = j.
struct ChainPath {
  std::vector<double> times;
  std::vector<int> states;

  int state_at(double t) const;
  /// Time spent in state k over [0, until].
  double occupation(int k, double until) const;
};

/// Merged-rate simulation up to cfg.horizon.
ChainPath simulate_chain_path(const chain::ChainParams& p, int j, const SimConfig& cfg,
                              std::uint64_t path_index);

/// Catastrophes from an independent Poisson(xi) clock on top of the free
/// chain. Same law as simulate_chain_path, different stream usage.
ChainPath simulate_chain_path_clocks(const chain::ChainParams& p, int j, const SimConfig& cfg,
                                     std::uint64_t path_index);

enum class ChainSimulator { merged, clocks };

struct LawEstimate {
  chain::ProbVector law;
  std::vector<double> std_error; // by state index n + N
  EstimateWithError mean;
  EstimateWithError second_moment;
};

LawEstimate estimate_chain_law(const chain::ChainParams& p, int j, double t, const SimConfig& cfg,
                               ChainSimulator sim = ChainSimulator::merged);

// --------------------------------------------------------------- diffusion

/// Values on the grid k * dt, k = 0..ceil(horizon / dt), dt = the fpt step.
struct OuPath {
  double dt = 0.0;
  std::vector<double> values;
};

/// Exact OU transitions between grid points and reset epochs.
OuPath simulate_ou_path(const oujump::DiffusionParams& d, double y, const SimConfig& cfg,
                        std::uint64_t path_index);

/// X(t) advanced in exact OU steps of length at most `step`, resets at their
/// exact epochs.
double sample_ou(const oujump::DiffusionParams& d, double y, double t, double step, PathRng& rng);

struct MomentEstimate {
  EstimateWithError mean;
  EstimateWithError second_moment;
  EstimateWithError variance;
};

MomentEstimate estimate_ou_moments(const oujump::DiffusionParams& d, double y, double t, double step,
                                   const SimConfig& cfg);

/// The first cfg.n_paths samples of X(t), in path order.
std::vector<double> sample_ou_many(const oujump::DiffusionParams& d, double y, double t, double step,
                                   const SimConfig& cfg);

// ----------------------------------------------------------- first passage

/// sign_change: first grid point where the sign of X differs from the
/// start, biased upward by O(sqrt(dt)). exact: beta = 0 only, the crossing
/// time of the time-changed Brownian motion drawn directly.
enum class FptMode { sign_change, exact };

struct HistogramSpec {
  int bins = 100;
  double t_max = 0.0; // 0 selects 10 / (rate scale + xi)
};

struct FptEstimate {
  EstimateWithError mean;
  EstimateWithError variance;
  Curve density; // bin centres and count / (n_paths * width)
  std::vector<double> density_std_error;
  long censored = 0;
  /// More than 0.1% of paths reached the horizon.
  bool flagged = false;
  /// sign_change only: mean(dt) - mean(dt / 2) from a second run.
  double halving_shift = 0.0;
};

FptEstimate estimate_fpt(const chain::ChainParams& p, int j, const SimConfig& cfg,
                         const HistogramSpec& hist = {});
FptEstimate estimate_fpt(const oujump::DiffusionParams& d, double y, const SimConfig& cfg,
                         FptMode mode = FptMode::sign_change, const HistogramSpec& hist = {});

// ------------------------------------------------------------- statistics

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Two-sample homogeneity test on count vectors; cells empty in both
/// samples are dropped.
ChiSquare chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
template <class Cdf> double ks_statistic(std::vector<double> xs, Cdf cdf);

/// Asymptotic 1% critical value 1.628 / sqrt(n).
double ks_critical_1pct(long n);

} // namespace ehrcat::mc

#include "ehrcat/mc_inl.hpp"

#endif // EHRCAT_MC_HPP
