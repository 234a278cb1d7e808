#include "ehrcat/mc.hpp"

#include "ehrcat/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace ehrcat::mc {

namespace {

constexpr long kChunk = 4096;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

int worker_count(const SimConfig& cfg, long chunks) {
  long w = cfg.workers > 0 ? cfg.workers : static_cast<long>(std::thread::hardware_concurrency());
  return static_cast<int>(std::clamp(w, 1L, std::max(chunks, 1L)));
}

// Runs body(acc, path_index) over all paths. Each chunk of kChunk paths gets
// a fresh accumulator; chunks are merged in index order.
template <class Acc, class Body> Acc run_paths(const SimConfig& cfg, const Acc& zero, Body body) {
  const long chunks = (cfg.n_paths + kChunk - 1) / kChunk;
  std::vector<Acc> parts(static_cast<std::size_t>(chunks), zero);
  auto work = [&](long first, long stride) {
    for (long c = first; c < chunks; c += stride) {
      Acc& acc = parts[static_cast<std::size_t>(c)];
      const long end = std::min(cfg.n_paths, (c + 1) * kChunk);
      for (long i = c * kChunk; i < end; ++i) body(acc, static_cast<std::uint64_t>(i));
    }
  };
  const int workers = worker_count(cfg, chunks);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex m;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  Acc total = zero;
  for (const Acc& a : parts) total.merge(a);
  return total;
}

struct Moments {
  double n = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  void add(double x) {
    const double x2 = x * x;
    n += 1.0;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  void merge(const Moments& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
  }
  EstimateWithError mean() const {
    const double m = s1 / n;
    return {m, std::sqrt(std::max(0.0, s2 / n - m * m) / n), static_cast<long>(n)};
  }
  EstimateWithError second() const {
    const double m = s2 / n;
    return {m, std::sqrt(std::max(0.0, s4 / n - m * m) / n), static_cast<long>(n)};
  }
  // delta-method error of the sample variance from the fourth central moment
  EstimateWithError variance() const {
    const double m = s1 / n;
    const double c2 = s2 / n - m * m;
    const double c4 = s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
    const double v = c2 * n / std::max(n - 1.0, 1.0);
    return {v, std::sqrt(std::max(0.0, c4 - c2 * c2) / n), static_cast<long>(n)};
  }
};

// Cumulative outgoing rates per state for the merged-rate sampler.
struct RateTable {
  std::vector<std::vector<chain::Transition>> out;
  std::vector<double> total;

  RateTable(const chain::ChainParams& p) {
    for (int k = -p.N; k <= p.N; ++k) {
      out.push_back(chain::rates(p, k));
      total.push_back(chain::total_rate(p, k));
    }
  }
  int step(int N, int k, double u) const {
    const auto& tr = out[static_cast<std::size_t>(k + N)];
    double target = u * total[static_cast<std::size_t>(k + N)];
    for (const auto& e : tr) {
      if (target < e.rate) return e.target;
      target -= e.rate;
    }
    return tr.back().target;
  }
};

double ou_step(const oujump::DiffusionParams& d, double x, double dt, PathRng& rng) {
  const double decay = std::exp(-d.alpha * dt);
  const double sd = std::sqrt(0.5 * d.nu * -std::expm1(-2.0 * d.alpha * dt));
  return d.beta + (x - d.beta) * decay + sd * rng.normal();
}

struct Histogram {
  double t_max = 1.0;
  std::vector<double> counts;

  void add(double t) {
    if (t < 0.0 || t >= t_max) return;
    const auto b = static_cast<std::size_t>(t / t_max * static_cast<double>(counts.size()));
    counts[std::min(b, counts.size() - 1)] += 1.0;
  }
  void merge(const Histogram& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  }
};

struct FptAcc {
  Moments m;
  Histogram h;
  double censored = 0.0;

  void merge(const FptAcc& o) {
    m.merge(o.m);
    h.merge(o.h);
    censored += o.censored;
  }
};

FptEstimate finish(const FptAcc& acc, const SimConfig& cfg) {
  FptEstimate e;
  e.censored = static_cast<long>(acc.censored);
  e.flagged = acc.censored > 1e-3 * static_cast<double>(cfg.n_paths);
  if (acc.m.n > 0) {
    e.mean = acc.m.mean();
    e.variance = acc.m.variance();
  }
  const std::size_t bins = acc.h.counts.size();
  const double width = acc.h.t_max / static_cast<double>(bins);
  const double n = static_cast<double>(cfg.n_paths);
  std::vector<double> centres(bins), dens(bins);
  e.density_std_error.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    centres[i] = (static_cast<double>(i) + 0.5) * width;
    const double pr = acc.h.counts[i] / n;
    dens[i] = pr / width;
    e.density_std_error[i] = std::sqrt(pr * (1.0 - pr) / n) / width;
  }
  e.density = Curve(std::move(centres), std::move(dens));
  return e;
}

FptAcc fpt_zero(const HistogramSpec& hist, double default_tmax) {
  require(hist.bins >= 1, "histogram needs at least one bin");
  require(hist.t_max >= 0.0, "histogram t_max must be >= 0");
  FptAcc z;
  z.h.t_max = hist.t_max > 0.0 ? hist.t_max : default_tmax;
  z.h.counts.assign(static_cast<std::size_t>(hist.bins), 0.0);
  return z;
}

} // namespace

void SimConfig::validate() const {
  require(n_paths >= 1, "n_paths must be >= 1");
  require(horizon > 0.0 && std::isfinite(horizon), "horizon must be > 0");
  require(fpt_grid_dt >= 0.0 && std::isfinite(fpt_grid_dt), "fpt_grid_dt must be > 0 (or 0 for the default)");
  require(workers >= 0, "workers must be >= 0");
}

double default_horizon(const chain::ChainParams& p) {
  const double r = p.xi > 0.0 ? std::min(p.lambda + p.mu, p.xi) : p.lambda + p.mu;
  return 50.0 / r;
}

double default_horizon(const oujump::DiffusionParams& d) {
  const double r = d.xi > 0.0 ? std::min(d.alpha, d.xi) : d.alpha;
  return 50.0 / r;
}

double default_fpt_dt(const oujump::DiffusionParams& d) {
  return std::sqrt(d.nu) / (50.0 * std::max(d.alpha, 1.0));
}

PathRng::PathRng(std::uint64_t seed, std::uint64_t path_index)
    : engine_(splitmix64(splitmix64(seed) ^ path_index)) {}

// ------------------------------------------------------------------- chain

int ChainPath::state_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  return states[static_cast<std::size_t>(it - times.begin()) - 1];
}

double ChainPath::occupation(int k, double until) const {
  double total = 0.0;
  for (std::size_t i = 0; i < times.size() && times[i] < until; ++i) {
    const double end = i + 1 < times.size() ? std::min(times[i + 1], until) : until;
    if (states[i] == k) total += end - times[i];
  }
  return total;
}

namespace {

// Merged-rate path up to `until`; visit(t, k) returning false stops early.
template <class Visit>
void chain_walk(const chain::ChainParams& p, const RateTable& table, int j, double until, PathRng& rng,
                Visit visit) {
  double t = 0.0;
  int k = j;
  for (;;) {
    const double rate = table.total[static_cast<std::size_t>(k + p.N)];
    t += rng.exponential(rate);
    if (t > until) return;
    k = table.step(p.N, k, rng.uniform());
    if (!visit(t, k)) return;
  }
}

} // namespace

ChainPath simulate_chain_path(const chain::ChainParams& p, int j, const SimConfig& cfg,
                              std::uint64_t path_index) {
  p.validate();
  cfg.validate();
  chain::check_state(p, j);
  const RateTable table(p);
  PathRng rng(cfg.seed, path_index);
  ChainPath path{{0.0}, {j}};
  chain_walk(p, table, j, cfg.horizon, rng, [&](double t, int k) {
    path.times.push_back(t);
    path.states.push_back(k);
    return true;
  });
  return path;
}

ChainPath simulate_chain_path_clocks(const chain::ChainParams& p, int j, const SimConfig& cfg,
                                     std::uint64_t path_index) {
  p.validate();
  cfg.validate();
  chain::check_state(p, j);
  const RateTable table(p.free());
  PathRng rng(cfg.seed, path_index);
  ChainPath path{{0.0}, {j}};
  double t = 0.0;
  int k = j;
  double next_cat = p.xi > 0.0 ? rng.exponential(p.xi) : std::numeric_limits<double>::infinity();
  for (;;) {
    const double t_move = t + rng.exponential(table.total[static_cast<std::size_t>(k + p.N)]);
    if (next_cat <= t_move) {
      if (next_cat > cfg.horizon) break;
      t = next_cat;
      next_cat = t + rng.exponential(p.xi);
      if (k == 0) continue; // a catastrophe at 0 changes nothing
      k = 0;
    } else {
      if (t_move > cfg.horizon) break;
      t = t_move;
      k = table.step(p.N, k, rng.uniform());
    }
    path.times.push_back(t);
    path.states.push_back(k);
  }
  return path;
}

namespace {

struct LawAcc {
  std::vector<double> counts;
  Moments m;

  void merge(const LawAcc& o) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    m.merge(o.m);
  }
};

} // namespace

LawEstimate estimate_chain_law(const chain::ChainParams& p, int j, double t, const SimConfig& cfg,
                               ChainSimulator sim) {
  p.validate();
  cfg.validate();
  chain::check_state(p, j);
  require(t >= 0.0 && t <= cfg.horizon, "estimate_chain_law: need 0 <= t <= horizon");
  const RateTable table(p);
  SimConfig local = cfg;
  local.horizon = t;
  LawAcc zero;
  zero.counts.assign(static_cast<std::size_t>(p.states()), 0.0);
  const LawAcc acc = run_paths(cfg, zero, [&](LawAcc& a, std::uint64_t i) {
    int k = j;
    if (sim == ChainSimulator::merged) {
      PathRng rng(cfg.seed, i);
      chain_walk(p, table, j, t, rng, [&](double, int next) {
        k = next;
        return true;
      });
    } else {
      const ChainPath path = simulate_chain_path_clocks(p, j, local, i);
      k = path.states.back();
    }
    a.counts[static_cast<std::size_t>(k + p.N)] += 1.0;
    a.m.add(static_cast<double>(k));
  });
  LawEstimate e;
  const double n = static_cast<double>(cfg.n_paths);
  std::vector<double> law(acc.counts.size());
  e.std_error.resize(acc.counts.size());
  for (std::size_t i = 0; i < law.size(); ++i) {
    law[i] = acc.counts[i] / n;
    e.std_error[i] = std::sqrt(law[i] * (1.0 - law[i]) / n);
  }
  e.law = chain::ProbVector(p.N, std::move(law));
  e.mean = acc.m.mean();
  e.second_moment = acc.m.second();
  return e;
}

// --------------------------------------------------------------- diffusion

OuPath simulate_ou_path(const oujump::DiffusionParams& d, double y, const SimConfig& cfg,
                        std::uint64_t path_index) {
  d.validate();
  cfg.validate();
  OuPath path;
  path.dt = cfg.fpt_grid_dt > 0.0 ? cfg.fpt_grid_dt : default_fpt_dt(d);
  const auto steps = static_cast<std::size_t>(std::ceil(cfg.horizon / path.dt));
  path.values.reserve(steps + 1);
  path.values.push_back(y);
  PathRng rng(cfg.seed, path_index);
  double next_reset = d.xi > 0.0 ? rng.exponential(d.xi) : std::numeric_limits<double>::infinity();
  double x = y;
  for (std::size_t k = 1; k <= steps; ++k) {
    double t = static_cast<double>(k - 1) * path.dt;
    const double end = static_cast<double>(k) * path.dt;
    while (next_reset <= end) {
      t = next_reset;
      x = 0.0;
      next_reset = t + rng.exponential(d.xi);
    }
    x = ou_step(d, x, end - t, rng);
    path.values.push_back(x);
  }
  return path;
}

double sample_ou(const oujump::DiffusionParams& d, double y, double t, double step, PathRng& rng) {
  require(step > 0.0, "sample_ou: step must be > 0");
  double now = 0.0, x = y;
  double next_reset = d.xi > 0.0 ? rng.exponential(d.xi) : std::numeric_limits<double>::infinity();
  while (now < t) {
    const double end = std::min(t, now + step);
    if (next_reset <= end) {
      now = next_reset;
      x = 0.0;
      next_reset = now + rng.exponential(d.xi);
      continue;
    }
    x = ou_step(d, x, end - now, rng);
    now = end;
  }
  return x;
}

MomentEstimate estimate_ou_moments(const oujump::DiffusionParams& d, double y, double t, double step,
                                   const SimConfig& cfg) {
  d.validate();
  cfg.validate();
  require(t >= 0.0, "estimate_ou_moments: t must be >= 0");
  struct Acc {
    Moments m;
    void merge(const Acc& o) { m.merge(o.m); }
  };
  const Acc acc = run_paths(cfg, Acc{}, [&](Acc& a, std::uint64_t i) {
    PathRng rng(cfg.seed, i);
    a.m.add(sample_ou(d, y, t, step, rng));
  });
  return {acc.m.mean(), acc.m.second(), acc.m.variance()};
}

std::vector<double> sample_ou_many(const oujump::DiffusionParams& d, double y, double t, double step,
                                   const SimConfig& cfg) {
  d.validate();
  cfg.validate();
  std::vector<double> out(static_cast<std::size_t>(cfg.n_paths));
  for (long i = 0; i < cfg.n_paths; ++i) {
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_ou(d, y, t, step, rng);
  }
  return out;
}

// ----------------------------------------------------------- first passage

FptEstimate estimate_fpt(const chain::ChainParams& p, int j, const SimConfig& cfg, const HistogramSpec& hist) {
  p.validate();
  cfg.validate();
  chain::check_state(p, j);
  require(j != 0, "estimate_fpt: start must be nonzero");
  const RateTable table(p);
  const FptAcc zero = fpt_zero(hist, 10.0 / (p.lambda + p.mu + p.xi));
  const FptAcc acc = run_paths(cfg, zero, [&](FptAcc& a, std::uint64_t i) {
    PathRng rng(cfg.seed, i);
    double hit = -1.0;
    chain_walk(p, table, j, cfg.horizon, rng, [&](double t, int k) {
      if (k != 0) return true;
      hit = t;
      return false;
    });
    if (hit < 0.0) {
      a.censored += 1.0;
      return;
    }
    a.m.add(hit);
    a.h.add(hit);
  });
  return finish(acc, cfg);
}

namespace {

// Crossing time of 0 for beta = 0 without resets: X(t) = e^{-alpha t} B(u(t))
// with u(t) = (nu / 2)(e^{2 alpha t} - 1), and B from |y| hits 0 at y^2 / Z^2.
double exact_free_crossing(const oujump::DiffusionParams& d, double y, PathRng& rng) {
  const double z = rng.normal();
  const double u = y * y / (z * z);
  return std::log1p(2.0 * u / d.nu) / (2.0 * d.alpha);
}

double grid_crossing(const oujump::DiffusionParams& d, double y, double dt, double horizon, PathRng& rng) {
  const double side = y > 0.0 ? 1.0 : -1.0;
  double x = y, t = 0.0;
  while (t < horizon) {
    x = ou_step(d, x, dt, rng);
    t += dt;
    if (side * x <= 0.0) return t;
  }
  return -1.0;
}

FptAcc diffusion_fpt(const oujump::DiffusionParams& d, double y, const SimConfig& cfg, FptMode mode,
                     double dt, const FptAcc& zero) {
  return run_paths(cfg, zero, [&](FptAcc& a, std::uint64_t i) {
    PathRng rng(cfg.seed, i);
    const double reset = d.xi > 0.0 ? rng.exponential(d.xi) : std::numeric_limits<double>::infinity();
    const double limit = std::min(reset, cfg.horizon);
    double hit = mode == FptMode::exact ? exact_free_crossing(d, y, rng) : grid_crossing(d, y, dt, limit, rng);
    if (hit < 0.0 || hit > limit) hit = reset <= cfg.horizon ? reset : -1.0;
    if (hit < 0.0) {
      a.censored += 1.0;
      return;
    }
    a.m.add(hit);
    a.h.add(hit);
  });
}

} // namespace

FptEstimate estimate_fpt(const oujump::DiffusionParams& d, double y, const SimConfig& cfg, FptMode mode,
                         const HistogramSpec& hist) {
  d.validate();
  cfg.validate();
  require(y != 0.0, "estimate_fpt: start must be nonzero");
  if (mode == FptMode::exact)
    require(std::abs(d.beta) <= 1e-12 * std::sqrt(d.nu), "estimate_fpt: exact mode requires beta == 0");
  const double dt = cfg.fpt_grid_dt > 0.0 ? cfg.fpt_grid_dt : default_fpt_dt(d);
  const FptAcc zero = fpt_zero(hist, 10.0 / (d.alpha + d.xi));
  FptEstimate e = finish(diffusion_fpt(d, y, cfg, mode, dt, zero), cfg);
  if (mode == FptMode::sign_change) {
    const FptEstimate fine = finish(diffusion_fpt(d, y, cfg, mode, dt / 2.0, zero), cfg);
    e.halving_shift = e.mean.value - fine.mean.value;
  }
  return e;
}

// ------------------------------------------------------------- statistics

ChiSquare chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), "chi_square_two_sample: size mismatch");
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += a[i];
    nb += b[i];
  }
  require(na > 0.0 && nb > 0.0, "chi_square_two_sample: empty sample");
  ChiSquare r;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tot = a[i] + b[i];
    if (tot == 0.0) continue;
    ++cells;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    r.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  r.dof = cells - 1;
  if (r.dof >= 1) r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
  return r;
}

double ks_critical_1pct(long n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

} // namespace ehrcat::mc
