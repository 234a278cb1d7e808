#include "ehrcat/cli.hpp"

#include "ehrcat/chain.hpp"
#include "ehrcat/error.hpp"
#include "ehrcat/mc.hpp"
#include "ehrcat/oujump.hpp"
#include "ehrcat/types.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace ehrcat::cli {

// ------------------------------------------------------------------ output

std::string format_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string to_csv(const Table& t) {
  std::string s = "# ehrcat ";
  s += kVersion;
  for (const auto& [k, v] : t.params) s += " " + k + "=" + v;
  s += "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  char buf[64];
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      const auto r = std::to_chars(buf, buf + sizeof buf, row[i], std::chars_format::general, 17);
      s.append(buf, r.ptr);
    }
    s += "\n";
  }
  return s;
}

void write_csv(const Table& t, const std::filesystem::path& file) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + file.parent_path().string() + ": " + ec.message());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out << to_csv(t);
  out.close();
  if (!out) throw IoError("failed writing " + file.string());
}

std::filesystem::path default_output_dir() {
  if (const char* dir = std::getenv("EHRCAT_OUTPUT_DIR"); dir && *dir) return dir;
  return std::filesystem::current_path();
}

// -------------------------------------------------------------------- run

namespace {

struct ChainOpts {
  int N = 0;
  double lambda = 0.0, mu = 0.0, xi = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--N", N, "half-width of the state space")->required();
    app->add_option("--lambda", lambda, "upward rate")->required();
    app->add_option("--mu", mu, "downward rate")->required();
    app->add_option("--xi", xi, "catastrophe rate")->capture_default_str();
  }
  chain::ChainParams params() const {
    chain::ChainParams p{N, lambda, mu, xi};
    p.validate();
    return p;
  }
  void record(Table& t) const {
    t.params.insert(t.params.end(), {{"N", std::to_string(N)},
                                     {"lambda", format_number(lambda)},
                                     {"mu", format_number(mu)},
                                     {"xi", format_number(xi)}});
  }
};

struct DiffusionOpts {
  double alpha = 0.0, beta = 0.0, nu = 0.0, xi = 0.0, y = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "mean-reversion rate")->required();
    app->add_option("--beta", beta, "mean-reversion level")->capture_default_str();
    app->add_option("--nu", nu, "stationary variance scale")->required();
    app->add_option("--xi", xi, "reset rate")->capture_default_str();
    app->add_option("--y", y, "starting position")->required();
  }
  oujump::DiffusionParams params() const {
    oujump::DiffusionParams d{alpha, beta, nu, xi};
    d.validate();
    return d;
  }
  void record(Table& t) const {
    t.params.insert(t.params.end(), {{"alpha", format_number(alpha)},
                                     {"beta", format_number(beta)},
                                     {"nu", format_number(nu)},
                                     {"xi", format_number(xi)},
                                     {"y", format_number(y)}});
  }
};

struct Grid {
  double t_max = 0.0;
  std::size_t points = 400;

  void attach(CLI::App* app) {
    app->add_option("--t-max", t_max, "end of the time grid (default 10 / total rate)");
    app->add_option("--points", points, "grid points")->capture_default_str();
  }
  std::vector<double> make(double rate) const {
    require(points >= 2, "--points must be >= 2");
    require(t_max >= 0.0, "--t-max must be > 0");
    return linspace(0.0, t_max > 0.0 ? t_max : 10.0 / rate, points);
  }
};

struct SimOpts {
  std::uint64_t seed = 20240601;
  long paths = 100000;
  int workers = 0;
  double horizon = 0.0;
  double dt = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--paths", paths)->capture_default_str();
    app->add_option("--workers", workers, "threads, 0 for all cores")->capture_default_str();
    app->add_option("--horizon", horizon, "censoring horizon (default 50 / slowest rate)");
    app->add_option("--fpt-dt", dt, "diffusion crossing-detection step");
  }
  mc::SimConfig config(double default_horizon) const {
    mc::SimConfig c;
    c.seed = seed;
    c.n_paths = paths;
    c.workers = workers;
    c.horizon = horizon > 0.0 ? horizon : default_horizon;
    c.fpt_grid_dt = dt;
    c.validate();
    return c;
  }
  void record(Table& t) const {
    t.params.insert(t.params.end(), {{"seed", std::to_string(seed)}, {"paths", std::to_string(paths)}});
  }
};

std::filesystem::path output_path(const std::string& out, const std::string& stem) {
  if (!out.empty()) return out;
  return default_output_dir() / (stem + ".csv");
}

void emit(const Table& t, const std::string& out) {
  const auto path = output_path(out, t.name);
  write_csv(t, path);
  std::cout << path.string() << "\n";
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Ehrenfest chain with catastrophes and its jump-diffusion approximation", "ehrcat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string out;

  // qn
  ChainOpts qn_chain;
  auto* qn = app.add_subcommand("qn", "stationary law q_n and the free law");
  qn_chain.attach(qn);
  qn->add_option("--out", out, "output CSV");

  // pjn
  ChainOpts pjn_chain;
  int pjn_j = 0;
  double pjn_t = 0.0;
  std::string pjn_method = "closed";
  auto* pjn = app.add_subcommand("pjn", "transient law p_{j,n}(t)");
  pjn_chain.attach(pjn);
  pjn->add_option("--j", pjn_j, "initial state")->required();
  pjn->add_option("--t", pjn_t, "time")->required();
  pjn->add_option("--method", pjn_method)->check(CLI::IsMember({"closed", "quadrature", "ode"}))->capture_default_str();
  pjn->add_option("--out", out, "output CSV");

  // moments
  ChainOpts mom_chain;
  int mom_j = 0;
  Grid mom_grid;
  auto* mom = app.add_subcommand("moments", "mean and variance of the chain over time");
  mom_chain.attach(mom);
  mom->add_option("--j", mom_j, "initial state")->required();
  mom_grid.attach(mom);
  mom->add_option("--out", out, "output CSV");

  // fpt
  ChainOpts fpt_chain;
  int fpt_j = 0;
  bool fpt_density = false;
  Grid fpt_grid;
  auto* fpt = app.add_subcommand("fpt", "first passage through 0 of the chain");
  fpt_chain.attach(fpt);
  fpt->add_option("--j", fpt_j, "initial state")->required();
  fpt->add_flag("--density", fpt_density, "write the density (lambda == mu) instead of the moments");
  fpt_grid.attach(fpt);
  fpt->add_option("--out", out, "output CSV");

  // diffusion-density
  DiffusionOpts dd_opts;
  double dd_t = 0.0, dd_xmin = 0.0, dd_xmax = 0.0;
  std::size_t dd_points = 201;
  auto* dd = app.add_subcommand("diffusion-density", "transition and stationary densities of the diffusion");
  dd_opts.attach(dd);
  dd->add_option("--t", dd_t, "time")->required();
  dd->add_option("--x-min", dd_xmin, "default beta - 5 sqrt(nu)");
  dd->add_option("--x-max", dd_xmax, "default beta + 5 sqrt(nu)");
  dd->add_option("--points", dd_points)->capture_default_str();
  dd->add_option("--out", out, "output CSV");

  // diffusion-fpt
  DiffusionOpts df_opts;
  Grid df_grid;
  auto* df = app.add_subcommand("diffusion-fpt", "first-passage density through 0 of the diffusion");
  df_opts.attach(df);
  df_grid.attach(df);
  df->add_option("--out", out, "output CSV");

  // figure
  std::string fig_id;
  std::string fig_dir;
  auto* fig = app.add_subcommand("figure", "write the data behind a figure panel");
  fig->add_option("--id", fig_id, "panel id (2a..10b, 10 for both panels of 10, all)")->required();
  fig->add_option("--out-dir", fig_dir, "output directory");

  // validate
  std::string suite = "all";
  double tol = 1e-7;
  auto* val = app.add_subcommand("validate", "run the invariant suites");
  val->add_option("--suite", suite)->check(CLI::IsMember({"specfun", "chain", "diffusion", "mc", "all"}))->capture_default_str();
  val->add_option("--tol", tol)->capture_default_str();

  // simulate
  std::string sim_model = "chain", sim_quantity = "law", sim_mode = "sign-change";
  ChainOpts sim_chain;
  int sim_j = 0;
  double sim_t = 1.0, sim_alpha = 0.0, sim_beta = 0.0, sim_nu = 0.0, sim_y = 0.0, sim_step = 0.1;
  SimOpts sim_opts;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates");
  sim->add_option("--model", sim_model)->check(CLI::IsMember({"chain", "diffusion"}))->capture_default_str();
  sim->add_option("--quantity", sim_quantity)->check(CLI::IsMember({"law", "moments", "fpt"}))->capture_default_str();
  sim->add_option("--N", sim_chain.N);
  sim->add_option("--lambda", sim_chain.lambda);
  sim->add_option("--mu", sim_chain.mu);
  sim->add_option("--xi", sim_chain.xi);
  sim->add_option("--j", sim_j);
  sim->add_option("--alpha", sim_alpha);
  sim->add_option("--beta", sim_beta);
  sim->add_option("--nu", sim_nu);
  sim->add_option("--y", sim_y);
  sim->add_option("--t", sim_t)->capture_default_str();
  sim->add_option("--step", sim_step, "diffusion update step for moments")->capture_default_str();
  sim->add_option("--mode", sim_mode)->check(CLI::IsMember({"sign-change", "exact"}))->capture_default_str();
  sim_opts.attach(sim);
  sim->add_option("--out", out, "output CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (qn->parsed()) {
    const auto p = qn_chain.params();
    Table t{"qn", {}, {"n", "q_n", "q_free_n"}, {}};
    qn_chain.record(t);
    const auto q = chain::q_cat_law(p);
    const auto qf = chain::q_free_law(p);
    for (int n = -p.N; n <= p.N; ++n) t.rows.push_back({double(n), q[n], qf[n]});
    emit(t, out);
  } else if (pjn->parsed()) {
    const auto p = pjn_chain.params();
    chain::check_state(p, pjn_j);
    chain::ProbVector row;
    if (pjn_method == "closed") row = chain::p_cat_closed_row(p, pjn_j, pjn_t);
    else if (pjn_method == "quadrature") row = chain::p_cat_quadrature_row(p, pjn_j, pjn_t);
    else row = chain::ode_transient(p, pjn_j, {pjn_t}).front();
    Table t{"pjn", {}, {"n", "p_jn"}, {}};
    pjn_chain.record(t);
    t.params.insert(t.params.end(), {{"j", std::to_string(pjn_j)}, {"t", format_number(pjn_t)}, {"method", pjn_method}});
    for (int n = -p.N; n <= p.N; ++n) t.rows.push_back({double(n), row[n]});
    emit(t, out);
  } else if (mom->parsed()) {
    const auto p = mom_chain.params();
    chain::check_state(p, mom_j);
    Table t{"moments", {}, {"t", "mean", "second_moment", "variance"}, {}};
    mom_chain.record(t);
    t.params.emplace_back("j", std::to_string(mom_j));
    for (double time : mom_grid.make(p.lambda + p.mu + p.xi)) {
      const double m = chain::mean_cat(p, mom_j, time), m2 = chain::m2_cat(p, mom_j, time);
      t.rows.push_back({time, m, m2, m2 - m * m});
    }
    emit(t, out);
  } else if (fpt->parsed()) {
    const auto p = fpt_chain.params();
    Table t{"fpt", {}, {}, {}};
    fpt_chain.record(t);
    t.params.emplace_back("j", std::to_string(fpt_j));
    if (fpt_density) {
      t.columns = {"t", "g"};
      const Curve c = chain::fpt_density_cat_curve(p, fpt_j, fpt_grid.make(p.lambda + p.mu + p.xi));
      for (std::size_t i = 0; i < c.size(); ++i) t.rows.push_back({c.grid[i], c.samples[i]});
    } else {
      const auto m = chain::fpt_moments_linear(p, fpt_j);
      t.columns = {"mean", "second_moment", "variance"};
      t.rows.push_back({m.mean, m.second_moment, m.variance()});
    }
    emit(t, out);
  } else if (dd->parsed()) {
    const auto d = dd_opts.params();
    require(dd_points >= 2, "--points must be >= 2");
    const double lo = dd->count("--x-min") ? dd_xmin : d.beta - 5.0 * std::sqrt(d.nu);
    const double hi = dd->count("--x-max") ? dd_xmax : d.beta + 5.0 * std::sqrt(d.nu);
    require(lo < hi, "--x-min must be below --x-max");
    Table t{"diffusion_density", {}, {"x", "f", "W"}, {}};
    dd_opts.record(t);
    t.params.emplace_back("t", format_number(dd_t));
    for (double x : linspace(lo, hi, dd_points)) {
      const double w = d.xi > 0.0 ? oujump::W_cat(d, x) : oujump::W_free(d, x);
      t.rows.push_back({x, oujump::f_cat(d, x, dd_opts.y, dd_t), w});
    }
    emit(t, out);
  } else if (df->parsed()) {
    const auto d = df_opts.params();
    require(df_opts.y != 0.0, "--y must be nonzero");
    const bool sym = std::abs(d.beta) <= 1e-12 * std::sqrt(d.nu);
    Table t{"diffusion_fpt", {}, {"t", "g"}, {}};
    df_opts.record(t);
    for (double time : df_grid.make(d.alpha + d.xi)) {
      double g;
      if (sym) g = oujump::fpt_density_cat_sym(d, df_opts.y, time);
      else g = time == 0.0 ? d.xi : oujump::fpt_density_cat_talbot(d, df_opts.y, time);
      t.rows.push_back({time, g});
    }
    emit(t, out);
    if (d.xi > 0.0) {
      const double m = sym ? oujump::mean_fpt_cat_sym(d, df_opts.y) : oujump::mean_fpt_cat(d, df_opts.y);
      std::cout << "mean " << format_number(m) << "\nvariance "
                << format_number(oujump::m2_fpt_cat(d, df_opts.y) - m * m) << "\n";
    }
  } else if (fig->parsed()) {
    const std::filesystem::path dir = fig_dir.empty() ? default_output_dir() : std::filesystem::path(fig_dir);
    std::vector<std::string> ids = fig_id == "all" ? figure_ids() : std::vector<std::string>{fig_id};
    for (const auto& id : ids)
      for (const Table& t : figure(id)) {
        const auto path = dir / (t.name + ".csv");
        write_csv(t, path);
        std::cout << path.string() << "\n";
      }
  } else if (val->parsed()) {
    bool ok = true;
    for (const auto& r : validate(suite, tol)) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
      ok = ok && r.passed;
    }
    if (!ok) {
      std::cerr << "ehrcat: validation failed\n";
      return 3;
    }
  } else if (sim->parsed()) {
    Table t{"simulate", {}, {}, {}};
    t.params.insert(t.params.end(), {{"model", sim_model}, {"quantity", sim_quantity}});
    if (sim_model == "chain") {
      const auto p = sim_chain.params();
      sim_chain.record(t);
      t.params.emplace_back("j", std::to_string(sim_j));
      const auto cfg = sim_opts.config(mc::default_horizon(p));
      sim_opts.record(t);
      if (sim_quantity == "fpt") {
        const auto e = mc::estimate_fpt(p, sim_j, cfg);
        t.columns = {"t", "density", "std_error"};
        for (std::size_t i = 0; i < e.density.size(); ++i)
          t.rows.push_back({e.density.grid[i], e.density.samples[i], e.density_std_error[i]});
        std::cout << "mean " << format_number(e.mean.value) << " +- " << format_number(e.mean.std_error)
                  << "\nvariance " << format_number(e.variance.value) << " +- " << format_number(e.variance.std_error)
                  << "\ncensored " << e.censored << (e.flagged ? " (flagged)" : "") << "\n";
      } else {
        require(sim_t <= cfg.horizon, "--t must not exceed the horizon");
        t.params.emplace_back("t", format_number(sim_t));
        const auto e = mc::estimate_chain_law(p, sim_j, sim_t, cfg);
        if (sim_quantity == "law") {
          t.columns = {"n", "p_mc", "std_error", "p_closed"};
          const auto exact = chain::p_cat_closed_row(p, sim_j, sim_t);
          for (int n = -p.N; n <= p.N; ++n)
            t.rows.push_back({double(n), e.law[n], e.std_error[static_cast<std::size_t>(n + p.N)], exact[n]});
        } else {
          t.columns = {"mean", "mean_se", "second_moment", "second_moment_se", "mean_exact", "second_moment_exact"};
          t.rows.push_back({e.mean.value, e.mean.std_error, e.second_moment.value, e.second_moment.std_error,
                            chain::mean_cat(p, sim_j, sim_t), chain::m2_cat(p, sim_j, sim_t)});
        }
      }
    } else {
      const oujump::DiffusionParams d{sim_alpha, sim_beta, sim_nu, sim_chain.xi};
      d.validate();
      t.params.insert(t.params.end(), {{"alpha", format_number(d.alpha)},
                                       {"beta", format_number(d.beta)},
                                       {"nu", format_number(d.nu)},
                                       {"xi", format_number(d.xi)},
                                       {"y", format_number(sim_y)}});
      const auto cfg = sim_opts.config(mc::default_horizon(d));
      sim_opts.record(t);
      if (sim_quantity == "fpt") {
        t.params.emplace_back("mode", sim_mode);
        const auto mode = sim_mode == "exact" ? mc::FptMode::exact : mc::FptMode::sign_change;
        const auto e = mc::estimate_fpt(d, sim_y, cfg, mode);
        t.columns = {"t", "density", "std_error"};
        for (std::size_t i = 0; i < e.density.size(); ++i)
          t.rows.push_back({e.density.grid[i], e.density.samples[i], e.density_std_error[i]});
        std::cout << "mean " << format_number(e.mean.value) << " +- " << format_number(e.mean.std_error)
                  << "\nvariance " << format_number(e.variance.value) << " +- " << format_number(e.variance.std_error)
                  << "\ncensored " << e.censored << (e.flagged ? " (flagged)" : "") << "\n";
        if (mode == mc::FptMode::sign_change)
          std::cout << "step-halving shift " << format_number(e.halving_shift) << "\n";
      } else {
        require(sim_quantity == "moments", "diffusion simulation supports --quantity moments or fpt");
        t.params.insert(t.params.end(), {{"t", format_number(sim_t)}, {"step", format_number(sim_step)}});
        const auto e = mc::estimate_ou_moments(d, sim_y, sim_t, sim_step, cfg);
        t.columns = {"mean", "mean_se", "second_moment", "second_moment_se", "mean_exact", "second_moment_exact"};
        t.rows.push_back({e.mean.value, e.mean.std_error, e.second_moment.value, e.second_moment.std_error,
                          oujump::mean_cat_x(d, sim_y, sim_t), oujump::m2_cat_x(d, sim_y, sim_t)});
      }
    }
    emit(t, out);
  }
  return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const DomainError& e) {
    std::cerr << "ehrcat: invalid parameters: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "ehrcat: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "ehrcat: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "ehrcat: numerical failure: " << e.what() << "\n";
    return 3;
  }
}

} // namespace ehrcat::cli
