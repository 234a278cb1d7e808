#include "ehrcat/chain.hpp"
#include "ehrcat/cli.hpp"
#include "ehrcat/error.hpp"
#include "ehrcat/oujump.hpp"
#include "ehrcat/types.hpp"

#include <functional>
#include <map>

namespace ehrcat::cli {

namespace {

using chain::ChainParams;
using oujump::DiffusionParams;

constexpr int kN = 10;
constexpr double kEps = 0.01;
constexpr std::size_t kPoints = 400;
const std::vector<double> kXiSweep = {0.25, 0.5, 1.0, 1.5};
const std::vector<double> kXiSweepWithZero = {0.0, 0.25, 0.5, 1.0, 1.5};

std::string tag(double xi) { return "xi" + format_number(xi); }

Table start(const std::string& id, const ChainParams& p) {
  Table t;
  t.name = "fig" + id;
  t.params = {{"figure", id},
              {"N", std::to_string(p.N)},
              {"lambda", format_number(p.lambda)},
              {"mu", format_number(p.mu)}};
  return t;
}

void add_param(Table& t, const std::string& k, double v) { t.params.emplace_back(k, format_number(v)); }

DiffusionParams scaled(const ChainParams& p) { return oujump::scale_params({kEps, p}); }

std::vector<double> time_grid(double T) { return linspace(0.0, T, kPoints); }

// (n, q_n, q~_n)
Table stationary(const std::string& id, double lambda, double mu, double xi) {
  const ChainParams p{kN, lambda, mu, xi};
  Table t = start(id, p);
  add_param(t, "xi", xi);
  t.columns = {"n", "q_n", "q_free_n"};
  const auto q = chain::q_cat_law(p);
  const auto qf = chain::q_free_law(p);
  for (int n = -kN; n <= kN; ++n) t.rows.push_back({double(n), q[n], qf[n]});
  return t;
}

// long format (t, n, p_jn(t))
Table transient(const std::string& id, double lambda, double mu, double xi, int j) {
  const ChainParams p{kN, lambda, mu, xi};
  Table t = start(id, p);
  add_param(t, "xi", xi);
  t.params.emplace_back("j", std::to_string(j));
  t.columns = {"t", "n", "p_jn"};
  for (double time : time_grid(10.0 / (lambda + mu + xi))) {
    const auto row = chain::p_cat_closed_row(p, j, time);
    for (int n = -kN; n <= kN; ++n) t.rows.push_back({time, double(n), row[n]});
  }
  return t;
}

// (t, <moment> per xi, <moment> of the free chain)
Table moments(const std::string& id, double lambda, double mu, bool variance) {
  const int j = 6;
  ChainParams p{kN, lambda, mu, 0.0};
  Table t = start(id, p);
  t.params.emplace_back("j", std::to_string(j));
  const std::string what = variance ? "var" : "mean";
  t.columns = {"t"};
  for (double xi : kXiSweep) t.columns.push_back(what + "_" + tag(xi));
  t.columns.push_back(what + "_free");
  for (double time : time_grid(10.0 / (lambda + mu))) {
    std::vector<double> row{time};
    for (double xi : kXiSweep) {
      p.xi = xi;
      row.push_back(variance ? chain::var_cat(p, j, time) : chain::mean_cat(p, j, time));
    }
    p.xi = 0.0;
    row.push_back(variance ? chain::var_free(p, j, time) : chain::mean_free(p, j, time));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// (t, g per xi, g of the free chain)
Table chain_fpt(const std::string& id, int j) {
  ChainParams p{kN, 0.6, 0.6, 0.0};
  Table t = start(id, p);
  t.params.emplace_back("j", std::to_string(j));
  const auto grid = time_grid(10.0 / (p.lambda + p.mu));
  t.columns = {"t"};
  std::vector<Curve> curves;
  for (double xi : kXiSweep) {
    t.columns.push_back("g_" + tag(xi));
    p.xi = xi;
    curves.push_back(chain::fpt_density_cat_curve(p, j, grid));
  }
  t.columns.push_back("g_free");
  p.xi = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    for (const auto& c : curves) row.push_back(c.samples[i]);
    row.push_back(chain::fpt_density_free_sym(p, j, grid[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// (n, x = n eps, q_n, eps W(x), q~_n, eps W~(x))
Table lattice_density(const std::string& id, double lambda, double mu, double xi) {
  const ChainParams p{kN, lambda, mu, xi};
  Table t = start(id, p);
  add_param(t, "xi", xi);
  add_param(t, "epsilon", kEps);
  const DiffusionParams d = scaled(p);
  t.columns = {"n", "x", "q_n", "eps_W", "q_free_n", "eps_W_free"};
  const auto q = chain::q_cat_law(p);
  const auto qf = chain::q_free_law(p);
  for (int n = -kN; n <= kN; ++n) {
    const double x = n * kEps;
    t.rows.push_back({double(n), x, q[n], kEps * oujump::W_cat(d, x), qf[n], kEps * oujump::W_free(d, x)});
  }
  return t;
}

// (t, chain and scaled diffusion moment per xi)
Table moment_comparison(const std::string& id, double lambda, double mu, bool variance) {
  const int j = 6;
  ChainParams p{kN, lambda, mu, 0.0};
  Table t = start(id, p);
  t.params.emplace_back("j", std::to_string(j));
  add_param(t, "epsilon", kEps);
  const std::string what = variance ? "var" : "mean";
  t.columns = {"t"};
  for (double xi : kXiSweepWithZero) {
    t.columns.push_back("chain_" + what + "_" + tag(xi));
    t.columns.push_back("diffusion_" + what + "_" + tag(xi));
  }
  const double y = j * kEps;
  for (double time : time_grid(10.0 / (lambda + mu))) {
    std::vector<double> row{time};
    for (double xi : kXiSweepWithZero) {
      p.xi = xi;
      const DiffusionParams d = scaled(p);
      if (variance) {
        row.push_back(chain::var_cat(p, j, time));
        row.push_back(oujump::var_cat_x(d, y, time) / (kEps * kEps));
      } else {
        row.push_back(chain::mean_cat(p, j, time));
        row.push_back(oujump::mean_cat_x(d, y, time) / kEps);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// long format (t, n, x, p_jn(t), eps f(x, t | y)); t = 0 is left out because
// the density is singular there.
Table transition_comparison(const std::string& id, double xi) {
  const int j = 6;
  const ChainParams p{kN, 0.6, 0.6, xi};
  Table t = start(id, p);
  add_param(t, "xi", xi);
  t.params.emplace_back("j", std::to_string(j));
  add_param(t, "epsilon", kEps);
  const DiffusionParams d = scaled(p);
  const double y = j * kEps;
  const double T = 10.0 / (p.lambda + p.mu + xi);
  t.columns = {"t", "n", "x", "p_jn", "eps_f"};
  for (std::size_t k = 1; k <= kPoints; ++k) {
    const double time = T * static_cast<double>(k) / kPoints;
    const auto row = chain::p_cat_closed_row(p, j, time);
    for (int n = -kN; n <= kN; ++n) {
      const double x = n * kEps;
      t.rows.push_back({time, double(n), x, row[n], kEps * oujump::f_cat(d, x, y, time)});
    }
  }
  return t;
}

// (t, chain and diffusion first-passage densities per xi)
Table fpt_comparison(const std::string& id, int j) {
  ChainParams p{kN, 0.6, 0.6, 0.0};
  Table t = start(id, p);
  t.params.emplace_back("j", std::to_string(j));
  add_param(t, "epsilon", kEps);
  const auto grid = time_grid(10.0 / (p.lambda + p.mu));
  const double y = j * kEps;
  t.columns = {"t"};
  std::vector<Curve> curves;
  for (double xi : kXiSweepWithZero) {
    t.columns.push_back("chain_g_" + tag(xi));
    t.columns.push_back("diffusion_g_" + tag(xi));
    p.xi = xi;
    curves.push_back(chain::fpt_density_cat_curve(p, j, grid));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    for (std::size_t k = 0; k < kXiSweepWithZero.size(); ++k) {
      p.xi = kXiSweepWithZero[k];
      row.push_back(curves[k].samples[i]);
      row.push_back(oujump::fpt_density_cat_sym(scaled(p), y, grid[i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// (xi, chain and diffusion FPT mean or variance for lambda = mu = 0.3, 0.6)
Table fpt_moments(const std::string& id, bool variance) {
  const int j = 3;
  Table t;
  t.name = "fig" + id;
  t.params = {{"figure", id}, {"N", std::to_string(kN)}, {"j", std::to_string(j)}};
  add_param(t, "epsilon", kEps);
  const std::string what = variance ? "var" : "mean";
  const std::vector<double> rates = {0.3, 0.6};
  t.columns = {"xi"};
  for (double r : rates) {
    t.columns.push_back("chain_" + what + "_lambda" + format_number(r));
    t.columns.push_back("diffusion_" + what + "_lambda" + format_number(r));
  }
  const double y = j * kEps;
  for (double xi : linspace(0.05, 5.0, 100)) {
    std::vector<double> row{xi};
    for (double r : rates) {
      const ChainParams p{kN, r, r, xi};
      const DiffusionParams d = scaled(p);
      const auto m = chain::fpt_moments_linear(p, j);
      const double mean_x = oujump::mean_fpt_cat_sym(d, y);
      if (variance) {
        row.push_back(m.variance());
        row.push_back(oujump::m2_fpt_cat(d, y) - mean_x * mean_x);
      } else {
        row.push_back(m.mean);
        row.push_back(mean_x);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

using Builder = std::function<Table()>;

const std::map<std::string, Builder>& builders() {
  static const std::map<std::string, Builder> table = {
      {"2a", [] { return stationary("2a", 0.6, 0.6, 0.5); }},
      {"2b", [] { return stationary("2b", 0.6, 0.6, 1.0); }},
      {"2c", [] { return stationary("2c", 0.2, 0.6, 0.5); }},
      {"2d", [] { return stationary("2d", 0.6, 0.2, 0.5); }},
      {"3a", [] { return transient("3a", 0.6, 0.6, 0.5, 6); }},
      {"3b", [] { return transient("3b", 0.6, 0.6, 1.0, 6); }},
      {"3c", [] { return transient("3c", 0.2, 0.6, 0.5, 6); }},
      {"3d", [] { return transient("3d", 0.6, 0.2, 0.5, -6); }},
      {"4a", [] { return moments("4a", 0.6, 0.6, false); }},
      {"4b", [] { return moments("4b", 0.6, 0.6, true); }},
      {"4c", [] { return moments("4c", 0.6, 0.2, false); }},
      {"4d", [] { return moments("4d", 0.6, 0.2, true); }},
      {"5a", [] { return chain_fpt("5a", 3); }},
      {"5b", [] { return chain_fpt("5b", 6); }},
      {"6a", [] { return lattice_density("6a", 0.6, 0.6, 0.5); }},
      {"6b", [] { return lattice_density("6b", 0.6, 0.6, 1.0); }},
      {"6c", [] { return lattice_density("6c", 0.2, 0.3, 0.5); }},
      {"6d", [] { return lattice_density("6d", 0.3, 0.2, 0.5); }},
      {"7a", [] { return moment_comparison("7a", 0.6, 0.6, false); }},
      {"7b", [] { return moment_comparison("7b", 0.6, 0.6, true); }},
      {"7c", [] { return moment_comparison("7c", 0.3, 0.2, false); }},
      {"7d", [] { return moment_comparison("7d", 0.3, 0.2, true); }},
      {"8a", [] { return transition_comparison("8a", 0.0); }},
      {"8b", [] { return transition_comparison("8b", 0.5); }},
      {"9a", [] { return fpt_comparison("9a", 3); }},
      {"9b", [] { return fpt_comparison("9b", 6); }},
      {"10a", [] { return fpt_moments("10a", false); }},
      {"10b", [] { return fpt_moments("10b", true); }},
  };
  return table;
}

} // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const char* id : {"2a", "2b", "2c", "2d", "3a", "3b", "3c", "3d", "4a", "4b", "4c", "4d", "5a", "5b",
                         "6a", "6b", "6c", "6d", "7a", "7b", "7c", "7d", "8a", "8b", "9a", "9b", "10a", "10b"})
    ids.emplace_back(id);
  return ids;
}

std::vector<Table> figure(const std::string& id) {
  if (id == "10") return {builders().at("10a")(), builders().at("10b")()};
  const auto it = builders().find(id);
  if (it == builders().end()) throw DomainError("unknown figure id '" + id + "'");
  return {it->second()};
}

} // namespace ehrcat::cli
