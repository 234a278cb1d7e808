#include "ehrcat/chain.hpp"
#include "ehrcat/cli.hpp"
#include "ehrcat/error.hpp"
#include "ehrcat/mc.hpp"
#include "ehrcat/oujump.hpp"
#include "ehrcat/specfun.hpp"
#include "ehrcat/types.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ehrcat;

namespace {

std::vector<double> values(const chain::ProbVector& v) { return v.values(); }

py::dict table_dict(const cli::Table& t) {
  py::dict d;
  d["name"] = t.name;
  d["params"] = t.params;
  d["columns"] = t.columns;
  d["rows"] = t.rows;
  return d;
}

py::dict estimate_dict(const mc::EstimateWithError& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  d["n"] = e.n;
  return d;
}

mc::SimConfig sim_config(std::uint64_t seed, long n_paths, double horizon, double fpt_grid_dt, int workers) {
  mc::SimConfig c;
  c.seed = seed;
  c.n_paths = n_paths;
  c.horizon = horizon;
  c.fpt_grid_dt = fpt_grid_dt;
  c.workers = workers;
  return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ehrenfest chain with catastrophes and its OU jump-diffusion approximation";
  m.attr("__version__") = kVersion;

  // Error derives from RuntimeError; DomainError is also a ValueError.
  static PyObject* error = PyErr_NewException("ehrcat.Error", PyExc_RuntimeError, nullptr);
  static PyObject* domain = PyErr_NewException(
      "ehrcat.DomainError", py::make_tuple(py::handle(error), py::handle(PyExc_ValueError)).release().ptr(), nullptr);
  static PyObject* convergence = PyErr_NewException("ehrcat.ConvergenceError", error, nullptr);
  static PyObject* singular = PyErr_NewException("ehrcat.SingularMatrixError", error, nullptr);
  m.attr("Error") = py::handle(error);
  m.attr("DomainError") = py::handle(domain);
  m.attr("ConvergenceError") = py::handle(convergence);
  m.attr("SingularMatrixError") = py::handle(singular);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      PyErr_SetString(domain, e.what());
    } catch (const ConvergenceError& e) {
      PyErr_SetString(convergence, e.what());
    } catch (const SingularMatrixError& e) {
      PyErr_SetString(singular, e.what());
    } catch (const Error& e) {
      PyErr_SetString(error, e.what());
    }
  });

  // ------------------------------------------------------------ specfun
  auto sf = m.def_submodule("specfun", "special functions");
  sf.def("ln_gamma", py::overload_cast<double>(&specfun::ln_gamma), py::arg("x"));
  sf.def("beta", &specfun::beta_fn, py::arg("x"), py::arg("y"));
  sf.def("gauss_2f1_terminating", &specfun::gauss_2f1_terminating, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
  sf.def("appell_f1_terminating", &specfun::appell_f1_terminating, py::arg("a"), py::arg("b"), py::arg("c"),
         py::arg("d"), py::arg("x"), py::arg("y"));
  sf.def("kummer_phi", [](double a, double c, double x) { return specfun::kummer_phi(a, c, x); }, py::arg("a"),
         py::arg("c"), py::arg("x"));
  sf.def("kummer_psi", &specfun::kummer_psi, py::arg("a"), py::arg("b"), py::arg("x"));
  sf.def("parabolic_cylinder_d", py::overload_cast<double, double>(&specfun::parabolic_cylinder_D), py::arg("p"),
         py::arg("z"));

  // -------------------------------------------------------------- chain
  auto ch = m.def_submodule("chain", "the Ehrenfest chain with catastrophes");
  py::class_<chain::ChainParams>(ch, "ChainParams")
      .def(py::init([](int N, double lambda, double mu, double xi) {
             chain::ChainParams p{N, lambda, mu, xi};
             p.validate();
             return p;
           }),
           py::arg("N"), py::arg("lambda_"), py::arg("mu"), py::arg("xi") = 0.0)
      .def_readonly("N", &chain::ChainParams::N)
      .def_readonly("lambda_", &chain::ChainParams::lambda)
      .def_readonly("mu", &chain::ChainParams::mu)
      .def_readonly("xi", &chain::ChainParams::xi)
      .def("__repr__", [](const chain::ChainParams& p) {
        return "ChainParams(N=" + std::to_string(p.N) + ", lambda_=" + cli::format_number(p.lambda) +
               ", mu=" + cli::format_number(p.mu) + ", xi=" + cli::format_number(p.xi) + ")";
      });

  ch.def("q_free", [](const chain::ChainParams& p) { return values(chain::q_free_law(p)); }, py::arg("p"));
  ch.def("q_cat", [](const chain::ChainParams& p) { return values(chain::q_cat_law(p)); }, py::arg("p"));
  ch.def("q_cat_quadrature", &chain::q_cat_quadrature, py::arg("p"), py::arg("n"));
  ch.def("p_free", [](const chain::ChainParams& p, int j, double t) { return values(chain::p_free_row(p, j, t)); },
         py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("p_cat", [](const chain::ChainParams& p, int j, double t) { return values(chain::p_cat_closed_row(p, j, t)); },
         py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("p_cat_quadrature",
         [](const chain::ChainParams& p, int j, double t) { return values(chain::p_cat_quadrature_row(p, j, t)); },
         py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("ode_transient",
         [](const chain::ChainParams& p, int j, const std::vector<double>& grid) {
           std::vector<std::vector<double>> out;
           for (const auto& v : chain::ode_transient(p, j, grid)) out.push_back(v.values());
           return out;
         },
         py::arg("p"), py::arg("j"), py::arg("grid"));
  ch.def("mean", &chain::mean_cat, py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("second_moment", &chain::m2_cat, py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("variance", &chain::var_cat, py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("fpt_density", &chain::fpt_density_cat, py::arg("p"), py::arg("j"), py::arg("t"));
  ch.def("fpt_moments",
         [](const chain::ChainParams& p, int j) {
           const auto r = chain::fpt_moments_linear(p, j);
           return py::make_tuple(r.mean, r.second_moment);
         },
         py::arg("p"), py::arg("j"), "(mean, second moment) of the first passage through 0");

  // ---------------------------------------------------------- diffusion
  auto ou = m.def_submodule("diffusion", "the OU jump-diffusion with resets");
  py::class_<oujump::DiffusionParams>(ou, "DiffusionParams")
      .def(py::init([](double alpha, double beta, double nu, double xi) {
             oujump::DiffusionParams d{alpha, beta, nu, xi};
             d.validate();
             return d;
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("nu"), py::arg("xi") = 0.0)
      .def_readonly("alpha", &oujump::DiffusionParams::alpha)
      .def_readonly("beta", &oujump::DiffusionParams::beta)
      .def_readonly("nu", &oujump::DiffusionParams::nu)
      .def_readonly("xi", &oujump::DiffusionParams::xi)
      .def("__repr__", [](const oujump::DiffusionParams& d) {
        return "DiffusionParams(alpha=" + cli::format_number(d.alpha) + ", beta=" + cli::format_number(d.beta) +
               ", nu=" + cli::format_number(d.nu) + ", xi=" + cli::format_number(d.xi) + ")";
      });

  ou.def("scale_params", [](const chain::ChainParams& p, double eps) { return oujump::scale_params({eps, p}); },
         py::arg("p"), py::arg("epsilon"));
  ou.def("f_free", &oujump::f_free, py::arg("d"), py::arg("x"), py::arg("y"), py::arg("t"));
  ou.def("W_free", &oujump::W_free, py::arg("d"), py::arg("x"));
  ou.def("W", &oujump::W_cat, py::arg("d"), py::arg("x"));
  ou.def("f", &oujump::f_cat, py::arg("d"), py::arg("x"), py::arg("y"), py::arg("t"));
  ou.def("f_series", [](const oujump::DiffusionParams& d, double x, double y, double t) { return oujump::f_cat_sym(d, x, y, t); },
         py::arg("d"), py::arg("x"), py::arg("y"), py::arg("t"));
  ou.def("mean", &oujump::mean_cat_x, py::arg("d"), py::arg("y"), py::arg("t"));
  ou.def("second_moment", &oujump::m2_cat_x, py::arg("d"), py::arg("y"), py::arg("t"));
  ou.def("variance", &oujump::var_cat_x, py::arg("d"), py::arg("y"), py::arg("t"));
  ou.def("fpt_laplace", py::overload_cast<const oujump::DiffusionParams&, double, double>(&oujump::fpt_laplace_cat),
         py::arg("d"), py::arg("y"), py::arg("s"));
  ou.def("fpt_density", &oujump::fpt_density_cat_sym, py::arg("d"), py::arg("y"), py::arg("t"));
  ou.def("fpt_density_talbot", &oujump::fpt_density_cat_talbot, py::arg("d"), py::arg("y"), py::arg("t"),
         py::arg("n_nodes") = 32);
  ou.def("fpt_mean", &oujump::mean_fpt_cat, py::arg("d"), py::arg("y"));
  ou.def("fpt_second_moment", &oujump::m2_fpt_cat, py::arg("d"), py::arg("y"));

  // ----------------------------------------------------------------- mc
  auto mcm = m.def_submodule("mc", "Monte Carlo estimators");
  mcm.def("chain_law",
          [](const chain::ChainParams& p, int j, double t, std::uint64_t seed, long n_paths, int workers) {
            const auto e = mc::estimate_chain_law(p, j, t, sim_config(seed, n_paths, t, 0.0, workers));
            py::dict d;
            d["law"] = e.law.values();
            d["std_error"] = e.std_error;
            d["mean"] = estimate_dict(e.mean);
            d["second_moment"] = estimate_dict(e.second_moment);
            return d;
          },
          py::arg("p"), py::arg("j"), py::arg("t"), py::arg("seed") = 20240601, py::arg("n_paths") = 100000,
          py::arg("workers") = 0);
  mcm.def("diffusion_moments",
          [](const oujump::DiffusionParams& dp, double y, double t, double step, std::uint64_t seed, long n_paths,
             int workers) {
            const auto e = mc::estimate_ou_moments(dp, y, t, step, sim_config(seed, n_paths, t, 0.0, workers));
            py::dict d;
            d["mean"] = estimate_dict(e.mean);
            d["second_moment"] = estimate_dict(e.second_moment);
            d["variance"] = estimate_dict(e.variance);
            return d;
          },
          py::arg("d"), py::arg("y"), py::arg("t"), py::arg("step") = 0.1, py::arg("seed") = 20240601,
          py::arg("n_paths") = 100000, py::arg("workers") = 0);
  auto fpt_dict = [](const mc::FptEstimate& e) {
    py::dict d;
    d["mean"] = estimate_dict(e.mean);
    d["variance"] = estimate_dict(e.variance);
    d["censored"] = e.censored;
    d["flagged"] = e.flagged;
    d["halving_shift"] = e.halving_shift;
    return d;
  };
  mcm.def("chain_fpt",
          [fpt_dict](const chain::ChainParams& p, int j, std::uint64_t seed, long n_paths, int workers) {
            return fpt_dict(mc::estimate_fpt(p, j, sim_config(seed, n_paths, mc::default_horizon(p), 0.0, workers)));
          },
          py::arg("p"), py::arg("j"), py::arg("seed") = 20240601, py::arg("n_paths") = 100000, py::arg("workers") = 0);
  mcm.def("diffusion_fpt",
          [fpt_dict](const oujump::DiffusionParams& dp, double y, bool exact, std::uint64_t seed, long n_paths,
                     int workers) {
            const auto cfg = sim_config(seed, n_paths, mc::default_horizon(dp), 0.0, workers);
            return fpt_dict(mc::estimate_fpt(dp, y, cfg, exact ? mc::FptMode::exact : mc::FptMode::sign_change));
          },
          py::arg("d"), py::arg("y"), py::arg("exact") = false, py::arg("seed") = 20240601,
          py::arg("n_paths") = 100000, py::arg("workers") = 0);

  // ---------------------------------------------------------------- cli
  m.def("figure_ids", &cli::figure_ids);
  m.def("figure",
        [](const std::string& id) {
          py::list out;
          for (const auto& t : cli::figure(id)) out.append(table_dict(t));
          return out;
        },
        py::arg("id"), "tables behind a figure panel as dicts with name, params, columns and rows");
  m.def("to_csv",
        [](const std::string& name, const std::vector<std::pair<std::string, std::string>>& params,
           const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
          return cli::to_csv({name, params, columns, rows});
        },
        py::arg("name"), py::arg("params"), py::arg("columns"), py::arg("rows"));
  m.def("validate",
        [](const std::string& suite, double tol) {
          std::vector<py::tuple> out;
          for (const auto& r : cli::validate(suite, tol)) out.push_back(py::make_tuple(r.name, r.passed, r.detail));
          return out;
        },
        py::arg("suite") = "all", py::arg("tol") = 1e-7, "list of (name, passed, detail)");
  m.def("run", &cli::run, py::arg("args"), "run the command line with these arguments and return its exit status");
}
