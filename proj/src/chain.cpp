#include "ehrcat/chain.hpp"

#include "ehrcat/error.hpp"
#include "ehrcat/numeric.hpp"
#include "ehrcat/quadrature.hpp"
#include "ehrcat/specfun.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <string>

namespace ehrcat::chain {

using numeric::CompensatedSum;
using numeric::log_binomial;
using numeric::log_pow;
using numeric::SignedLogSum;

namespace {

constexpr double kSymTol = 1e-12;

void check_time(double t) { require(t >= 0.0 && std::isfinite(t), "time must be finite and >= 0"); }

void require_symmetric(const ChainParams& p, const char* what) {
  if (!p.symmetric())
    throw DomainError(std::string(what) + ": requires lambda == mu (closed form exists only then)");
}

// sum_i C(N+j,i) C(N-j,N+n-i) b1^i (1-b1)^(N+j-i) b2^(N+n-i) (1-b2)^(i-j-n)
double binomial_convolution(int N, int j, int n, double lb1, double lc1, double lb2, double lc2) {
  const int lo = std::max(0, j + n);
  const int hi = std::min(N + n, N + j);
  // 0 * log 0 counts as 0
  const auto term = [](int k, double l) { return k == 0 ? 0.0 : k * l; };
  SignedLogSum sum;
  for (int i = lo; i <= hi; ++i)
    sum.add(log_binomial(N + j, i) + log_binomial(N - j, N + n - i) + term(i, lb1) +
                term(N + j - i, lc1) + term(N + n - i, lb2) + term(i - j - n, lc2),
            1);
  return sum.value();
}

} // namespace

// ------------------------------------------------------------------- params

void ChainParams::validate() const {
  require(N >= 1, "N must be >= 1");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be > 0");
  require(mu > 0.0 && std::isfinite(mu), "mu must be > 0");
  require(xi >= 0.0 && std::isfinite(xi), "xi must be >= 0");
}

bool ChainParams::symmetric() const noexcept {
  return std::abs(lambda - mu) <= kSymTol * std::max(lambda, mu);
}

void check_state(const ChainParams& p, int k) {
  if (k < -p.N || k > p.N)
    throw DomainError("state " + std::to_string(k) + " outside -N..N");
}

ProbVector::ProbVector(int N) : N_(N), values_(static_cast<std::size_t>(2 * N + 1), 0.0) {}

ProbVector::ProbVector(int N, std::vector<double> values) : N_(N), values_(std::move(values)) {
  require(values_.size() == static_cast<std::size_t>(2 * N + 1), "ProbVector: size must be 2N+1");
}

double ProbVector::sum() const {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value();
}

double ProbVector::moment(int k) const {
  CompensatedSum s;
  for (int n = -N_; n <= N_; ++n) s.add(std::pow(static_cast<double>(n), k) * (*this)[n]);
  return s.value();
}

void ProbVector::validate(double tol) const {
  for (double v : values_)
    require(v >= -tol && v <= 1.0 + tol, "ProbVector: entry outside [0,1]");
  require(std::abs(sum() - 1.0) <= tol, "ProbVector: entries do not sum to 1");
}

// -------------------------------------------------------------------- rates

std::vector<Transition> rates(const ChainParams& p, int k) {
  check_state(p, k);
  std::vector<Transition> out;
  const double up = p.lambda * (p.N - k);
  const double down = p.mu * (p.N + k);
  if (k < p.N) out.push_back({k + 1, up + (k == -1 ? p.xi : 0.0)});
  if (k > -p.N) out.push_back({k - 1, down + (k == 1 ? p.xi : 0.0)});
  if (k != 0 && k != 1 && k != -1 && p.xi > 0.0) out.push_back({0, p.xi});
  return out;
}

double total_rate(const ChainParams& p, int k) {
  check_state(p, k);
  double r = (k != 0 ? p.xi : 0.0);
  if (k < p.N) r += p.lambda * (p.N - k);
  if (k > -p.N) r += p.mu * (p.N + k);
  return r;
}

double b1(const ChainParams& p, double t) {
  check_time(t);
  const double s = p.lambda + p.mu;
  return (p.lambda + p.mu * std::exp(-s * t)) / s;
}

double b2(const ChainParams& p, double t) {
  check_time(t);
  const double s = p.lambda + p.mu;
  return p.lambda * -std::expm1(-s * t) / s;
}

// --------------------------------------------------------------- free chain

double p_free_decay(const ChainParams& p, int j, int n, double y, double one_minus_y) {
  const double s = p.lambda + p.mu;
  const double ls = std::log(s);
  const double lb1 = std::log(p.lambda + p.mu * y) - ls;
  const double lc1 = std::log(p.mu * one_minus_y) - ls;
  const double lb2 = std::log(p.lambda * one_minus_y) - ls;
  const double lc2 = std::log(p.mu + p.lambda * y) - ls;
  return binomial_convolution(p.N, j, n, lb1, lc1, lb2, lc2);
}

double p_free(const ChainParams& p, int j, int n, double t) {
  p.validate();
  check_state(p, j);
  check_state(p, n);
  check_time(t);
  const double s = p.lambda + p.mu;
  if (t == 0.0) return j == n ? 1.0 : 0.0;
  return p_free_decay(p, j, n, std::exp(-s * t), -std::expm1(-s * t));
}

ProbVector p_free_row(const ChainParams& p, int j, double t) {
  ProbVector v(p.N);
  for (int n = -p.N; n <= p.N; ++n) v[n] = p_free(p, j, n, t);
  return v;
}

double q_free(const ChainParams& p, int n) {
  p.validate();
  check_state(p, n);
  const double r = p.rho();
  return std::exp(log_binomial(2 * p.N, p.N - n) - 2.0 * p.N * std::log1p(r) + log_pow(r, n + p.N));
}

ProbVector q_free_law(const ChainParams& p) {
  ProbVector v(p.N);
  for (int n = -p.N; n <= p.N; ++n) v[n] = q_free(p, n);
  return v;
}

double q_free_mean(const ChainParams& p) {
  const double r = p.rho();
  return p.N * (r - 1.0) / (1.0 + r);
}

double q_free_variance(const ChainParams& p) {
  const double r = p.rho();
  return 2.0 * p.N * r / ((1.0 + r) * (1.0 + r));
}

double mean_free(const ChainParams& p, int j, double t) {
  p.validate();
  check_state(p, j);
  check_time(t);
  const double s = p.lambda + p.mu;
  const double e = std::exp(-s * t);
  return j * e + (p.lambda - p.mu) * p.N / s * -std::expm1(-s * t);
}

double var_free(const ChainParams& p, int j, double t) {
  p.validate();
  check_state(p, j);
  check_time(t);
  const double s = p.lambda + p.mu;
  const double e = std::exp(-s * t);
  return -std::expm1(-s * t) / (s * s) *
         ((p.N + j) * p.mu * (p.lambda + p.mu * e) + (p.N - j) * p.lambda * (p.mu + p.lambda * e));
}

// ------------------------------------------------------- with catastrophes

double q_cat(const ChainParams& p, int n) {
  p.validate();
  check_state(p, n);
  require(p.xi > 0.0, "q_cat: xi must be > 0 (use q_free)");
  const int N = p.N;
  const double s = p.lambda + p.mu;
  const double a = p.xi / s;
  const double log_pref = std::log(p.xi) + (N + n) * std::log(p.lambda) + (N - n) * std::log(p.mu) -
                          (2.0 * N + 1.0) * std::log(s);
  SignedLogSum sum;
  for (int i = std::max(0, n); i <= std::min(N, N + n); ++i) {
    const int m = 2 * N + n - 2 * i;
    const auto f1 = specfun::appell_f1_terminating_log(a, -i, n - i, a + m + 1, -p.mu / p.lambda,
                                                       -p.lambda / p.mu);
    if (f1.sign == 0) continue;
    sum.add(log_binomial(N, i) + log_binomial(N, N + n - i) + specfun::ln_beta(m + 1.0, a) +
                f1.log_abs,
            f1.sign);
  }
  const auto r = sum.result();
  return r.sign == 0 ? 0.0 : r.sign * std::exp(log_pref + r.log_abs);
}

double q_cat_quadrature(const ChainParams& p, int n) {
  p.validate();
  check_state(p, n);
  require(p.xi > 0.0, "q_cat_quadrature: xi must be > 0");
  // y = e^{-(lambda+mu) tau}, then w = y^a with a = xi/(lambda+mu):
  // q_n = int_0^1 p_free(0, n; y = w^{1/a}) dw.
  const double a = p.xi / (p.lambda + p.mu);
  auto integrand = [&](double w, double, double gap_right) {
    // log w from the right gap keeps precision near w = 1
    const double log_w = w > 0.5 ? std::log1p(-gap_right) : std::log(w);
    const double log_y = log_w / a;
    const double y = std::exp(log_y);
    return p_free_decay(p, 0, n, y, -std::expm1(log_y));
  };
  return quad::tanh_sinh(integrand, 0.0, 1.0, {1e-13, 1e-12, 15}).value;
}

ProbVector q_cat_law(const ChainParams& p) {
  if (p.xi == 0.0) return q_free_law(p);
  ProbVector v(p.N);
  for (int n = -p.N; n <= p.N; ++n) v[n] = q_cat(p, n);
  return v;
}

double p_cat_closed(const ChainParams& p, int j, int n, double t) {
  p.validate();
  check_state(p, j);
  check_state(p, n);
  check_time(t);
  if (p.xi == 0.0) return p_free(p, j, n, t);
  if (t == 0.0) return j == n ? 1.0 : 0.0;

  const int N = p.N;
  const double s = p.lambda + p.mu;
  const double a = p.xi / s;
  const double y = std::exp(-s * t);
  const double log_y = -s * t;
  const double log_ml = std::log(p.mu / p.lambda);

  SignedLogSum corr;
  for (int i = std::max(0, n); i <= std::min(N, N + n); ++i) {
    const int m = 2 * N + n - 2 * i;
    const double log_bin = log_binomial(N, i) + log_binomial(N, N + n - i);
    std::vector<double> log_f(static_cast<std::size_t>(2 * i - n + 1));
    for (int hk = 0; hk <= 2 * i - n; ++hk)
      log_f[static_cast<std::size_t>(hk)] =
          specfun::gauss_2f1_terminating_log(a + hk, -m, a + hk + 1.0, y).log_abs -
          std::log(p.xi + hk * s);
    for (int h = 0; h <= i; ++h) {
      const double lh = log_binomial(i, h) + h * (log_ml + log_y);
      for (int k = 0; k <= i - n; ++k) {
        const double lk = log_binomial(i - n, k) + k * (log_y - log_ml);
        corr.add(log_bin + lh + lk + log_f[static_cast<std::size_t>(h + k)], 1);
      }
    }
  }
  const double log_pref = std::log(p.xi) + (N + n) * std::log(p.lambda) + (N - n) * std::log(p.mu) -
                          2.0 * N * std::log(s) - p.xi * t;
  const auto c = corr.result();
  CompensatedSum total;
  total.add(q_cat(p, n));
  total.add(std::exp(-p.xi * t) * p_free(p, j, n, t));
  if (c.sign != 0) total.add(-std::exp(log_pref + c.log_abs));
  return total.value();
}

ProbVector p_cat_closed_row(const ChainParams& p, int j, double t) {
  ProbVector v(p.N);
  for (int n = -p.N; n <= p.N; ++n) v[n] = p_cat_closed(p, j, n, t);
  return v;
}

double p_cat_quadrature(const ChainParams& p, int j, int n, double t) {
  p.validate();
  check_state(p, j);
  check_state(p, n);
  check_time(t);
  const double head = std::exp(-p.xi * t) * p_free(p, j, n, t);
  if (p.xi == 0.0 || t == 0.0) return head;
  const ChainParams f = p.free();
  auto integrand = [&](double tau) { return std::exp(-p.xi * tau) * p_free(f, 0, n, tau); };
  return head + p.xi * quad::gauss_kronrod(integrand, 0.0, t, {1e-13, 1e-12, 18}).value;
}

ProbVector p_cat_quadrature_row(const ChainParams& p, int j, double t) {
  ProbVector v(p.N);
  for (int n = -p.N; n <= p.N; ++n) v[n] = p_cat_quadrature(p, j, n, t);
  return v;
}

std::vector<ProbVector> ode_transient(const ChainParams& p, int j, const std::vector<double>& grid,
                                      double abs_tol, double rel_tol) {
  namespace odeint = boost::numeric::odeint;
  p.validate();
  check_state(p, j);
  require(!grid.empty(), "ode_transient: empty grid");
  require(grid.front() >= 0.0, "ode_transient: grid must start at t >= 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    require(grid[k] > grid[k - 1], "ode_transient: grid must be strictly increasing");

  using State = std::vector<double>;
  const int N = p.N;
  struct Edge {
    int from, to;
    double rate;
  };
  std::vector<Edge> edges;
  std::vector<double> out(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) {
    for (const auto& tr : rates(p, k)) edges.push_back({k + N, tr.target + N, tr.rate});
    out[static_cast<std::size_t>(k + N)] = total_rate(p, k);
  }
  auto rhs = [&](const State& x, State& dxdt, double) {
    for (std::size_t i = 0; i < x.size(); ++i) dxdt[i] = -out[i] * x[i];
    for (const auto& e : edges)
      dxdt[static_cast<std::size_t>(e.to)] += e.rate * x[static_cast<std::size_t>(e.from)];
  };

  State x(static_cast<std::size_t>(2 * N + 1), 0.0);
  x[static_cast<std::size_t>(j + N)] = 1.0;
  std::vector<ProbVector> result;
  result.reserve(grid.size());
  auto observer = [&](const State& s, double) { result.emplace_back(N, s); };

  std::vector<double> times;
  if (grid.front() > 0.0) times.push_back(0.0);
  times.insert(times.end(), grid.begin(), grid.end());
  try {
    auto stepper = odeint::make_dense_output(abs_tol, rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3, observer);
  } catch (const ehrcat::Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("ode_transient: step-size underflow: ") + e.what(), abs_tol);
  }
  if (grid.front() > 0.0) result.erase(result.begin());
  return result;
}

double mean_cat(const ChainParams& p, int j, double t) {
  p.validate();
  check_state(p, j);
  check_time(t);
  const double A = p.lambda + p.mu + p.xi;
  return j * std::exp(-A * t) + (p.lambda - p.mu) * p.N / A * -std::expm1(-A * t);
}

double m2_cat(const ChainParams& p, int j, double t) {
  p.validate();
  check_state(p, j);
  check_time(t);
  const double l = p.lambda, m = p.mu, x = p.xi;
  const double N = p.N, J = j;
  const double s = l + m;
  const double A = s + x;
  const double B = 2.0 * s + x;
  const double d = m - l;
  const double c0 = N / (A * B) * (4.0 * l * m + 2.0 * N * d * d + x * s);
  const double c1 = d * (1.0 - 2.0 * N) / (s * A) * (N * d + J * A);
  const double c2 = 1.0 / (s * B) *
                    (2.0 * N * N * d * d - 2.0 * N * (l * l + m * m) - J * x * d - 2.0 * J * (m * m - l * l) +
                     4.0 * J * N * (m * m - l * l) + 2.0 * J * x * N * d + 2.0 * J * J * s * s +
                     J * J * x * s);
  CompensatedSum r;
  r.add(c0);
  r.add(c1 * std::exp(-A * t));
  r.add(c2 * std::exp(-B * t));
  return r.value();
}

double var_cat(const ChainParams& p, int j, double t) {
  const double mean = mean_cat(p, j, t);
  return m2_cat(p, j, t) - mean * mean;
}

double mean_cat_limit(const ChainParams& p) {
  p.validate();
  return (p.lambda - p.mu) * p.N / (p.lambda + p.mu + p.xi);
}

double m2_cat_limit(const ChainParams& p) {
  p.validate();
  const double l = p.lambda, m = p.mu, x = p.xi;
  const double s = l + m;
  return p.N * (4.0 * l * m + 2.0 * p.N * (m - l) * (m - l) + x * s) / ((s + x) * (2.0 * s + x));
}

// ------------------------------------------------------------ first passage

double fpt_density_free_sym(const ChainParams& p, int j, double t) {
  p.validate();
  require_symmetric(p, "fpt_density_free_sym");
  check_state(p, j);
  require(j != 0, "fpt_density_free_sym: j must be nonzero");
  check_time(t);
  const ChainParams f = p.free();
  const double sg = j > 0 ? 1.0 : -1.0;
  return p.mu * (p.N + 1) * sg * (p_free(f, j, 1, t) - p_free(f, j, -1, t));
}

namespace {

double free_fpt_mass(const ChainParams& p, int j, double t0, double t1) {
  if (t1 <= t0) return 0.0;
  auto g = [&](double tau) { return fpt_density_free_sym(p, j, tau); };
  return quad::gauss_kronrod(g, t0, t1, {1e-14, 1e-12, 18}).value;
}

} // namespace

double fpt_density_cat(const ChainParams& p, int j, double t) {
  const double g = fpt_density_free_sym(p, j, t);
  if (p.xi == 0.0) return g;
  const double survival = 1.0 - free_fpt_mass(p, j, 0.0, t);
  return std::exp(-p.xi * t) * (g + p.xi * survival);
}

Curve fpt_density_cat_curve(const ChainParams& p, int j, const std::vector<double>& grid) {
  require(!grid.empty(), "fpt_density_cat_curve: empty grid");
  require(grid.front() >= 0.0, "fpt_density_cat_curve: grid must start at t >= 0");
  std::vector<double> out;
  out.reserve(grid.size());
  CompensatedSum mass;
  double prev = 0.0;
  for (double t : grid) {
    mass.add(free_fpt_mass(p, j, prev, t));
    prev = t;
    const double g = fpt_density_free_sym(p, j, t);
    out.push_back(std::exp(-p.xi * t) * (g + p.xi * (1.0 - mass.value())));
  }
  return Curve(grid, std::move(out));
}

FptMoments fpt_moments_linear(const ChainParams& p, int j) {
  p.validate();
  check_state(p, j);
  require(j != 0, "fpt_moments_linear: j must be nonzero");
  const int N = p.N;
  const int dim = 2 * N;
  // index of state k != 0
  auto idx = [N](int k) { return k < 0 ? k + N : k + N - 1; };
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = -N; k <= N; ++k) {
    if (k == 0) continue;
    Q(idx(k), idx(k)) = -total_rate(p, k);
    for (const auto& tr : rates(p, k))
      if (tr.target != 0) Q(idx(k), idx(tr.target)) += tr.rate;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Q);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14))
    throw SingularMatrixError("fpt_moments_linear: sub-generator is numerically singular (rcond " +
                              std::to_string(rcond) + ")");
  const Eigen::VectorXd m = lu.solve(-Eigen::VectorXd::Ones(dim));
  const Eigen::VectorXd w = lu.solve(-2.0 * m);
  return {m(idx(j)), w(idx(j))};
}

} // namespace ehrcat::chain
