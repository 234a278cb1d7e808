#include "ehrcat/chain.hpp"
#include "ehrcat/error.hpp"
#include "ehrcat/quadrature.hpp"
#include "oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ehrcat;
using namespace ehrcat::chain;

namespace {

double max_diff(const ProbVector& a, const double* ref) {
  double m = 0.0;
  for (int n = -a.N(); n <= a.N(); ++n) m = std::max(m, std::abs(a[n] - ref[n + a.N()]));
  return m;
}

double max_diff(const ProbVector& a, const ProbVector& b) {
  double m = 0.0;
  for (int n = -a.N(); n <= a.N(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

} // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((ChainParams{10, 0.6, 0.6, 0.5}.validate()));
  CHECK_THROWS_AS((ChainParams{0, 0.6, 0.6, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((ChainParams{2, -0.6, 0.6, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((ChainParams{2, 0.6, 0.0, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((ChainParams{2, 0.6, 0.6, -1.0}.validate()), DomainError);
  CHECK_THROWS_AS(check_state(ChainParams{2, 1, 1, 0}, 3), DomainError);
  CHECK(ChainParams{2, 0.6, 0.6 * (1 + 1e-14), 0}.symmetric());
  CHECK_FALSE(ChainParams{2, 0.6, 0.6 * (1 + 1e-10), 0}.symmetric());
}

TEST_CASE("rates") {
  const ChainParams p{10, 0.6, 0.6, 0.5};
  auto rate_to = [&](int k, int target) {
    for (auto tr : rates(p, k))
      if (tr.target == target) return tr.rate;
    return 0.0;
  };
  CHECK(rate_to(-1, 0) == doctest::Approx(7.1).epsilon(1e-15));
  CHECK(rate_to(1, 0) == doctest::Approx(0.6 * 11 + 0.5).epsilon(1e-15));
  CHECK(rates(p, -1).size() == 2);
  CHECK(rate_to(10, 9) == doctest::Approx(0.6 * 20));
  CHECK(rate_to(10, 0) == 0.5);
  CHECK(rate_to(10, 11) == 0.0);
  CHECK(rates(p, 10).size() == 2);
  CHECK(rates(p, 0).size() == 2);
  CHECK(rate_to(0, 1) == doctest::Approx(6.0));
  CHECK(total_rate(p, 4) == doctest::Approx(0.6 * 6 + 0.6 * 14 + 0.5));
}

TEST_CASE("b1 and b2") {
  const ChainParams p{5, 0.6, 0.2, 0.0};
  CHECK(b1(p, 0) == 1.0);
  CHECK(b2(p, 0) == 0.0);
  CHECK(b1(p, 200) == doctest::Approx(0.75));
  CHECK(b2(p, 200) == doctest::Approx(0.75));
  const ChainParams s{5, 0.6, 0.6, 0.0};
  for (double t : {0.1, 1.0, 3.0}) CHECK(b1(s, t) + b2(s, t) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("free chain transition law") {
  const ChainParams p{10, 0.6, 0.2, 0.0};
  CHECK(max_diff(p_free_row(p, 3, 1.0), oracle::p_free_t1) < 1e-13);
  for (int n = -10; n <= 10; ++n) CHECK(p_free(p, 3, n, 0.0) == (n == 3 ? 1.0 : 0.0));
  for (int j : {-10, 0, 7})
    for (double t : {0.01, 1.0, 30.0}) CHECK(p_free_row(p, j, t).sum() == doctest::Approx(1.0).epsilon(1e-13));
  for (int j : {-4, 2})
    for (int n = -10; n <= 10; ++n)
      CHECK(std::abs(p_free(p, j, n, 0.7) - p_free(p.swapped(), -j, -n, 0.7)) <= 1e-12 * p_free(p, j, n, 0.7) + 1e-300);
}

TEST_CASE("Chapman-Kolmogorov") {
  const ChainParams p{5, 0.3, 0.7, 0.0};
  for (auto [s, t] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}})
    for (int j : {-5, 1})
      for (int n = -5; n <= 5; ++n) {
        double sum = 0.0;
        for (int k = -5; k <= 5; ++k) sum += p_free(p, j, k, s) * p_free(p, k, n, t);
        CHECK(std::abs(sum - p_free(p, j, n, s + t)) < 1e-9);
      }
}

TEST_CASE("free stationary law and moments") {
  const ChainParams one{1, 0.6, 0.6, 0.0};
  CHECK(q_free(one, -1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q_free(one, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q_free(one, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q_free_mean(ChainParams{10, 0.6, 0.6, 0}) == 0.0);
  const ChainParams up{10, 0.6, 0.2, 0}, down{10, 0.2, 0.6, 0};
  for (int n = -10; n <= 10; ++n) CHECK(q_free(up, n) == doctest::Approx(q_free(down, -n)).epsilon(1e-14));
  const auto q = q_free_law(up);
  CHECK(q.moment(1) == doctest::Approx(q_free_mean(up)).epsilon(1e-13));
  CHECK(q.moment(2) - q.moment(1) * q.moment(1) == doctest::Approx(q_free_variance(up)).epsilon(1e-12));

  CHECK(mean_free(up, 4, 0.0) == 4.0);
  CHECK(var_free(up, 4, 0.0) == 0.0);
  CHECK(mean_free(up, 4, 100.0) == doctest::Approx(5.0).epsilon(1e-14));
  for (double t : {0.5, 1.0, 5.0}) {
    const auto row = p_free_row(up, -3, t);
    const double m = row.moment(1);
    CHECK(std::abs(mean_free(up, -3, t) - m) < 1e-10);
    CHECK(std::abs(var_free(up, -3, t) - (row.moment(2) - m * m)) < 1e-10);
  }
}

TEST_CASE("stationary law with catastrophes") {
  const ChainParams one{1, 0.6, 0.6, 0.5};
  CHECK(q_cat(one, 0) == doctest::Approx(0.5862068965517241).epsilon(1e-14));
  CHECK(q_cat(one, 1) == doctest::Approx(0.2068965517241379).epsilon(1e-13));
  CHECK(max_diff(q_cat_law(one), oracle::q_n1) < 1e-14);
  CHECK(max_diff(q_cat_law({10, 0.6, 0.6, 0.5}), oracle::q_sym) < 1e-12);
  CHECK(max_diff(q_cat_law({10, 0.2, 0.6, 0.5}), oracle::q_asym) < 1e-12);
  CHECK(max_diff(q_cat_law({10, 0.6, 0.2, 0.5}), oracle::q_up) < 1e-12);
  CHECK_THROWS_AS(q_cat(ChainParams{3, 1, 1, 0.0}, 0), DomainError);
}

TEST_CASE("stationary closed form against quadrature") {
  for (int N : {1, 2, 5, 10})
    for (auto [lam, mu] : {std::pair{0.6, 0.6}, std::pair{0.2, 0.6}, std::pair{0.6, 0.2}, std::pair{0.3, 0.2}})
      for (double xi : {0.25, 0.5, 1.0, 1.5}) {
        const ChainParams p{N, lam, mu, xi};
        const auto q = q_cat_law(p);
        CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-10));
        for (int n = -N; n <= N; ++n) {
          CHECK(std::abs(q[n] - q_cat_quadrature(p, n)) < 1e-9);
          CHECK(std::abs(q[n] - q_cat(p.swapped(), -n)) <= 1e-12 * q[n]);
        }
      }
}

TEST_CASE("small xi approaches the free stationary law") {
  for (auto [lam, mu] : {std::pair{0.6, 0.6}, std::pair{0.2, 0.6}}) {
    const ChainParams p{10, lam, mu, 1e-6};
    CHECK(max_diff(q_cat_law(p), q_free_law(p)) <= 1e-4);
  }
}

TEST_CASE("transient law against the matrix exponential") {
  CHECK(max_diff(p_cat_closed_row({10, 0.6, 0.6, 0.5}, 6, 1.0), oracle::p_sym_t1) < 1e-12);
  CHECK(max_diff(p_cat_closed_row({10, 0.6, 0.6, 0.5}, 6, 0.1), oracle::p_sym_t01) < 1e-12);
  CHECK(max_diff(p_cat_closed_row({10, 0.2, 0.6, 0.5}, 6, 1.0), oracle::p_asym_t1) < 1e-12);
  CHECK(max_diff(p_cat_closed_row({10, 0.6, 0.2, 0.5}, -6, 5.0), oracle::p_up_t5) < 1e-12);
  CHECK(max_diff(p_cat_quadrature_row({10, 0.6, 0.6, 0.5}, 6, 1.0), oracle::p_sym_t1) < 1e-11);
  const auto ode = ode_transient({10, 0.2, 0.6, 0.5}, 6, {0.0, 1.0});
  CHECK(max_diff(ode[1], oracle::p_asym_t1) < 1e-8);
}

TEST_CASE("transient law properties") {
  const ChainParams p{10, 0.3, 0.2, 0.5};
  for (int n = -10; n <= 10; ++n) CHECK(p_cat_closed(p, -2, n, 0.0) == (n == -2 ? 1.0 : 0.0));
  const double late = 50.0 / (p.lambda + p.mu + p.xi);
  CHECK(max_diff(p_cat_closed_row(p, 7, late), q_cat_law(p)) <= 1e-8);
  for (int n = -10; n <= 10; ++n) {
    const double a = p_cat_closed(p, 4, n, 0.8), b = p_cat_closed(p.swapped(), -4, -n, 0.8);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a) + 1e-300);
  }
  // xi = 0 routes to the free law in every path
  const ChainParams f{4, 0.3, 0.2, 0.0};
  for (int n = -4; n <= 4; ++n) {
    CHECK(p_cat_closed(f, 1, n, 0.9) == p_free(f, 1, n, 0.9));
    CHECK(p_cat_quadrature(f, 1, n, 0.9) == doctest::Approx(p_free(f, 1, n, 0.9)).epsilon(1e-14));
  }
  CHECK(max_diff(ode_transient(f, 1, {0.9})[0], p_free_row(f, 1, 0.9)) < 1e-7);
}

TEST_CASE("oracle triangle on the parameter sweep") {
  const std::vector<double> grid{0.1, 0.5, 1.0, 5.0};
  double worst = 0.0;
  for (int N : {1, 2, 5, 10})
    for (auto [lam, mu] : {std::pair{0.6, 0.6}, std::pair{0.2, 0.6}, std::pair{0.6, 0.2}, std::pair{0.3, 0.2}})
      for (double xi : {0.0, 0.25, 0.5, 1.0, 1.5})
        for (int j : {-6, 0, 6}) {
          if (std::abs(j) > N) continue;
          const ChainParams p{N, lam, mu, xi};
          const auto ode = ode_transient(p, j, grid);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto closed = p_cat_closed_row(p, j, grid[i]);
            const auto quad = p_cat_quadrature_row(p, j, grid[i]);
            worst = std::max({worst, max_diff(closed, quad), max_diff(closed, ode[i]), max_diff(quad, ode[i])});
            CHECK_NOTHROW(closed.validate(1e-9));
            CHECK_NOTHROW(quad.validate(1e-9));
            CHECK_NOTHROW(ode[i].validate(1e-9));
          }
        }
  CHECK(worst <= 1e-7);
}

TEST_CASE("ode output starts at the unit vector") {
  const auto out = ode_transient({3, 0.4, 0.9, 0.3}, -2, {0.0, 0.5});
  REQUIRE(out.size() == 2);
  for (int n = -3; n <= 3; ++n) CHECK(out[0][n] == (n == -2 ? 1.0 : 0.0));
  CHECK_THROWS_AS(ode_transient({3, 0.4, 0.9, 0.3}, 0, {1.0, 0.5}), DomainError);
}

TEST_CASE("moments with catastrophes") {
  const ChainParams p{10, 0.6, 0.2, 0.5};
  CHECK(mean_cat(p, 6, 0.0) == 6.0);
  CHECK(m2_cat(p, 6, 0.0) == doctest::Approx(36.0).epsilon(1e-15));
  CHECK(mean_cat_limit(p) == doctest::Approx(4.0 / 1.3).epsilon(1e-14));
  for (const ChainParams& c : {p, ChainParams{10, 0.6, 0.6, 0.5}, ChainParams{5, 0.3, 0.2, 1.5}}) {
    for (double t : {0.2, 1.0, 3.0, 8.0}) {
      const auto row = p_cat_closed_row(c, 6 % (c.N + 1), t);
      CHECK(std::abs(mean_cat(c, 6 % (c.N + 1), t) - row.moment(1)) < 1e-8);
      CHECK(std::abs(m2_cat(c, 6 % (c.N + 1), t) - row.moment(2)) < 1e-8);
    }
    const double late = 50.0 / (c.lambda + c.mu + c.xi);
    CHECK(std::abs(mean_cat(c, 1, late) - mean_cat_limit(c)) < 1e-6);
    CHECK(std::abs(m2_cat(c, 1, late) - m2_cat_limit(c)) < 1e-6);
    const auto q = q_cat_law(c);
    CHECK(std::abs(q.moment(1) - mean_cat_limit(c)) < 1e-8);
    CHECK(std::abs(q.moment(2) - m2_cat_limit(c)) < 1e-8);
  }
  // xi = 0 agrees with the free moments
  const ChainParams f = p.free();
  CHECK(mean_cat(f, 3, 1.3) == doctest::Approx(mean_free(f, 3, 1.3)).epsilon(1e-13));
  CHECK(var_cat(f, 3, 1.3) == doctest::Approx(var_free(f, 3, 1.3)).epsilon(1e-12));
}

TEST_CASE("moment equations hold under quadrature") {
  // M_k(t) = e^{-xi t} M~_k(j,t) + xi int_0^t e^{-xi s} M~_k(0,s) ds
  const ChainParams p{10, 0.3, 0.2, 0.5};
  const double t = 2.0;
  const auto f = p.free();
  auto m2_free = [&](int j, double s) { const double m = mean_free(f, j, s); return var_free(f, j, s) + m * m; };
  const double i1 = quad::gauss_kronrod([&](double s) { return p.xi * std::exp(-p.xi * s) * mean_free(f, 0, s); }, 0, t).value;
  const double i2 = quad::gauss_kronrod([&](double s) { return p.xi * std::exp(-p.xi * s) * m2_free(0, s); }, 0, t).value;
  CHECK(std::abs(mean_cat(p, 5, t) - (std::exp(-p.xi * t) * mean_free(f, 5, t) + i1)) < 1e-8);
  CHECK(std::abs(m2_cat(p, 5, t) - (std::exp(-p.xi * t) * m2_free(5, t) + i2)) < 1e-8);
}

TEST_CASE("free first-passage density") {
  const ChainParams p{10, 0.6, 0.6, 0.0};
  CHECK(fpt_density_free_sym(p, 4, 0.0) == 0.0);
  for (double t : {0.1, 0.7, 3.0}) CHECK(fpt_density_free_sym(p, 4, t) == doctest::Approx(fpt_density_free_sym(p, -4, t)).epsilon(1e-13));
  const double mass = quad::gauss_kronrod([&](double t) { return fpt_density_free_sym(p, 3, t); }, 0, 60).value;
  CHECK(std::abs(mass - 1.0) < 1e-6);
  CHECK_THROWS_AS(fpt_density_free_sym({10, 0.6, 0.2, 0.0}, 3, 1.0), DomainError);
  CHECK_THROWS_AS(fpt_density_free_sym(p, 0, 1.0), DomainError);
}

TEST_CASE("first-passage density with catastrophes") {
  const ChainParams p{10, 0.6, 0.6, 0.5};
  for (int j : {2, 3, 6, -6}) CHECK(fpt_density_cat(p, j, 0.0) == 0.5);
  // from +-1 the direct jump to 0 adds its rate at t = 0
  CHECK(fpt_density_cat(p, 1, 0.0) == doctest::Approx(0.6 * 11 + 0.5));
  const double mass = quad::gauss_kronrod([&](double t) { return fpt_density_cat(p, 3, t); }, 0, 80).value;
  CHECK(std::abs(mass - 1.0) < 1e-6);
  const double mean = quad::gauss_kronrod([&](double t) { return t * fpt_density_cat(p, 3, t); }, 0, 80).value;
  CHECK(std::abs(mean - fpt_moments_linear(p, 3).mean) < 1e-6);
  for (double t : {0.3, 2.0}) CHECK(fpt_density_cat(p.free(), 3, t) == doctest::Approx(fpt_density_free_sym(p.free(), 3, t)).epsilon(1e-12));
  const auto grid = linspace(0.0, 5.0, 51);
  const auto curve = fpt_density_cat_curve(p, 6, grid);
  for (std::size_t i = 0; i < grid.size(); i += 10) {
    CHECK(curve.samples[i] >= 0.0);
    CHECK(std::abs(curve.samples[i] - fpt_density_cat(p, 6, grid[i])) < 1e-9);
  }
  CHECK_THROWS_AS(fpt_density_cat(p, 0, 1.0), DomainError);
  CHECK_THROWS_AS(fpt_density_cat({10, 0.3, 0.2, 0.5}, 3, 1.0), DomainError);
}

TEST_CASE("first-passage moments by linear solve") {
  const auto a = fpt_moments_linear({10, 0.6, 0.6, 0.5}, 3);
  CHECK(a.mean == doctest::Approx(oracle::fpt_sym_j3[0]).epsilon(1e-12));
  CHECK(a.second_moment == doctest::Approx(oracle::fpt_sym_j3[1]).epsilon(1e-12));
  const auto b = fpt_moments_linear({10, 0.3, 0.2, 0.5}, 6);
  CHECK(b.mean == doctest::Approx(oracle::fpt_asym_j6[0]).epsilon(1e-12));
  CHECK(b.second_moment == doctest::Approx(oracle::fpt_asym_j6[1]).epsilon(1e-12));
  const auto c = fpt_moments_linear({10, 0.6, 0.6, 0.25}, 1);
  CHECK(c.mean == doctest::Approx(oracle::fpt_sym_j1[0]).epsilon(1e-12));
  CHECK(c.variance() > 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double xi : {0.0, 0.25, 0.5, 1.0, 1.5}) {
    const double m = fpt_moments_linear({10, 0.3, 0.3, xi}, 3).mean;
    CHECK(m < prev);
    prev = m;
  }
  CHECK_THROWS_AS(fpt_moments_linear({10, 0.3, 0.3, 0.5}, 0), DomainError);
}
