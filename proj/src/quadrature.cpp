#include "ehrcat/quadrature.hpp"

#include "ehrcat/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <string>

namespace ehrcat::quad {

namespace {

void check(const Result& r, const Options& opt, const char* rule) {
  if (!std::isfinite(r.value))
    throw ConvergenceError(std::string(rule) + ": non-finite integral", r.error);
  const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(r.value));
  if (r.error > target)
    throw ConvergenceError(std::string(rule) + ": error estimate above tolerance", r.error);
}

} // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, const Options& opt) {
  Result r;
  if (a == b) return r;
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Boost only knows a relative target; fold abs_tol in through a one-panel
  // estimate of the L1 norm so rounding noise cannot drive the recursion.
  double l1 = 0.0, err0 = 0.0;
  Rule::integrate(f, a, b, 0, 1.0, &err0, &l1);
  const double rel = l1 > 0.0 ? std::max(opt.rel_tol, 0.5 * opt.abs_tol / l1) : opt.rel_tol;
  r.value = Rule::integrate(f, a, b, opt.max_depth, rel, &r.error, &l1);
  check(r, opt, "gauss_kronrod");
  return r;
}

Result tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                 const Options& opt) {
  Result r;
  if (a == b) return r;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  // Integrate on [-1, 1]; Boost hands over z and its complement (1 - z for
  // z > 0, -(1 + z) for z < 0).
  auto mapped = [&](double z, double zc) {
    double x, ga, gb;
    if (z < 0.0) {
      ga = -half * zc;
      x = a + ga;
      gb = (b - a) - ga;
    } else if (z > 0.0) {
      gb = half * zc;
      x = b - gb;
      ga = (b - a) - gb;
    } else {
      x = mid;
      ga = gb = half;
    }
    return f(x, ga, gb);
  };
  boost::math::quadrature::tanh_sinh<double> integrator(opt.max_depth > 15 ? 15 : opt.max_depth);
  double l1 = 0.0;
  const double tol = std::max(opt.rel_tol, 1e-15);
  r.value = half * integrator.integrate(mapped, tol, &r.error, &l1);
  r.error *= half;
  check(r, opt, "tanh_sinh");
  return r;
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, const Options& opt) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b, opt);
}

} // namespace ehrcat::quad
