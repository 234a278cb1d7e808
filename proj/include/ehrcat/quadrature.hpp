#ifndef EHRCAT_QUADRATURE_HPP
#define EHRCAT_QUADRATURE_HPP

#include <functional>

namespace ehrcat::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  unsigned max_depth = 18;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) on a finite interval. Throws
/// ConvergenceError when the error estimate exceeds
/// max(abs_tol, rel_tol*|value|).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Options& opt = {});

/// Double-exponential (tanh-sinh) rule on a finite interval. Tolerates
/// integrable endpoint singularities. The integrand receives (x, x - a, b - x)
/// with both gaps computed without cancellation.
Result tanh_sinh(const std::function<double(double, double, double)>& f, double a, double b,
                 const Options& opt = {});

/// Convenience overload for integrands that do not need the complement.
Result tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

} // namespace ehrcat::quad

#endif // EHRCAT_QUADRATURE_HPP
