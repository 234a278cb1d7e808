#ifndef EHRCAT_TALBOT_HPP
#define EHRCAT_TALBOT_HPP

#include <complex>
#include <functional>

namespace ehrcat::talbot {

using Transform = std::function<std::complex<double>(std::complex<double>)>;

/// Fixed-Talbot inversion of F at t > 0 with n_nodes contour points, no
/// cross-check.
double invert_raw(const Transform& F, double t, int n_nodes);

/// Fixed-Talbot inversion checked against a second run with 1.5x the nodes.
/// Throws ConvergenceError when the two disagree by more than 1e-4 relative.
double invert(const Transform& F, double t, int n_nodes = 32);

} // namespace ehrcat::talbot

#endif // EHRCAT_TALBOT_HPP
