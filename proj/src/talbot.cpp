#include "ehrcat/talbot.hpp"

#include "ehrcat/error.hpp"

#include <cmath>
#include <numbers>

namespace ehrcat::talbot {

namespace {

struct Inversion {
  double value;
  double noise; // rounding floor from the largest contour terms
};

Inversion run(const Transform& F, double t, int n_nodes) {
  require(t > 0.0 && std::isfinite(t), "talbot: t must be > 0");
  require(n_nodes >= 2, "talbot: need at least 2 nodes");
  const double M = n_nodes;
  const double r = 2.0 * M / (5.0 * t);
  std::complex<double> sum = 0.5 * F(r) * std::exp(r * t);
  double magnitude = std::abs(sum);
  for (int k = 1; k < n_nodes; ++k) {
    const double theta = k * std::numbers::pi / M;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    // nodes far down the contour contribute below double precision
    if ((s * t).real() < -100.0) continue;
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> term = std::exp(t * s) * F(s) * std::complex<double>(1.0, sigma);
    sum += term;
    magnitude = std::max(magnitude, std::abs(term));
  }
  const double v = r / M * sum.real();
  if (!std::isfinite(v)) throw ConvergenceError("talbot: non-finite inversion", 0.0);
  return {v, 1e-15 * r * magnitude};
}

} // namespace

double invert_raw(const Transform& F, double t, int n_nodes) { return run(F, t, n_nodes).value; }

double invert(const Transform& F, double t, int n_nodes) {
  const Inversion a = run(F, t, n_nodes);
  const Inversion b = run(F, t, n_nodes + n_nodes / 2);
  const double diff = std::abs(a.value - b.value);
  const double scale = std::max(std::abs(a.value), std::abs(b.value));
  // disagreement below the rounding floor of the larger run is not oscillation
  if (diff > 1e-4 * scale + a.noise + b.noise)
    throw ConvergenceError("talbot: oscillation detected between node counts", diff / scale);
  return a.value;
}

} // namespace ehrcat::talbot
