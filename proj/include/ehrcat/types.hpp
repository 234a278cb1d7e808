#ifndef EHRCAT_TYPES_HPP
#define EHRCAT_TYPES_HPP

#include <cstddef>
#include <vector>

namespace ehrcat {

inline constexpr const char* kVersion = "0.1.0";

/// Truncation control for infinite series.
struct SeriesControl {
  double rel_tol = 1e-12;
  int max_terms = 10000;

  void validate() const;
};

/// A function sampled on a strictly increasing grid.
struct Curve {
  std::vector<double> grid;
  std::vector<double> samples;

  Curve() = default;
  Curve(std::vector<double> g, std::vector<double> s);

  std::size_t size() const noexcept { return grid.size(); }
  void validate() const;
};

/// `count` equally spaced points from `lo` to `hi` inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

} // namespace ehrcat

#endif // EHRCAT_TYPES_HPP
