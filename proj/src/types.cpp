#include "ehrcat/types.hpp"

#include "ehrcat/error.hpp"

#include <cmath>
#include <utility>

namespace ehrcat {

void SeriesControl::validate() const {
  require(rel_tol > 0.0 && std::isfinite(rel_tol), "SeriesControl: rel_tol must be positive");
  require(max_terms >= 1, "SeriesControl: max_terms must be >= 1");
}

Curve::Curve(std::vector<double> g, std::vector<double> s) : grid(std::move(g)), samples(std::move(s)) {
  validate();
}

void Curve::validate() const {
  require(grid.size() == samples.size(), "Curve: grid and samples differ in length");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "Curve: grid must be strictly increasing");
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

} // namespace ehrcat
