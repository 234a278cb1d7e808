#include "ehrcat/numeric.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>

namespace ehrcat::numeric {

namespace {

constexpr long kTableSize = 4096;

const std::array<double, kTableSize>& factorial_table() {
  static const std::array<double, kTableSize> table = [] {
    std::array<double, kTableSize> t{};
    t[0] = 0.0;
    for (long i = 1; i < kTableSize; ++i) t[i] = boost::math::lgamma(static_cast<double>(i) + 1.0);
    return t;
  }();
  return table;
}

} // namespace

double log_factorial(long n) {
  if (n < kTableSize) return factorial_table()[static_cast<std::size_t>(n)];
  return boost::math::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

} // namespace ehrcat::numeric
