#ifndef EHRCAT_MC_INL_HPP
#define EHRCAT_MC_INL_HPP

#include <algorithm>
#include <cmath>

namespace ehrcat::mc {

template <class Cdf> double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

} // namespace ehrcat::mc

#endif // EHRCAT_MC_INL_HPP
