#ifndef EHRCAT_NUMERIC_HPP
#define EHRCAT_NUMERIC_HPP

// Summation helpers shared by the closed-form evaluators.

#include <cmath>
#include <limits>
#include <vector>

namespace ehrcat::numeric {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A real number held as sign * exp(log_abs).
struct SignedLog {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

/// Sum of terms given in log-magnitude/sign form. Terms are rescaled by the
/// largest magnitude before a compensated sum, so 2^N-sized intermediates
/// neither overflow nor swamp the small ones.
class SignedLogSum {
public:
  void add(double log_abs, int sign) {
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return;
    terms_.push_back({log_abs, sign});
    if (log_abs > max_) max_ = log_abs;
  }
  void add(const SignedLog& t) { add(t.log_abs, t.sign); }
  void clear() noexcept {
    terms_.clear();
    max_ = -std::numeric_limits<double>::infinity();
  }

  SignedLog result() const {
    if (terms_.empty()) return {};
    CompensatedSum s;
    for (const auto& t : terms_) s.add(t.sign * std::exp(t.log_abs - max_));
    const double v = s.value();
    if (v == 0.0) return {};
    return {max_ + std::log(std::abs(v)), v > 0 ? 1 : -1};
  }
  double value() const { return result().value(); }

private:
  std::vector<SignedLog> terms_;
  double max_ = -std::numeric_limits<double>::infinity();
};

/// k * log(base) with the convention 0 * log(0) = 0.
inline double log_pow(double base, long k) noexcept {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * std::log(base);
}

/// log C(n, k) for 0 <= k <= n; -inf outside that range.
double log_binomial(long n, long k);

/// log n!
double log_factorial(long n);

} // namespace ehrcat::numeric

#endif // EHRCAT_NUMERIC_HPP
