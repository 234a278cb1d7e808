#ifndef EHRCAT_ERROR_HPP
#define EHRCAT_ERROR_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace ehrcat {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the requested operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A series, quadrature, ODE or inversion failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what + " (achieved " + format(achieved) + ")"), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }

  double achieved_;
};

/// The linear system behind a hitting-time solve was numerically singular.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

} // namespace ehrcat

#endif // EHRCAT_ERROR_HPP
