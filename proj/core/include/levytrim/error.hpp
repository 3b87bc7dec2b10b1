#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace levytrim {

namespace detail {
inline std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}
}  // namespace detail

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unknown catalog name, out-of-range parameter, malformed grid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A root finder or quadrature did not converge. Carries the last bracket.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double lo, double hi)
      : Error(what + " [bracket " + detail::short_number(lo) + ", " + detail::short_number(hi) + "]"),
        lo_(lo),
        hi_(hi) {}
  explicit NumericFailure(const std::string& what) : Error(what) {}

  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

/// The measure lacks both a density and a closed form for the requested integral.
class UnsupportedMeasure : public Error {
 public:
  using Error::Error;
};

/// The requested jump resolution exceeds the configured count budget.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Fewer resolved jumps than the trimming order on some side.
class InsufficientResolution : public Error {
 public:
  using Error::Error;
};

/// A precondition on the measure or the call was violated (e.g. trimming a finite-activity side).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// V(x) = 0 while the tail above x carries mass.
class InconsistentMeasure : public Error {
 public:
  using Error::Error;
};

/// No root for a norming equation inside the search bracket.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double lo, double hi, double f_lo, double f_hi)
      : Error(what + " [b in (" + detail::short_number(lo) + ", " + detail::short_number(hi) +
              "), f = (" + detail::short_number(f_lo) + ", " + detail::short_number(f_hi) + ")]") {}
};

}  // namespace levytrim
