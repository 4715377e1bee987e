#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace warpft {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or a violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Analytic hypotheses on a warp or profile could not be certified.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A numerical budget ran out before the requested tolerance was met.
///
/// Carries the best estimate obtained so far together with the error bound
/// actually achieved, so callers can still report partial results.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, std::complex<double> best_estimate,
                  double achieved_error)
      : Error(what),
        best_estimate_{best_estimate},
        achieved_error_{achieved_error} {}

  [[nodiscard]] auto best_estimate() const noexcept -> std::complex<double> {
    return best_estimate_;
  }
  [[nodiscard]] auto achieved_error() const noexcept -> double {
    return achieved_error_;
  }

 private:
  std::complex<double> best_estimate_;
  double achieved_error_;
};

}  // namespace warpft
