#pragma once

// Modified Bessel function of the second kind with purely imaginary order,
//   K_{i nu}(x) = integral_0^inf e^{-x cosh t} cos(nu t) dt,   x > 0,
// evaluated by adaptive quadrature of the integral representation. The value
// is real for real nu.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "warpft/error.hpp"
#include "warpft/quadrature.hpp"

namespace warpft::bessel {

inline constexpr double kMinArgument = 1e-6;
inline constexpr double kMinRelTol = 1e-13;

struct BesselRequest {
  double nu = 0.0;
  double x = 1.0;
  double rel_tol = 1e-12;
};

struct BesselResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

inline void check_request(double x, double rel_tol) {
  if (!(x >= kMinArgument)) {
    throw DomainError(
        "argument below supported range (logarithmic divergence region)");
  }
  if (!(rel_tol >= kMinRelTol)) {
    throw DomainError("rel_tol below 1e-13 is not supported");
  }
}

/// e^{x} K_{i nu}(x) with its absolute error estimate.
inline auto scaled_integral(double nu, double x, double rel_tol)
    -> BesselResult {
  check_request(x, rel_tol);
  nu = std::abs(nu);
  // cosh t - 1 = 2 sinh^2(t/2) keeps the exponent accurate near t = 0.
  auto envelope = [x](double t) {
    const double s = std::sinh(0.5 * t);
    return std::exp(-2.0 * x * s * s);
  };
  auto integrand = [&](double t) { return envelope(t) * std::cos(nu * t); };

  // Truncate where the envelope has fallen below rel_tol * e^{-20}.
  const double decay = std::log(1.0 / rel_tol) + 20.0;
  const double t_max = 2.0 * std::asinh(std::sqrt(decay / (2.0 * x)));

  // Seed panels so cos(nu t) turns by at most 8 rad per panel.
  const double width = std::min(0.25, 8.0 / std::max(nu, 1e-300));
  std::vector<double> cuts;
  for (double c = width; c < t_max; c += width) {
    cuts.push_back(c);
  }

  quad::AdaptiveOptions env_opt{.abs_tol = 0.0, .rel_tol = 1e-14};
  const auto scale =
      quad::integrate_adaptive<double>(envelope, 0.0, t_max, env_opt).value;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  // Below |K| ~ rel_tol * scale the cosine integral is pure cancellation and
  // only this absolute accuracy is attainable.
  const double abs_floor = std::max(0.1 * rel_tol * scale, floor);
  quad::AdaptiveOptions opt{.abs_tol = abs_floor,
                            .rel_tol = 0.0,
                            .max_intervals = 200000};
  auto res = quad::integrate_adaptive<double>(integrand, 0.0, t_max, opt, cuts);
  const double wanted = 0.5 * rel_tol * std::abs(res.value);
  if (res.error > wanted && wanted > floor) {
    opt.abs_tol = wanted;
    res = quad::integrate_adaptive<double>(integrand, 0.0, t_max, opt, cuts);
  }
  const double achieved = res.error;
  if (achieved > std::max(rel_tol * std::abs(res.value), abs_floor)) {
    throw BudgetExhausted("imaginary-order Bessel quadrature did not converge",
                          res.value, achieved);
  }
  return {res.value, achieved};
}

}  // namespace detail

/// e^{x} K_{i nu}(x); avoids underflow for large x.
inline auto besselK_imag_scaled(double nu, double x, double rel_tol = 1e-12)
    -> double {
  return detail::scaled_integral(nu, x, rel_tol).value;
}

/// K_{i nu}(x) for real nu and x >= 1e-6.
inline auto besselK_imag(double nu, double x, double rel_tol = 1e-12)
    -> double {
  return std::exp(-x) * detail::scaled_integral(nu, x, rel_tol).value;
}

inline auto besselK_imag(const BesselRequest& req) -> BesselResult {
  const auto r = detail::scaled_integral(req.nu, req.x, req.rel_tol);
  const double w = std::exp(-req.x);
  return {w * r.value, w * r.error};
}

}  // namespace warpft::bessel
