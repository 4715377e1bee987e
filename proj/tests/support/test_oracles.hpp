#pragma once

// Reference computations used only by the tests. They deliberately share no
// code with the library: plain long-double trapezoid/Simpson/midpoint sums.

#include <cmath>
#include <complex>
#include <cstddef>

namespace testing_oracles {

/// e^{x} K_{i nu}(x) by the trapezoid rule on the even integrand
/// e^{-x (cosh t - 1)} cos(nu t), which converges geometrically for this
/// entire, rapidly decaying function.
inline auto bessel_k_scaled_trapezoid(double nu, double x) -> double {
  const long double h = 1.0L / 256.0L;
  const long double xl = x;
  long double sum = 0.5L;
  for (std::size_t j = 1;; ++j) {
    const long double t = h * static_cast<long double>(j);
    const long double env = std::exp(-xl * (std::cosh(t) - 1.0L));
    sum += env * std::cos(static_cast<long double>(nu) * t);
    if (env < 1e-40L) {
      break;
    }
  }
  return static_cast<double>(h * sum);
}

/// K_{i nu}(x) from the scaled trapezoid sum.
inline auto bessel_k_trapezoid(double nu, double x) -> double {
  return std::exp(-x) * bessel_k_scaled_trapezoid(nu, x);
}

/// Composite Simpson on [a, b] with n (even) intervals, long double.
template <typename F>
auto simpson(F&& f, long double a, long double b, std::size_t n) -> long double {
  if (n % 2 == 1) {
    ++n;
  }
  const long double h = (b - a) / static_cast<long double>(n);
  long double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) {
    const long double x = a + h * static_cast<long double>(i);
    s += (i % 2 == 1 ? 4.0L : 2.0L) * f(x);
  }
  return s * h / 3.0L;
}

/// integral_a^b e^{i phi(t)} dt by the midpoint rule with n panels.
template <typename Phi>
auto midpoint_exp(Phi&& phi, double a, double b, std::size_t n)
    -> std::complex<double> {
  const long double h = (static_cast<long double>(b) - a) / n;
  long double re = 0.0L;
  long double im = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double t = a + h * (static_cast<long double>(i) + 0.5L);
    const long double p = phi(t);
    re += std::cos(p);
    im += std::sin(p);
  }
  return {static_cast<double>(re * h), static_cast<double>(im * h)};
}

/// Cosine transform 2 integral_0^T g(t) cos(k t) dt of an even function by
/// composite Simpson, n intervals.
template <typename G>
auto even_cosine_transform(G&& g, double k, double T, std::size_t n) -> double {
  auto f = [&](long double t) {
    return g(t) * std::cos(static_cast<long double>(k) * t);
  };
  return static_cast<double>(2.0L * simpson(f, 0.0L, T, n));
}

}  // namespace testing_oracles
