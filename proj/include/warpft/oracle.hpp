#pragma once

// Brute-force reference transforms. Everything here uses its own composite
// Romberg rule on uniform panels and must stay independent of quadrature.hpp
// and oscillatory.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "warpft/error.hpp"
#include "warpft/funcspace.hpp"

namespace warpft::oracle {

struct OracleResult {
  complex value;
  /// Romberg error estimate plus the tail estimate (including the safety
  /// factor on truncation).
  double error = 0.0;
  double t_left = 0.0;
  double t_right = 0.0;
};

struct SpectrumDiff {
  double max_abs = 0.0;
  double max_rel = 0.0;
  /// k where the absolute difference is largest.
  double worst_k = 0.0;
};

namespace detail {

inline constexpr int kMaxLevels = 18;
inline constexpr double kSafety = 10.0;

struct Romberg {
  complex value;
  double error = 0.0;
};

/// Trapezoid sums on [a, b] with halving steps and Richardson extrapolation.
template <typename F>
auto romberg(F&& f, double a, double b, double tol) -> Romberg {
  std::array<complex, kMaxLevels> prev{};
  std::array<complex, kMaxLevels> cur{};
  double h = b - a;
  complex trap = 0.5 * h * (f(a) + f(b));
  prev[0] = trap;
  double scale = std::abs(trap);
  std::size_t points = 1;
  for (int n = 1; n < kMaxLevels; ++n) {
    complex mid{};
    for (std::size_t j = 0; j < points; ++j) {
      const complex v = f(a + (static_cast<double>(j) + 0.5) * h);
      mid += v;
      scale = std::max(scale, std::abs(v) * std::abs(b - a));
    }
    trap = 0.5 * (trap + h * mid);
    h *= 0.5;
    points *= 2;
    cur[0] = trap;
    double factor = 4.0;
    for (int m = 1; m <= n; ++m) {
      cur[m] = cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    const double diff = std::abs(cur[n] - prev[n - 1]);
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale;
    if (n >= 4 && diff <= std::max(tol, floor)) {
      return {cur[n], diff};
    }
    std::swap(prev, cur);
  }
  return {prev[kMaxLevels - 1],
          std::abs(prev[kMaxLevels - 1] - prev[kMaxLevels - 2])};
}

/// Uniform panels of width <= width over [a, b], Romberg on each.
template <typename F>
auto panels(F&& f, double a, double b, double width, double tol) -> Romberg {
  if (!(b > a)) {
    return {};
  }
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / width));
  const double h = (b - a) / static_cast<double>(n);
  Romberg total;
  // Kahan summation keeps the many small panel values from drifting.
  complex comp{};
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i + 1 == n) ? b : lo + h;
    const auto r = romberg(f, lo, hi, tol / static_cast<double>(n));
    const complex y = r.value - comp;
    const complex t = total.value + y;
    comp = (t - total.value) - y;
    total.value = t;
    total.error += r.error;
  }
  return total;
}

/// Integral over [0, inf) of |g| beyond x where |g(x)| = m, from a hint.
inline auto hint_tail(const DecayHint& hint, double m, double x) -> double {
  return hint.tail_mass(m, x);
}

/// Integral over |t| > T of |f(u(t))| on one side, given f's decay hint in
/// its own variable x = u(t): change variables and use |u'| >= |u'(T)|.
inline auto warped_tail(const DecayHint& hint, double m, double x, double du)
    -> double {
  if (!(du > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return hint.tail_mass(m, std::abs(x)) / du;
}

/// Squared-magnitude decay hint.
inline auto squared(const DecayHint& hint) -> DecayHint {
  switch (hint.kind) {
    case DecayHint::Kind::exponential:
      return DecayHint::exponential(2.0 * hint.parameter);
    case DecayHint::Kind::polynomial:
      return DecayHint::polynomial(2.0 * hint.parameter);
    default:
      return hint;
  }
}

/// Smallest doubling T >= 1 with tail(T) <= target.
template <typename Tail>
auto grow(Tail&& tail, double target, double start = 1.0) -> double {
  double T = start;
  while (!(tail(T) <= target)) {
    T *= 2.0;
    if (T > 1e12) {
      throw DomainError("oracle tail does not decay");
    }
  }
  return T;
}

/// integral_0^T h(sign t) dt on uniform panels, optionally through t = sinh(s)
/// which turns algebraic decay into exponential decay.
template <typename H>
auto half_line(H&& h, double sign, double T, double width, bool substitute,
               double tol) -> Romberg {
  if (substitute) {
    auto g = [&](double s) { return h(sign * std::sinh(s)) * std::cosh(s); };
    return panels(g, 0.0, std::asinh(T), std::min(width, 0.25), tol);
  }
  auto g = [&](double t) { return h(sign * t); };
  return panels(g, 0.0, T, width, tol);
}

}  // namespace detail

/// integral e^{ikt} f(u(t)) dt (or f(t) without a warp) over [-T_L, T_R],
/// each T grown until ten times the hinted tail is below abs_tol/4.
inline auto direct_ft_detailed(const Profile& profile,
                               const std::optional<Warp>& warp, double k,
                               double abs_tol) -> OracleResult {
  if (!profile.time_eval) {
    throw DomainError("profile has no time-domain evaluator");
  }
  if (!profile.time_decay.decays()) {
    throw DomainError("oracle requires decaying integrand");
  }
  if (!(abs_tol > 0.0)) {
    throw DomainError("oracle tolerance must be positive");
  }
  const RealFn& f = *profile.time_eval;
  const DecayHint& hint = profile.time_decay;
  auto g = [&](double t) { return warp ? f(warp->eval(t)) : f(t); };
  auto h = [&](double t) {
    return g(t) * complex{std::cos(k * t), std::sin(k * t)};
  };
  auto tail = [&](double sign) {
    return [&, sign](double T) {
      const double t = sign * T;
      const double m = std::abs(g(t));
      double bound = warp ? detail::warped_tail(hint, m, warp->eval(t),
                                                std::abs(warp->deriv(t)))
                          : detail::hint_tail(hint, m, T);
      if (k != 0.0 && !warp) {
        // Integration by parts for a monotone tail.
        bound = std::min(bound, 2.0 * m / std::abs(k));
      }
      return detail::kSafety * bound;
    };
  };
  const double side_tol = 0.25 * abs_tol;
  double T_start = 1.0;
  if (hint.kind == DecayHint::Kind::compact && !warp) {
    T_start = std::max(1.0, hint.parameter);
  }
  const double t_right = detail::grow(tail(1.0), side_tol, T_start);
  const double t_left = detail::grow(tail(-1.0), side_tol, T_start);
  const bool substitute = k == 0.0 && !warp &&
                          hint.kind == DecayHint::Kind::polynomial;
  const double width = k == 0.0 ? 0.5 : std::min(0.5, 2.0 / std::abs(k));
  const auto right = detail::half_line(h, 1.0, t_right, width, substitute, side_tol);
  const auto left = detail::half_line(h, -1.0, t_left, width, substitute, side_tol);
  OracleResult out;
  out.value = right.value + left.value;
  out.error = right.error + left.error + tail(1.0)(t_right) + tail(-1.0)(t_left);
  out.t_left = t_left;
  out.t_right = t_right;
  return out;
}

inline auto direct_ft(const Profile& profile, const std::optional<Warp>& warp,
                      double k, double abs_tol) -> complex {
  return direct_ft_detailed(profile, warp, k, abs_tol).value;
}

/// |integral |f|^2 dt - (1/2pi) integral |f^|^2 dk| / integral |f|^2 dt.
inline auto plancherel_residual(const Profile& profile, double quad_tol = 1e-10)
    -> double {
  if (!profile.time_eval || !profile.freq_eval) {
    throw DomainError("plancherel residual needs both evaluators");
  }
  if (!profile.time_decay.decays() || !profile.freq_decay.decays()) {
    throw DomainError("oracle requires decaying integrand");
  }
  auto energy = [quad_tol](auto&& sq, const DecayHint& hint,
                           const std::vector<double>& kinks) {
    const DecayHint hint2 = detail::squared(hint);
    // Rough scale from [-1, 1] so the tolerance can be relative.
    const double scale =
        std::abs(detail::panels(sq, -1.0, 1.0, 0.25, 1e-6).value) + 1e-300;
    const double tol = quad_tol * scale;
    double total = 0.0;
    for (const double sign : {1.0, -1.0}) {
      auto tail = [&](double T) {
        return detail::kSafety * hint2.tail_mass(std::abs(sq(sign * T)), T);
      };
      double start = 1.0;
      if (hint.kind == DecayHint::Kind::compact) {
        start = std::max(1.0, hint.parameter);
      }
      const double T = detail::grow(tail, 0.25 * tol, start);
      const bool sub = hint.kind == DecayHint::Kind::polynomial;
      // Split at kinks on this half-line.
      std::vector<double> cuts{0.0};
      for (const double p : kinks) {
        if (sign * p > 0.0 && sign * p < T) {
          cuts.push_back(sign * p);
        }
      }
      cuts.push_back(T);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto shifted = [&, lo = cuts[i]](double t) { return sq(sign * (lo + t)); };
        const double len = cuts[i + 1] - cuts[i];
        total += detail::half_line(shifted, 1.0, len, 0.5, sub && i + 2 == cuts.size(),
                                   0.25 * tol)
                     .value.real();
      }
    }
    return total;
  };
  auto time_sq = [&](double t) { return complex{std::norm(profile.f(t)), 0.0}; };
  auto freq_sq = [&](double k) { return complex{std::norm(profile.fhat(k)), 0.0}; };
  const double et = energy(time_sq, profile.time_decay, {});
  const double ef =
      energy(freq_sq, profile.freq_decay, profile.freq_breakpoints) /
      (2.0 * std::numbers::pi);
  if (et == 0.0) {
    return ef == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(et - ef) / et;
}

/// Pointwise comparison of two spectra on the same grid. max_rel uses
/// max(|s2|, 1e-300) as denominator.
inline auto spectrum_compare(const Spectrum& s1, const Spectrum& s2)
    -> SpectrumDiff {
  if (s1.kgrid() != s2.kgrid()) {
    throw DomainError("spectrum grids differ");
  }
  SpectrumDiff out;
  if (s1.size() == 0) {
    return out;
  }
  out.worst_k = s1.kgrid().front();
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double d = std::abs(s1.values()[i] - s2.values()[i]);
    const double rel = d / std::max(std::abs(s2.values()[i]), 1e-300);
    if (d > out.max_abs) {
      out.max_abs = d;
      out.worst_k = s1.kgrid()[i];
    }
    out.max_rel = std::max(out.max_rel, rel);
  }
  return out;
}

}  // namespace warpft::oracle
