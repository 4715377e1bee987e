#pragma once

// Phase-aware quadrature for integrals of the form  integral A(t) e^{i phi(t)} dt
// and the transfer kernel H_u(k, l) = integral e^{i(kt - l u(t))} dt.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>

#include "warpft/error.hpp"
#include "warpft/funcspace.hpp"
#include "warpft/quadrature.hpp"

namespace warpft {

/// Accuracy and work limits for oscillatory quadrature.
struct QuadratureBudget {
  double abs_tol = 1e-8;
  std::size_t max_panels = 50'000'000;
  /// Target phase change per panel, in radians, where the phase moves fast.
  double max_panel_phase = 100.0;
  /// Panels never exceed this width; such panels are refined adaptively.
  double max_panel_width = 0.25;
  /// Width used where the phase is numerically stationary.
  double stationary_width = 0.02;
};

struct OscillatoryResult {
  complex value;
  double error = 0.0;
  std::size_t panels = 0;
};

namespace detail {

/// Adaptive bisection with GK21 on one panel until the local tolerance holds.
template <typename F>
auto refine_panel(F& f, double a, double b, double tol, int depth,
                  std::size_t& work) -> quad::Estimate<complex> {
  auto est = quad::gauss_kronrod21<complex>(f, a, b);
  ++work;
  if (est.error <= tol || depth >= 30) {
    return est;
  }
  const double mid = 0.5 * (a + b);
  auto left = refine_panel(f, a, mid, 0.5 * tol, depth + 1, work);
  auto right = refine_panel(f, mid, b, 0.5 * tol, depth + 1, work);
  return {left.value + right.value, left.error + right.error};
}

/// Integrates f over [a, b] with panels sized from `rate`, the local phase
/// speed |phi'(t)|. Fast-phase panels get a fixed Gauss-Legendre rule whose
/// order makes the a-priori remainder negligible; slow-phase panels are
/// refined with Gauss-Kronrod. Panels where rate < stationary_rate are capped
/// at budget.stationary_width.
template <typename F, typename Rate>
auto integrate_panels(F&& f, Rate&& rate, double a, double b,
                      const QuadratureBudget& budget, double tol,
                      double stationary_rate) -> OscillatoryResult {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("oscillatory integral needs a finite interval");
  }
  if (!(tol > 0.0)) {
    throw DomainError("oscillatory tolerance must be positive");
  }
  const double phase_cap = budget.max_panel_phase;
  const std::size_t order = quad::order_for_phase_span(1.25 * phase_cap);
  const auto& rule = quad::cached_gauss_legendre(order);
  const double rule_log10 =
      quad::gauss_legendre_error_log10(rule.size());
  const double length = b - a;

  quad::CompensatedSum<complex> sum;
  double err = 0.0;
  double magnitude = 0.0;
  std::size_t panels = 0;
  std::size_t work = 0;

  double t = a;
  double r0 = std::abs(rate(t));
  while (t < b) {
    if (panels >= budget.max_panels) {
      throw BudgetExhausted("oscillatory panel budget exhausted", sum.value(),
                            std::numeric_limits<double>::infinity());
    }
    const bool stationary = r0 < stationary_rate;
    double h = stationary ? budget.stationary_width
                          : std::min(budget.max_panel_width, phase_cap / r0);
    h = std::min(h, b - t);
    double r1 = std::abs(rate(t + h));
    for (int i = 0; i < 4 && !stationary && h * r1 > 1.25 * phase_cap; ++i) {
      h = phase_cap / std::max(r0, r1);
      r1 = std::abs(rate(t + h));
    }
    const double t1 = (b - t - h <= 1e-14 * std::max(1.0, std::abs(b))) ? b : t + h;
    h = t1 - t;
    if (h <= 0.0) {
      break;
    }
    const double span = h * std::max(r0, r1) + h * std::abs(r1 - r0);
    const bool fast = !stationary && h < budget.max_panel_width &&
                      span <= 1.25 * phase_cap + 1e-12;
    if (fast) {
      const double c = 0.5 * (t + t1);
      const double hh = 0.5 * h;
      complex acc{};
      double peak2 = 0.0;
      for (std::size_t j = 0; j < rule.size(); ++j) {
        const complex v = f(c + hh * rule.nodes[j]);
        acc += rule.weights[j] * v;
        peak2 = std::max(peak2, std::norm(v));
      }
      sum.add(acc * hh);
      const double peak = std::sqrt(peak2);
      const double log_bound = rule_log10 + 2.0 * static_cast<double>(rule.size()) *
                                                std::log10(std::max(span, 1e-300));
      err += 10.0 * h * peak * std::pow(10.0, std::max(log_bound, -300.0));
      magnitude += h * peak;
    } else {
      const double local = 0.5 * tol * h / std::max(length, 1e-300);
      auto est = refine_panel(f, t, t1, local, 0, work);
      sum.add(est.value);
      err += est.error;
      magnitude += std::abs(est.value) + est.error;
    }
    ++panels;
    t = t1;
    r0 = r1;
  }
  // Rounding in the per-panel sums.
  err += 8.0 * std::numeric_limits<double>::epsilon() * magnitude;
  return {sum.value(), err, panels};
}

}  // namespace detail

/// integral_a^b e^{i phase(t)} dt with estimated absolute error <=
/// budget.abs_tol. Throws BudgetExhausted (with the best estimate) otherwise.
template <typename Phase, typename PhaseDeriv>
auto phase_aware_integral(Phase&& phase, PhaseDeriv&& phase_deriv, double a,
                          double b, const QuadratureBudget& budget,
                          double stationary_scale = 0.0) -> OscillatoryResult {
  if (!(budget.abs_tol > 0.0) || budget.max_panels < 1) {
    throw DomainError("invalid quadrature budget");
  }
  if (stationary_scale <= 0.0) {
    stationary_scale = std::max({1.0, std::abs(phase_deriv(a)),
                                 std::abs(phase_deriv(b))});
  }
  auto integrand = [&](double t) {
    const double p = phase(t);
    return complex{std::cos(p), std::sin(p)};
  };
  auto result = detail::integrate_panels(integrand, phase_deriv, a, b, budget,
                                         budget.abs_tol,
                                         1e-8 * stationary_scale);
  if (result.error > budget.abs_tol) {
    throw BudgetExhausted("oscillatory tolerance not met", result.value,
                          result.error);
  }
  return result;
}

enum class TailSide { left, right };

/// Upper bound on |integral_M^inf e^{i(kt - l u(t))} dt| (right side) or the
/// mirrored left tail beyond -M, valid once |u'| is monotone past M:
/// 4 pi / (|l u'(+-M)| - |k|).
inline auto lemma1_tail_bound(const Warp& warp, double k, double l, double M,
                              TailSide side = TailSide::right) -> double {
  const double slope =
      std::abs(l * warp.deriv(side == TailSide::right ? M : -M));
  const double gap = slope - std::abs(k);
  if (!(gap > 0.0)) {
    throw DomainError("truncation point too small for tail bound");
  }
  return 4.0 * std::numbers::pi / gap;
}

/// Value of H_u(k, l) with its truncation and quadrature error bounds.
struct KernelSample {
  double k = 0.0;
  double l = 0.0;
  complex value;
  double tail_bound = 0.0;
  double quad_error = 0.0;
  std::size_t panels_used = 0;
  double m_left = 0.0;
  double m_right = 0.0;

  [[nodiscard]] auto total_error() const noexcept -> double {
    return tail_bound + quad_error;
  }
};

/// Truncation and exclusion settings for transfer_kernel.
struct KernelOptions {
  /// Kernels are only evaluated for |l| >= l_min.
  double l_min = 1e-3;
  double m_initial = 1.0;
  double m_max = 500.0;
};

/// integral_{-m_left}^{m_right} e^{i(kt - l u(t))} dt.
inline auto truncated_kernel(const Warp& warp, double k, double l,
                             double m_left, double m_right,
                             const QuadratureBudget& budget)
    -> OscillatoryResult {
  auto phase = [&](double t) { return k * t - l * warp.eval(t); };
  auto rate = [&](double t) { return k - l * warp.deriv(t); };
  return phase_aware_integral(phase, rate, -m_left, m_right, budget,
                              std::abs(k) + std::abs(l));
}

namespace detail {

/// Smallest M (to ~1e-3 relative) with tail bound <= target on one side.
inline auto choose_truncation(const Warp& warp, double k, double l,
                              double target, TailSide side,
                              const KernelOptions& opt) -> std::pair<double, double> {
  auto bound = [&](double M) {
    const double gap =
        std::abs(l * warp.deriv(side == TailSide::right ? M : -M)) - std::abs(k);
    return gap > 0.0 ? 4.0 * std::numbers::pi / gap
                     : std::numeric_limits<double>::infinity();
  };
  const double floor = std::max(warp.tail_onset, 0.0);
  double hi = std::max(opt.m_initial, floor);
  while (bound(hi) > target) {
    hi *= 2.0;
    if (hi > opt.m_max) {
      throw BudgetExhausted("kernel tail does not decay within budget",
                            complex{std::nan(""), std::nan("")},
                            std::numeric_limits<double>::infinity());
    }
  }
  double lo = std::max(floor, 0.5 * hi);
  if (lo < hi && bound(lo) > target) {
    for (int i = 0; i < 60 && hi - lo > 1e-3 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (bound(mid) > target ? lo : hi) = mid;
    }
  }
  return {hi, bound(hi)};
}

}  // namespace detail

/// H_u(k, l) = integral e^{i(kt - l u(t))} dt with independent left and right
/// truncations chosen from the tail bound, so that tail_bound <= abs_tol/2 and
/// the quadrature over [-M_left, M_right] meets abs_tol/2.
inline auto transfer_kernel(const Warp& warp, double k, double l,
                            const QuadratureBudget& budget,
                            const KernelOptions& opt = {}) -> KernelSample {
  if (!(std::abs(l) >= opt.l_min)) {
    throw DomainError("l inside exclusion radius");
  }
  const double side_target = 0.25 * budget.abs_tol;
  const auto [m_right, tail_right] =
      detail::choose_truncation(warp, k, l, side_target, TailSide::right, opt);
  const auto [m_left, tail_left] =
      detail::choose_truncation(warp, k, l, side_target, TailSide::left, opt);

  QuadratureBudget inner = budget;
  inner.abs_tol = 0.5 * budget.abs_tol;
  const auto res = truncated_kernel(warp, k, l, m_left, m_right, inner);

  KernelSample out;
  out.k = k;
  out.l = l;
  out.value = res.value;
  out.tail_bound = tail_left + tail_right;
  out.quad_error = res.error;
  out.panels_used = res.panels;
  out.m_left = m_left;
  out.m_right = m_right;
  return out;
}

}  // namespace warpft
