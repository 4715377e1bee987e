#pragma once

// Fixed-node rules and a small adaptive Gauss-Kronrod driver shared by the
// oscillatory, bessel and transfer modules. The oracle module deliberately
// does not include this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <vector>

namespace warpft::quad {

/// Neumaier-compensated accumulator for real or complex sums.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) noexcept {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      re_.add(x.real());
      im_.add(x.imag());
    } else {
      const T t = sum_ + x;
      if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
      } else {
        comp_ += (x - t) + sum_;
      }
      sum_ = t;
    }
  }

  [[nodiscard]] auto value() const noexcept -> T {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      return {re_.value(), im_.value()};
    } else {
      return sum_ + comp_;
    }
  }

 private:
  struct Empty {};
  using Part = std::conditional_t<std::is_same_v<T, std::complex<double>>,
                                  CompensatedSum<double>, Empty>;
  T sum_{};
  T comp_{};
  [[no_unique_address]] Part re_{};
  [[no_unique_address]] Part im_{};
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] auto size() const noexcept -> std::size_t {
    return nodes.size();
  }
};

/// Builds the n-point Gauss-Legendre rule by Newton iteration on P_n.
inline auto make_gauss_legendre(std::size_t n) -> GaussLegendreRule {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const auto kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const auto kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = nd * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Orders for which cached Gauss-Legendre rules exist.
inline constexpr std::array<std::size_t, 9> kCachedOrders{8,  12, 16, 20, 24,
                                                          32, 40, 48, 64};

inline auto cached_gauss_legendre(std::size_t n) -> const GaussLegendreRule& {
  static const auto rules = [] {
    std::array<GaussLegendreRule, kCachedOrders.size()> r;
    for (std::size_t i = 0; i < kCachedOrders.size(); ++i) {
      r[i] = make_gauss_legendre(kCachedOrders[i]);
    }
    return r;
  }();
  for (std::size_t i = 0; i < kCachedOrders.size(); ++i) {
    if (kCachedOrders[i] >= n) {
      return rules[i];
    }
  }
  return rules.back();
}

/// log10 of the Gauss-Legendre remainder constant
/// (n!)^4 / ((2n+1) ((2n)!)^3), so that the n-point error on an interval of
/// length h is h^{2n+1} * 10^c * max|f^{(2n)}|.
inline auto gauss_legendre_error_log10(std::size_t n) -> double {
  const auto nd = static_cast<double>(n);
  const double ln = 4.0 * std::lgamma(nd + 1.0) - std::log(2.0 * nd + 1.0) -
                    3.0 * std::lgamma(2.0 * nd + 1.0);
  return ln / std::numbers::ln10;
}

/// Smallest cached order whose remainder bound for e^{i phi} with a phase
/// change of `phase_span` over one panel falls below 10^{log10_target}.
inline auto order_for_phase_span(double phase_span, double log10_target = -17.0)
    -> std::size_t {
  const double span = std::max(phase_span, 1e-3);
  for (const auto n : kCachedOrders) {
    const double bound = gauss_legendre_error_log10(n) +
                         2.0 * static_cast<double>(n) * std::log10(span);
    if (bound <= log10_target) {
      return n;
    }
  }
  return kCachedOrders.back();
}

namespace detail {

// QUADPACK 21-point Kronrod extension of the 10-point Gauss rule.
inline constexpr std::array<double, 11> kXgk21{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk21{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980178995, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg10{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// QUADPACK 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk15{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk15{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg7{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// Result of integrating over one interval with an embedded error estimate.
template <typename T>
struct Estimate {
  T value{};
  double error = 0.0;
};

/// Gauss-Kronrod 10/21 on [a, b]. The error is |K21 - G10|.
template <typename T, typename F>
auto gauss_kronrod21(F&& f, double a, double b) -> Estimate<T> {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * detail::kWgk21[10];
  T gauss{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = h * detail::kXgk21[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * detail::kWgk21[j];
    if (j % 2 == 1) {
      gauss += (f1 + f2) * detail::kWg10[j / 2];
    }
  }
  return {kron * h, std::abs(kron - gauss) * h};
}

/// Gauss-Kronrod 7/15 on [a, b]. The error is |K15 - G7|.
template <typename T, typename F>
auto gauss_kronrod15(F&& f, double a, double b) -> Estimate<T> {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * detail::kWgk15[7];
  T gauss = fc * detail::kWg7[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * detail::kXgk15[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += (f1 + f2) * detail::kWgk15[j];
    if (j % 2 == 1) {
      gauss += (f1 + f2) * detail::kWg7[j / 2];
    }
  }
  return {kron * h, std::abs(kron - gauss) * h};
}

/// Options for the globally adaptive Gauss-Kronrod driver.
struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  std::size_t max_intervals = 20000;
};

template <typename T>
struct AdaptiveResult {
  T value{};
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

/// Globally adaptive GK21: repeatedly bisects the interval with the largest
/// error estimate until the summed error meets max(abs_tol, rel_tol*|I|).
/// `breakpoints` (sorted, inside (a, b)) seed the initial partition.
template <typename T, typename F>
auto integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt,
                        std::span<const double> breakpoints = {})
    -> AdaptiveResult<T> {
  struct Piece {
    double lo;
    double hi;
    Estimate<T> est;
    auto operator<(const Piece& other) const noexcept -> bool {
      return est.error < other.est.error;
    }
  };
  std::priority_queue<Piece> heap;
  std::vector<double> cuts{a};
  for (const double p : breakpoints) {
    if (p > a && p < b) {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto est = gauss_kronrod21<T>(f, cuts[i], cuts[i + 1]);
    total += est.value;
    err += est.error;
    heap.push({cuts[i], cuts[i + 1], est});
  }
  AdaptiveResult<T> out;
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (err > target() && heap.size() < opt.max_intervals) {
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      break;
    }
    heap.pop();
    auto left = gauss_kronrod21<T>(f, worst.lo, mid);
    auto right = gauss_kronrod21<T>(f, mid, worst.hi);
    total += left.value + right.value - worst.est.value;
    err += left.error + right.error - worst.est.error;
    heap.push({worst.lo, mid, left});
    heap.push({mid, worst.hi, right});
  }
  // Re-sum from the pieces to shed drift from the incremental updates.
  CompensatedSum<T> sum;
  double esum = 0.0;
  out.intervals = heap.size();
  while (!heap.empty()) {
    sum.add(heap.top().est.value);
    esum += heap.top().est.error;
    heap.pop();
  }
  out.value = sum.value();
  out.error = esum;
  out.converged = esum <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
  return out;
}

}  // namespace warpft::quad
