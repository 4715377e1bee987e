#pragma once

// Core domain types shared by every module.
//
// Fourier convention used throughout the library:
//   forward   f^(k) = integral e^{+ikt} f(t) dt
//   inverse   f(t)  = (1/2pi) integral e^{-ilt} f^(l) dl
// Improper integrals over the real line are limits with independent left and
// right endpoints.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warpft/error.hpp"

namespace warpft {

using complex = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<complex(double)>;

/// Transfer kernel H_u(k, l) as a function of (k, l).
using KernelFn = std::function<complex(double, double)>;
/// Upper bound on |H_u(k, l)| valid for 0 < |l| <= some small radius.
using KernelEnvelopeFn = std::function<double(double, double)>;

/// The inner function u of a composition f(u(t)).
struct Warp {
  RealFn eval;
  RealFn deriv;
  std::string label;
  /// |u'| is monotone for |t| beyond this point.
  double tail_onset = 0.0;
  /// Optional closed-form transfer kernel (catalog warps only).
  KernelFn closed_kernel;
  /// Optional bound on the kernel magnitude near l = 0 (catalog warps only).
  KernelEnvelopeFn kernel_envelope;

  [[nodiscard]] auto has_closed_kernel() const noexcept -> bool {
    return static_cast<bool>(closed_kernel);
  }
};

/// Sampled evidence that a warp meets the composition hypotheses.
/// Always heuristic: probing is not proof.
struct WarpCertificate {
  bool valid = false;
  std::string reason;
  double min_abs_deriv = 0.0;
  bool deriv_sign_constant = false;
  bool deriv_consistent = false;
  /// min(|u'(lo)|, |u'(hi)|) at the probe endpoints.
  double properness_witness = 0.0;
  std::pair<double, double> probe_interval{0.0, 0.0};
  std::size_t probe_count = 0;
  static constexpr const char* kind = "heuristic";
};

/// Asymptotic envelope of a function, used to choose truncation points.
struct DecayHint {
  enum class Kind { none, exponential, polynomial, compact };

  Kind kind = Kind::none;
  /// Exponential rate, polynomial order, or support radius.
  double parameter = 0.0;

  static auto none() -> DecayHint { return {}; }
  static auto exponential(double rate) -> DecayHint {
    return {Kind::exponential, rate};
  }
  static auto polynomial(double order) -> DecayHint {
    return {Kind::polynomial, order};
  }
  static auto compact(double radius) -> DecayHint {
    return {Kind::compact, radius};
  }

  [[nodiscard]] auto decays() const noexcept -> bool {
    return kind != Kind::none;
  }

  /// Estimate of integral_x^inf |g| given |g(x)| = magnitude and x > 0.
  [[nodiscard]] auto tail_mass(double magnitude, double x) const -> double {
    switch (kind) {
      case Kind::exponential:
        return magnitude / parameter;
      case Kind::polynomial:
        return parameter > 1.0 ? magnitude * x / (parameter - 1.0)
                               : std::numeric_limits<double>::infinity();
      case Kind::compact:
        return x >= parameter ? 0.0 : std::numeric_limits<double>::infinity();
      case Kind::none:
        break;
    }
    return std::numeric_limits<double>::infinity();
  }
};

/// The outer function f, given in the time domain, the frequency domain, or
/// both.
struct Profile {
  std::optional<RealFn> time_eval;
  std::optional<ComplexFn> freq_eval;
  DecayHint time_decay;
  DecayHint freq_decay;
  /// Frequencies where f^ may fail to be smooth (kinks, jumps).
  std::vector<double> freq_breakpoints;
  std::string label;

  [[nodiscard]] auto f(double t) const -> double {
    if (!time_eval) {
      throw DomainError("profile has no time-domain evaluator");
    }
    return (*time_eval)(t);
  }

  [[nodiscard]] auto fhat(double k) const -> complex {
    if (!freq_eval) {
      throw DomainError("profile has no frequency-domain evaluator");
    }
    return (*freq_eval)(k);
  }
};

/// Builds a Profile and checks that at least one evaluator is present.
inline auto make_profile(std::optional<RealFn> time_eval,
                         std::optional<ComplexFn> freq_eval,
                         DecayHint time_decay, DecayHint freq_decay,
                         std::string label,
                         std::vector<double> freq_breakpoints = {}) -> Profile {
  if (!time_eval && !freq_eval) {
    throw DomainError("profile needs a time or frequency evaluator");
  }
  return Profile{std::move(time_eval), std::move(freq_eval), time_decay,
                 freq_decay, std::move(freq_breakpoints), std::move(label)};
}

/// alpha*p + beta*q. Evaluators are kept only where both inputs have them.
inline auto combine_profiles(const Profile& p, double alpha, const Profile& q,
                             double beta) -> Profile {
  Profile out;
  if (p.time_eval && q.time_eval) {
    out.time_eval = [f = *p.time_eval, g = *q.time_eval, alpha, beta](double t) {
      return alpha * f(t) + beta * g(t);
    };
  }
  if (p.freq_eval && q.freq_eval) {
    out.freq_eval = [f = *p.freq_eval, g = *q.freq_eval, alpha,
                     beta](double k) { return alpha * f(k) + beta * g(k); };
  }
  if (!out.time_eval && !out.freq_eval) {
    throw DomainError("profiles share no evaluator domain");
  }
  auto slower = [](DecayHint a, DecayHint b) {
    if (a.kind == b.kind) {
      return a.kind == DecayHint::Kind::compact
                 ? DecayHint{a.kind, std::max(a.parameter, b.parameter)}
                 : DecayHint{a.kind, std::min(a.parameter, b.parameter)};
    }
    // Order of slowness: none > polynomial > exponential > compact.
    auto rank = [](DecayHint::Kind k) {
      switch (k) {
        case DecayHint::Kind::none:
          return 3;
        case DecayHint::Kind::polynomial:
          return 2;
        case DecayHint::Kind::exponential:
          return 1;
        case DecayHint::Kind::compact:
          return 0;
      }
      return 3;
    };
    return rank(a.kind) > rank(b.kind) ? a : b;
  };
  out.time_decay = slower(p.time_decay, q.time_decay);
  out.freq_decay = slower(p.freq_decay, q.freq_decay);
  out.freq_breakpoints = p.freq_breakpoints;
  out.freq_breakpoints.insert(out.freq_breakpoints.end(),
                              q.freq_breakpoints.begin(),
                              q.freq_breakpoints.end());
  std::sort(out.freq_breakpoints.begin(), out.freq_breakpoints.end());
  out.freq_breakpoints.erase(
      std::unique(out.freq_breakpoints.begin(), out.freq_breakpoints.end()),
      out.freq_breakpoints.end());
  out.label = "combination(" + p.label + "," + q.label + ")";
  return out;
}

/// Complex samples on a uniform grid.
class SampledSignal {
 public:
  /// Validates uniform spacing and matching lengths.
  SampledSignal(std::vector<double> grid, std::vector<complex> values)
      : grid_{std::move(grid)}, values_{std::move(values)} {
    if (grid_.size() != values_.size()) {
      throw DomainError("grid and values differ in length");
    }
    if (grid_.size() >= 2) {
      spacing_ = (grid_.back() - grid_.front()) /
                 static_cast<double>(grid_.size() - 1);
      if (!(spacing_ > 0.0)) {
        throw DomainError("grid must be strictly increasing");
      }
      const double scale =
          std::max(std::abs(grid_.front()), std::abs(grid_.back()));
      const double slack =
          std::max(64.0 * std::numeric_limits<double>::epsilon() * scale,
                   1e-9 * spacing_);
      for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double step = grid_[i] - grid_[i - 1];
        if (!(step > 0.0) || std::abs(step - spacing_) > slack) {
          throw DomainError("grid is not uniformly spaced");
        }
      }
    }
  }

  [[nodiscard]] auto grid() const noexcept -> const std::vector<double>& {
    return grid_;
  }
  [[nodiscard]] auto values() const noexcept -> const std::vector<complex>& {
    return values_;
  }
  [[nodiscard]] auto spacing() const noexcept -> double { return spacing_; }
  [[nodiscard]] auto size() const noexcept -> std::size_t {
    return grid_.size();
  }
  [[nodiscard]] auto empty() const noexcept -> bool { return grid_.empty(); }

 private:
  std::vector<double> grid_;
  std::vector<complex> values_;
  double spacing_ = 0.0;
};

/// n points t0, t0 + h, ..., t0 + (n-1) h.
inline auto uniform_grid(double t0, double spacing, std::size_t n)
    -> std::vector<double> {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = t0 + spacing * static_cast<double>(i);
  }
  return g;
}

/// n points evenly spanning [lo, hi] inclusive.
inline auto linspace(double lo, double hi, std::size_t n) -> std::vector<double> {
  if (n == 1) {
    return {lo};
  }
  std::vector<double> g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + step * static_cast<double>(i);
  }
  g.back() = hi;
  return g;
}

/// Complex samples of g^(k) on a frequency grid with per-point error bounds.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(std::vector<double> kgrid, std::vector<complex> values,
           std::vector<double> err_estimates)
      : kgrid_{std::move(kgrid)},
        values_{std::move(values)},
        err_{std::move(err_estimates)} {
    if (kgrid_.size() != values_.size() || kgrid_.size() != err_.size()) {
      throw DomainError("spectrum fields differ in length");
    }
    for (std::size_t i = 1; i < kgrid_.size(); ++i) {
      if (!(kgrid_[i] > kgrid_[i - 1])) {
        throw DomainError("spectrum kgrid must be strictly increasing");
      }
    }
    for (const double e : err_) {
      if (!(e >= 0.0)) {
        throw DomainError("spectrum error estimates must be nonnegative");
      }
    }
  }

  [[nodiscard]] auto kgrid() const noexcept -> const std::vector<double>& {
    return kgrid_;
  }
  [[nodiscard]] auto values() const noexcept -> const std::vector<complex>& {
    return values_;
  }
  [[nodiscard]] auto err_estimates() const noexcept
      -> const std::vector<double>& {
    return err_;
  }
  [[nodiscard]] auto size() const noexcept -> std::size_t {
    return kgrid_.size();
  }

 private:
  std::vector<double> kgrid_;
  std::vector<complex> values_;
  std::vector<double> err_;
};

/// sqrt(sum |v_i|^2 * spacing).
inline auto l2_norm(const SampledSignal& signal) -> double {
  if (signal.empty()) {
    throw DomainError("empty domain");
  }
  // Scale to avoid overflow in the squares.
  double peak = 0.0;
  for (const auto& v : signal.values()) {
    peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) {
    return 0.0;
  }
  double acc = 0.0;
  for (const auto& v : signal.values()) {
    acc += std::norm(v / peak);
  }
  const double h = signal.size() >= 2 ? signal.spacing() : 1.0;
  return peak * std::sqrt(acc * h);
}

/// Probes u and u' on [lo, hi] and checks sign constancy of u', the size of
/// |u'|, and that u' matches a central difference of u.
inline auto validate_warp(const Warp& warp, double lo, double hi,
                          std::size_t n_probes) -> WarpCertificate {
  if (!(hi > lo)) {
    throw DomainError("probe interval is empty");
  }
  if (n_probes < 16) {
    throw DomainError("validate_warp needs at least 16 probes");
  }
  WarpCertificate cert;
  cert.probe_interval = {lo, hi};
  cert.probe_count = n_probes;
  cert.min_abs_deriv = std::numeric_limits<double>::infinity();

  int sign = 0;
  bool sign_ok = true;
  bool finite = true;
  bool consistent = true;
  constexpr double h = 1e-4;
  for (const double t : linspace(lo, hi, n_probes)) {
    const double u = warp.eval(t);
    const double d = warp.deriv(t);
    if (!std::isfinite(u) || !std::isfinite(d)) {
      finite = false;
      break;
    }
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      sign_ok = false;
    }
    if (sign == 0) {
      sign = s;
    }
    cert.min_abs_deriv = std::min(cert.min_abs_deriv, std::abs(d));

    const double fd = (warp.eval(t + h) - warp.eval(t - h)) / (2.0 * h);
    if (std::abs(fd - d) > 1e-6 * (std::abs(d) + std::abs(u)) + 1e-9) {
      consistent = false;
    }
  }
  if (!finite) {
    cert.reason = "warp not finite on probe";
    cert.min_abs_deriv = 0.0;
    return cert;
  }
  cert.deriv_sign_constant = sign_ok;
  cert.deriv_consistent = consistent;
  cert.properness_witness =
      std::min(std::abs(warp.deriv(lo)), std::abs(warp.deriv(hi)));
  if (!sign_ok) {
    cert.reason = "u not monotone on probe";
  } else if (!consistent) {
    cert.reason = "deriv does not match eval";
  } else if (!(cert.min_abs_deriv > 0.0)) {
    cert.reason = "u' vanishes on probe";
  } else {
    cert.valid = true;
  }
  return cert;
}

/// values[i] = f(u(grid[i])). The grid must be uniform.
inline auto compose_signal(const Profile& profile, const Warp& warp,
                           const std::vector<double>& grid) -> SampledSignal {
  if (!profile.time_eval) {
    throw DomainError("profile has no time-domain evaluator");
  }
  std::vector<complex> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = (*profile.time_eval)(warp.eval(grid[i]));
  }
  return SampledSignal(grid, std::move(values));
}

/// Time-domain function used by the contraction check.
using SignalFn = std::function<complex(double)>;

struct ContractionOptions {
  /// The check runs over u^{-1}([-half_width, half_width]).
  double half_width = 20.0;
  double spacing = 2e-3;
  /// Multiplicative slack absorbing discretization error.
  double slack = 1e-6;
  std::size_t probes = 1024;
};

struct ContractionResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

namespace detail {

/// Solves u(t) = target for a monotone warp by bracketing and bisection.
inline auto invert_monotone(const Warp& warp, double target) -> double {
  const bool increasing = warp.deriv(0.0) > 0.0;
  auto below = [&](double t) {
    return increasing ? warp.eval(t) < target : warp.eval(t) > target;
  };
  double lo = -1.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && below(lo) == false; ++i) {
    lo *= 2.0;
  }
  for (int i = 0; i < 200 && below(hi); ++i) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Checks ||f_a o u - f_b o u||^2 <= (1/C) ||f_a - f_b||^2 on the x-window
/// [-half_width, half_width] and its preimage under u. Restricting both sides
/// to matching domains keeps the inequality exact under truncation.
inline auto lemma3_contraction_check(const SignalFn& f_a, const SignalFn& f_b,
                                     const Warp& warp, double C,
                                     const ContractionOptions& opt = {})
    -> ContractionResult {
  if (!(C > 0.0)) {
    throw DomainError("contraction constant must be positive");
  }
  const double X = opt.half_width;
  double t_lo = detail::invert_monotone(warp, -X);
  double t_hi = detail::invert_monotone(warp, X);
  if (t_lo > t_hi) {
    std::swap(t_lo, t_hi);
  }
  const auto cert = validate_warp(warp, t_lo, t_hi, opt.probes);
  if (!cert.valid || cert.min_abs_deriv < C) {
    throw HypothesisError("warp hypotheses not certified");
  }

  auto diff = [&](double x) { return f_a(x) - f_b(x); };

  const auto nx = static_cast<std::size_t>(std::ceil(2.0 * X / opt.spacing)) + 1;
  const auto xgrid = linspace(-X, X, nx);
  std::vector<complex> xv(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    xv[i] = diff(xgrid[i]);
  }
  const double norm_x = l2_norm(SampledSignal(xgrid, std::move(xv)));

  // Map each t-step to at most one x-step.
  const double max_deriv = std::max({std::abs(warp.deriv(t_lo)),
                                     std::abs(warp.deriv(t_hi)),
                                     cert.min_abs_deriv});
  double steepest = max_deriv;
  for (const double t : linspace(t_lo, t_hi, opt.probes)) {
    steepest = std::max(steepest, std::abs(warp.deriv(t)));
  }
  const double ht = opt.spacing / steepest;
  const auto nt = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / ht)) + 1;
  const auto tgrid = linspace(t_lo, t_hi, nt);
  std::vector<complex> tv(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    tv[i] = diff(warp.eval(tgrid[i]));
  }
  const double norm_t = l2_norm(SampledSignal(tgrid, std::move(tv)));

  ContractionResult out;
  out.lhs = norm_t * norm_t;
  out.rhs = norm_x * norm_x / C;
  out.holds = out.lhs <= out.rhs * (1.0 + opt.slack);
  return out;
}

}  // namespace warpft
