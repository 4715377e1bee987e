#pragma once

// Closed forms for the Lorentzian profile composed with the sinh warp:
//   f(x) = 1/(a^2 + x^2),  u(t) = sinh(b t),  g(t) = f(u(t)),
// together with the sinh-warp transfer kernel and a small registry of named
// profiles and warps used by the command-line tool.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "warpft/bessel.hpp"
#include "warpft/error.hpp"
#include "warpft/funcspace.hpp"

namespace warpft::catalog {

struct SinhLorentzParams {
  double a = 1.0;
  double b = 1.0;

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
      throw DomainError("sinh-lorentzian parameters must be positive");
    }
  }
};

inline constexpr double kBranchEps = 1e-8;

namespace detail {

/// sinh(x)/x, even, with the removable point handled.
inline auto sinhc(double x) -> double {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
  }
  return std::sinh(x) / x;
}

/// sin(x)/x.
inline auto sinc(double x) -> double {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

/// (S(a, nu) / nu) / sinhc(nu c), evaluated without overflow, where
/// S(a, nu) = sinh(nu arccos a)/sqrt(1 - a^2) on the principal branch
/// (sin(nu arccosh a)/sqrt(a^2 - 1) for a > 1). Even in nu.
inline auto branch_ratio(double a, double nu, double c) -> double {
  nu = std::abs(nu);
  const double x = nu * c;
  if (a < 1.0 - kBranchEps) {
    const double theta = std::acos(a);
    const double s = std::sin(theta);
    if (x < 20.0) {
      return theta * sinhc(nu * theta) / s / sinhc(x);
    }
    // sinh(nu theta)/sinh(nu c) through exponentials; theta may exceed c.
    const double num = -std::expm1(-2.0 * nu * theta);
    const double den = -std::expm1(-2.0 * x);
    return (c / s) * std::exp(nu * (theta - c)) * num / den;
  }
  if (a > 1.0 + kBranchEps) {
    const double y = std::acosh(a);
    const double sh = std::sinh(y);
    if (x < 20.0) {
      return y * sinc(nu * y) / sh / sinhc(x);
    }
    return c * std::sin(nu * y) / sh * 2.0 * std::exp(-x) /
           (-std::expm1(-2.0 * x));
  }
  // |a - 1| < kBranchEps: S/nu = 1 + (1 - a)(nu^2 + 1)/3 + O((1-a)^2).
  const double series = 1.0 + (1.0 - a) * (nu * nu + 1.0) / 3.0;
  if (x < 20.0) {
    return series / sinhc(x);
  }
  return series * x * 2.0 * std::exp(-x) / (-std::expm1(-2.0 * x));
}

}  // namespace detail

/// f^(k) for f(t) = 1/(a^2 + t^2): pi e^{-a|k|} / a.
inline auto lorentzian_hat(double a, double k) -> double {
  if (!(a > 0.0)) {
    throw DomainError("lorentzian scale must be positive");
  }
  return std::numbers::pi * std::exp(-a * std::abs(k)) / a;
}

inline auto lorentzian_time(double a, double t) -> double {
  if (!(a > 0.0)) {
    throw DomainError("lorentzian scale must be positive");
  }
  return 1.0 / (a * a + t * t);
}

/// H(k, l) for u(t) = sinh(b t): (2/b) e^{sgn(l) k pi/(2b)} K_{ik/b}(|l|).
inline auto sinh_kernel_closed(double b, double k, double l,
                               double rel_tol = 1e-12) -> complex {
  if (!(b > 0.0)) {
    throw DomainError("sinh rate must be positive");
  }
  if (l == 0.0) {
    throw DomainError(
        "kernel closed form undefined at l=0 (logarithmic divergence)");
  }
  const double sgn = l > 0.0 ? 1.0 : -1.0;
  const double pre = (2.0 / b) * std::exp(sgn * k * std::numbers::pi / (2.0 * b));
  return {pre * bessel::besselK_imag(k / b, std::abs(l), rel_tol), 0.0};
}

/// Upper bound on |H(k, l)| for the sinh warp: (2/b) e^{|k| pi/(2b)} K_0(|l|).
/// Below the Bessel module's argument floor, K_0(x) < -ln(x/2) is used.
inline auto sinh_kernel_envelope(double b, double k, double l) -> double {
  const double x = std::abs(l);
  const double pre = (2.0 / b) * std::exp(std::abs(k) * std::numbers::pi / (2.0 * b));
  if (x < 1e-5) {
    return pre * -std::log(0.5 * x);
  }
  return pre * bessel::besselK_imag(0.0, x, 1e-10) * (1.0 + 1e-9);
}

/// g^(k) for g(t) = 1/(a^2 + sinh^2(b t)), real-valued on every branch:
///   a < 1: (2 pi cosh(k pi/2b)) / (a b sinh(k pi/b)) * sinh((k/b) arccos a)/sqrt(1-a^2)
///   a > 1: the same with sin((k/b) arccosh a)/sqrt(a^2-1)
///   a = 1: the factor becomes k/b.
/// Computed as (2/(ab)) * (S/nu) / sinhc(nu pi/2) with nu = k/b.
inline auto sinh_lorentzian_hat(const SinhLorentzParams& p, double k) -> double {
  p.validate();
  const double nu = k / p.b;
  return 2.0 / (p.a * p.b) *
         detail::branch_ratio(p.a, nu, 0.5 * std::numbers::pi);
}

/// integral_0^inf e^{-a l} K_{i nu}(l) dl
///   = pi sinh(nu arccos a) / (sinh(nu pi) sqrt(1 - a^2)),
/// with nu = 0 limit arccos(a)/sqrt(1 - a^2) and the real forms for a >= 1.
inline auto gr_6611_integral(double a, double nu) -> double {
  if (!(a > 0.0)) {
    throw DomainError("exponential rate must be positive");
  }
  return detail::branch_ratio(a, nu, std::numbers::pi);
}

inline auto g_time(const SinhLorentzParams& p, double t) -> double {
  p.validate();
  const double s = std::sinh(p.b * t);
  return 1.0 / (p.a * p.a + s * s);
}

/// Exponential decay rate of g^ in k, lowered slightly to cover the
/// polynomial prefactor at a = 1.
inline auto sinh_lorentzian_freq_rate(const SinhLorentzParams& p) -> double {
  const double c = 0.5 * std::numbers::pi;
  const double excess = p.a < 1.0 ? std::acos(p.a) : 0.0;
  return 0.9 * (c - excess) / p.b;
}

// ---------------------------------------------------------------------------
// Registry

using ParamMap = std::map<std::string, double>;

/// "id" or "id:key=value,key=value".
struct EntrySpec {
  std::string id;
  ParamMap params;
};

inline auto parse_entry_spec(const std::string& text) -> EntrySpec {
  EntrySpec spec;
  const auto colon = text.find(':');
  spec.id = text.substr(0, colon);
  if (spec.id.empty()) {
    throw DomainError("empty catalog id");
  }
  if (colon == std::string::npos) {
    return spec;
  }
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item =
        rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                    : comma - pos);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw DomainError("malformed parameter '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      const std::string val = item.substr(eq + 1);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(val, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != val.size() || val.empty()) {
        throw DomainError("parameter '" + key + "' is not a number");
      }
      spec.params[key] = v;
    }
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return spec;
}

namespace detail {

inline auto take(ParamMap& params, const std::string& key, double fallback)
    -> double {
  const auto it = params.find(key);
  if (it == params.end()) {
    return fallback;
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

inline void reject_leftovers(const ParamMap& params, const std::string& id) {
  if (!params.empty()) {
    throw DomainError("unknown parameter '" + params.begin()->first +
                      "' for '" + id + "'");
  }
}

inline auto positive(double v, const char* what) -> double {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive");
  }
  return v;
}

}  // namespace detail

inline auto lorentzian_profile(double a) -> Profile {
  detail::positive(a, "lorentzian scale a");
  return make_profile([a](double t) { return lorentzian_time(a, t); },
                      [a](double k) { return complex{lorentzian_hat(a, k), 0.0}; },
                      DecayHint::polynomial(2.0), DecayHint::exponential(a),
                      "lorentzian", {0.0});
}

inline auto gaussian_profile(double sigma) -> Profile {
  detail::positive(sigma, "gaussian width sigma");
  const double root = std::sqrt(2.0 * std::numbers::pi) * sigma;
  // e^{-t^2/(2 sigma^2)} is bounded by e^{-|t|/sigma + 1/2}.
  return make_profile(
      [sigma](double t) { return std::exp(-0.5 * t * t / (sigma * sigma)); },
      [sigma, root](double k) {
        return complex{root * std::exp(-0.5 * k * k * sigma * sigma), 0.0};
      },
      DecayHint::exponential(1.0 / sigma), DecayHint::exponential(sigma),
      "gaussian");
}

inline auto zero_profile() -> Profile {
  return make_profile([](double) { return 0.0; },
                      [](double) { return complex{}; },
                      DecayHint::compact(0.0), DecayHint::compact(0.0), "zero");
}

/// g = lorentzian(a) composed with sinh(b t), with both evaluators.
inline auto sinh_lorentzian_profile(const SinhLorentzParams& p) -> Profile {
  p.validate();
  return make_profile(
      [p](double t) { return g_time(p, t); },
      [p](double k) { return complex{sinh_lorentzian_hat(p, k), 0.0}; },
      DecayHint::exponential(2.0 * p.b),
      DecayHint::exponential(sinh_lorentzian_freq_rate(p)), "sinh-lorentzian");
}

inline auto sinh_warp(double b) -> Warp {
  detail::positive(b, "sinh rate b");
  Warp w;
  w.eval = [b](double t) { return std::sinh(b * t); };
  w.deriv = [b](double t) { return b * std::cosh(b * t); };
  w.label = "sinh";
  w.tail_onset = 0.0;
  w.closed_kernel = [b](double k, double l) { return sinh_kernel_closed(b, k, l); };
  w.kernel_envelope = [b](double k, double l) {
    return sinh_kernel_envelope(b, k, l);
  };
  return w;
}

/// u(t) = t + c t^3, c > 0. No closed-form kernel.
inline auto cubic_warp(double c) -> Warp {
  detail::positive(c, "cubic coefficient c");
  Warp w;
  w.eval = [c](double t) { return t + c * t * t * t; };
  w.deriv = [c](double t) { return 1.0 + 3.0 * c * t * t; };
  w.label = "cubic";
  return w;
}

/// u(t) = t^2; fails certification, kept for negative tests.
inline auto square_warp() -> Warp {
  Warp w;
  w.eval = [](double t) { return t * t; };
  w.deriv = [](double t) { return 2.0 * t; };
  w.label = "square";
  return w;
}

inline auto profile_ids() -> std::vector<std::string> {
  return {"lorentzian", "gaussian", "sinh-lorentzian", "zero"};
}

inline auto warp_ids() -> std::vector<std::string> {
  return {"sinh", "sinh-warp", "cubic", "square"};
}

inline auto make_profile_from(const EntrySpec& spec) -> Profile {
  ParamMap params = spec.params;
  Profile out;
  if (spec.id == "lorentzian") {
    out = lorentzian_profile(detail::take(params, "a", 1.0));
  } else if (spec.id == "gaussian") {
    out = gaussian_profile(detail::take(params, "sigma", 1.0));
  } else if (spec.id == "sinh-lorentzian") {
    SinhLorentzParams p{detail::take(params, "a", 1.0),
                        detail::take(params, "b", 1.0)};
    out = sinh_lorentzian_profile(p);
  } else if (spec.id == "zero") {
    out = zero_profile();
  } else {
    throw DomainError("unknown profile id '" + spec.id + "'");
  }
  detail::reject_leftovers(params, spec.id);
  return out;
}

inline auto make_warp_from(const EntrySpec& spec) -> Warp {
  ParamMap params = spec.params;
  Warp out;
  if (spec.id == "sinh" || spec.id == "sinh-warp") {
    out = sinh_warp(detail::take(params, "b", 1.0));
  } else if (spec.id == "cubic") {
    out = cubic_warp(detail::take(params, "c", 1.0));
  } else if (spec.id == "square") {
    out = square_warp();
  } else {
    throw DomainError("unknown warp id '" + spec.id + "'");
  }
  detail::reject_leftovers(params, spec.id);
  return out;
}

/// A profile/warp pair as used by the transform pipeline, plus the exact
/// transform of the composition when the catalog knows it.
struct Composition {
  Profile profile;
  Warp warp;
  std::optional<std::function<double(double)>> target;
  std::string description;
};

/// Resolves the CLI pair. "sinh-lorentzian" given as a profile without a
/// warp is split into lorentzian(a) and sinh(b).
inline auto resolve_composition(const EntrySpec& profile,
                                const std::optional<EntrySpec>& warp)
    -> Composition {
  Composition out;
  if (profile.id == "sinh-lorentzian" && !warp) {
    ParamMap params = profile.params;
    SinhLorentzParams p{detail::take(params, "a", 1.0),
                        detail::take(params, "b", 1.0)};
    detail::reject_leftovers(params, profile.id);
    p.validate();
    out.profile = lorentzian_profile(p.a);
    out.warp = sinh_warp(p.b);
    out.target = [p](double k) { return sinh_lorentzian_hat(p, k); };
    out.description = "lorentzian(a) o sinh(b t)";
    return out;
  }
  if (!warp) {
    throw DomainError("a warp is required for profile '" + profile.id + "'");
  }
  out.profile = make_profile_from(profile);
  out.warp = make_warp_from(*warp);
  if (profile.id == "lorentzian" &&
      (warp->id == "sinh" || warp->id == "sinh-warp")) {
    SinhLorentzParams p{profile.params.count("a") ? profile.params.at("a") : 1.0,
                        warp->params.count("b") ? warp->params.at("b") : 1.0};
    out.target = [p](double k) { return sinh_lorentzian_hat(p, k); };
  } else if (profile.id == "zero") {
    out.target = [](double) { return 0.0; };
  }
  out.description = profile.id + " o " + warp->id;
  return out;
}

}  // namespace warpft::catalog
